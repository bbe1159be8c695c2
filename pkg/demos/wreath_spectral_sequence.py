"""Two spectral sequences for the extension (Z/2)^n -> Z/2 wr S_n -> S_n.

Bar(N_n) tensored with the central stability complex is a double complex.
Filtering by bar degree gives E1 = bar chains on central stability
homology; filtering the other way gives E2 = central stability homology
of the modules H_t((Z/2)^n) over the symmetric groups.  Both converge to
the same total homology.
"""
from censtab import StabilityCategory, free_module, kernel_homology_module, make_wreath_ses, ses_page_comparison
from censtab.exact import GF, QQ

S = make_wreath_ses(2)
print(S.name, "| exact:", S.check(3)["passed"])

for ring in (GF(2), QQ):
    V = free_module(StabilityCategory(S.G), 0, 2, ring)
    print(f"\nH_t((Z/2)^n; {ring}) as modules over the symmetric groups:")
    for t in range(3):
        print(f"  t={t}: dims {list(kernel_homology_module(S, V, t).dims)}")
    res = ses_page_comparison(S, V, 2, 2)
    rows2 = res["rows"][2].dims
    print(f"  row filtration E2 at n=2 (s, t): dim")
    for key in sorted(rows2):
        if sum(key) <= 2 and rows2[key]:
            print(f"    {key}: {rows2[key]}")
    print("  total homology:", res["total"])

"""Homological stability read off from central stability homology.

If H_j(V)_n vanishes for n >= 2j + a then H_i(S_n; V_n) -> H_i(S_{n+1}; V_{n+1})
is onto for n >= 2i + a - 1 and an isomorphism for n >= 2i + a.
"""
from censtab import Groupoid, StabilityCategory, free_module, reexpress_range, stabilization_range_check
from censtab.exact import GF, QQ

cat = StabilityCategory(Groupoid.symmetric())
for label, m, ring, window in (("constant, F2", 0, GF(2), (1, 2)), ("permutation, Q", 1, QQ, (1, 3))):
    k, a = reexpress_range(*window)
    rep = stabilization_range_check(free_module(cat, m, 5, ring), k, a, 1, 5)
    print(f"{label}: slope {k}, offset {a}, claims hold: {rep['passed']}")
    for r in rep["rows"]:
        tag = "iso" if r["iso"] else ("onto" if r["epi"] else "-")
        print(f"  H_{r['i']}  n={r['n']} -> {r['n'] + 1}: {r['dim_source']} -> {r['dim_target']}  {tag}")

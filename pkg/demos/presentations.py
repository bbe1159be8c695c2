"""Building modules from presentations and measuring their degrees.

The standard module sits inside the permutation module R Hom(1, -) as the
vectors with coordinate sum zero.  It is generated in rank 2 with
relations in ranks 2 and 3.
"""
from censtab import (Groupoid, Presentation, StabilityCategory, central_stability_degree, cs_homology_table,
                     generation_degree, kan_colim_check, polynomial_degree, present, validate)

cat = StabilityCategory(Groupoid.symmetric())
swap = cat.iso(cat.G.from_word("2,1"))
P = Presentation(
    gen_ranks=[2], rel_ranks=[2, 3],
    entries={(0, 0): [(1, cat.identity(2)), (1, swap)],
             (1, 0): [(1, cat.from_injection(3, [0, 1])), (1, cat.from_injection(3, [1, 2])),
                      (1, cat.from_injection(3, [2, 0]))]},
    label="standard")
V = present(cat, P, 6)
print(V)
print("valid:", validate(V)["passed"])

T = cs_homology_table(V, 1, 6)
print("\n  i \\ n " + " ".join(f"{n:3d}" for n in range(7)))
for i in (-1, 0, 1):
    print(f"  {i:5d} " + " ".join(f"{T[(i, n)]:3d}" for n in range(7)))

print("\ngeneration degree:", generation_degree(V).value)
print("central stability degree:", central_stability_degree(V).value)
print("polynomial degree in ranks > 0:", polynomial_degree(V, 0).value)

# V is the left Kan extension of its restriction to ranks <= d exactly when d >= 3
for d in range(5):
    print(f"Kan extension from ranks <= {d}:", all(kan_colim_check(V, d, n) for n in range(3, 7)))

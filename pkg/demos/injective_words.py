"""Homology of the complex of injective words.

The constant module R Hom(0, -) has the injective-word complex as its
central stability complex.  It is highly connected, and its top homology
counts derangements.
"""
from math import factorial

from censtab import Groupoid, StabilityCategory, cs_complex, free_module

cat = StabilityCategory(Groupoid.symmetric())
V = free_module(cat, 0, 5)

print("n  chain dims                     homology")
for n in range(1, 6):
    chain = cs_complex(V, n).chain
    dims = [chain.dims[p] for p in range(-1, n)]
    hom = chain.homology_dims()
    print(f"{n}  {str(dims):30s} {[hom[p] for p in range(-1, n)]}")

# derangement numbers, by inclusion-exclusion
print("\nderangements:", [sum((-1) ** k * factorial(n) // factorial(k) for k in range(n + 1)) for n in range(1, 6)])

# the semisimplicial set itself, small enough to read
K = cat.k_set(0, 3)
print("\n1-simplices of K(3):", [s.word() for s, _ in K.levels[1]])
print("their faces (indices into the 0-simplices):", K.faces[1])

"""Independent reference computations for tests.

Nothing here imports the package's linear algebra; everything is plain
Fraction Gaussian elimination on dense lists or brute-force enumeration.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial


def dense_rank(rows, p: int | None = None) -> int:
    """Rank of a dense matrix over Q (p=None) or F_p."""
    if p is None:
        A = [[Fraction(x) for x in r] for r in rows]
    else:
        A = [[int(x) % p for x in r] for r in rows]
    if not A or not A[0]:
        return 0
    rk = 0
    for c in range(len(A[0])):
        piv = next((r for r in range(rk, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        for r in range(len(A)):
            if r != rk and A[r][c] != 0:
                if p is None:
                    f = A[r][c] / A[rk][c]
                    A[r] = [x - f * y for x, y in zip(A[r], A[rk])]
                else:
                    f = A[r][c] * pow(A[rk][c], -1, p) % p
                    A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rk])]
        rk += 1
    return rk


def dense_det(rows) -> Fraction:
    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def injective_words_homology(n: int) -> dict[int, int]:
    """Reduced homology of the complex of injective words on n letters over Q."""
    words = {p: list(itertools.permutations(range(n), p + 1)) for p in range(-1, n)}
    idx = {p: {w: k for k, w in enumerate(ws)} for p, ws in words.items()}
    ranks = {}
    for p in range(0, n):
        M = [[0] * len(words[p]) for _ in words[p - 1]]
        for k, w in enumerate(words[p]):
            for i in range(len(w)):
                M[idx[p - 1][w[:i] + w[i + 1:]]][k] += (-1) ** i
        ranks[p] = dense_rank(M)
    return {p: len(words[p]) - ranks.get(p, 0) - ranks.get(p + 1, 0) for p in range(-1, n)}


def derangements(n: int) -> int:
    return sum((-1) ** k * factorial(n) // factorial(k) for k in range(n + 1))


def abelian_group_homology_f2(rank: int, q: int) -> int:
    """dim H_q((Z/2)^rank; F_2) = C(q + rank - 1, q) (Kunneth)."""
    if rank == 0:
        return 1 if q == 0 else 0
    return factorial(q + rank - 1) // (factorial(q) * factorial(rank - 1))


# Values frozen from the oracles above (recomputed in test_oracles.py).
INJECTIVE_WORDS_TOP = {1: 0, 2: 1, 3: 2, 4: 9, 5: 44}
CONSTANT_MODULE_NONZERO = {(-1, 0): 1, (1, 2): 1, (2, 3): 2}  # i <= 2, n <= 7
FREE1_NONZERO = {(-1, 1): 1, (1, 3): 3}  # i <= 1, n <= 7
FREE2_NONZERO = {(-1, 2): 2, (1, 4): 12}  # i <= 1, n <= 7

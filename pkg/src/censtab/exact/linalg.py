"""Exact elimination: rank, reduced echelon form, kernels and cokernels.

Rank uses incremental reduction of sparse vectors (lowest index pivot).
Over Q vectors are scaled to primitive integer vectors and reduced
fraction-free, which is much faster than Fraction arithmetic.

Bases returned by rref/kernel_basis/cokernel come from the reduced row
echelon form, which is unique, so they do not depend on pivot order.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple

from .matrix import ExactMatrix, BudgetExceeded
from .ring import Ring, QQ, ZZ, GF


def _to_int_vector(v: dict) -> dict:
    den = 1
    for x in v.values():
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return {k: int(x) for k, x in v.items() if x}
    return {k: int(x * den) for k, x in v.items() if x}


def _primitive(v: dict) -> dict:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {k: x // g for k, x in v.items()}
    return v


def _to_bits(v: dict) -> int:
    x = 0
    for k, a in v.items():
        if a % 2:
            x |= 1 << k
    return x


def _from_bits(x: int) -> dict:
    out = {}
    while x:
        low = x & -x
        out[low.bit_length() - 1] = 1
        x ^= low
    return out


class Echelon:
    """Incrementally built echelon basis of a subspace of R^N.

    ``add`` reduces a vector against the basis and stores the remainder
    if it is nonzero.  Over Q (and Z, for rank purposes) vectors are kept
    as primitive integer vectors.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self.p = ring.characteristic
        self.basis: dict[int, dict] = {}
        self._bits: dict[int, int] = {}  # F_2: vectors as integer bitmasks

    @property
    def rank(self) -> int:
        return len(self._bits) if self.p == 2 else len(self.basis)

    def _reduce_bits(self, v: int) -> int:
        bits = self._bits
        while v:
            low = (v & -v).bit_length() - 1
            b = bits.get(low)
            if b is None:
                return v
            v ^= b
        return 0

    def reduce(self, v: dict) -> dict:
        if self.p == 2:
            r = self._reduce_bits(_to_bits(v))
            return _from_bits(r)
        basis = self.basis
        if self.p:
            p = self.p
            v = {k: x % p for k, x in v.items() if x % p}
            while v:
                piv = min(v)
                b = basis.get(piv)
                if b is None:
                    return v
                c = v[piv]
                for k, x in b.items():
                    y = (v.get(k, 0) - c * x) % p
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
            return v
        v = _primitive(_to_int_vector(v))
        while v:
            piv = min(v)
            b = basis.get(piv)
            if b is None:
                return v
            a = b[piv]
            c = v[piv]
            g = gcd(a, c)
            a, c = a // g, c // g
            new = {}
            for k, x in v.items():
                new[k] = a * x
            for k, x in b.items():
                y = new.get(k, 0) - c * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            v = _primitive(new)
        return v

    def add(self, v: dict) -> bool:
        if self.p == 2:
            r = self._reduce_bits(_to_bits(v))
            if not r:
                return False
            self._bits[(r & -r).bit_length() - 1] = r
            return True
        r = self.reduce(v)
        if not r:
            return False
        piv = min(r)
        if self.p:
            inv = pow(r[piv], -1, self.p)
            r = {k: x * inv % self.p for k, x in r.items()}
        elif r[piv] < 0:
            r = {k: -x for k, x in r.items()}
        self.basis[piv] = r
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(dict(v))


def rank(M: ExactMatrix, bound: int | None = None, budget: int | None = None) -> int:
    """Rank of M.  Stops early once the rank reaches ``bound``."""
    if budget is not None and M.nnz() > budget:
        raise BudgetExceeded(f"matrix with {M.nnz()} nonzeros exceeds budget {budget}")
    vecs = M.columns() if M.ncols >= M.nrows else M.rows()
    return rank_of_vectors(M.ring, vecs, bound=bound if bound is not None else min(M.shape))


def rank_of_vectors(ring: Ring, vectors: Iterable[dict], bound: int | None = None) -> int:
    E = Echelon(ring)
    if bound == 0:
        return 0
    for v in vectors:
        if v and E.add(dict(v)) and bound is not None and E.rank >= bound:
            break
    return E.rank


def rank_multimodular(M: ExactMatrix, primes=(2147483647, 2147483629, 2147483587)) -> int:
    """Rank over Q from reductions modulo large primes.

    For an integer matrix the rank modulo p never exceeds the rational
    rank; the maximum over a few large primes is the rational rank except
    for matrices whose minors all vanish at those primes.
    """
    if M.ring != QQ and M.ring != ZZ:
        raise ValueError("multimodular rank needs an integral matrix")
    rows = [_to_int_vector(r) for r in M.rows()]
    best = 0
    for p in primes:
        F = GF(p)
        E = Echelon(F)
        vecs = rows if M.nrows <= M.ncols else None
        if vecs is None:
            cols = ExactMatrix(ZZ, M.nrows, M.ncols, rows).columns()
            vecs = cols
        for v in vecs:
            if v:
                E.add(v)
        best = max(best, E.rank)
    return best


def _field_ops(ring: Ring):
    if ring.characteristic:
        p = ring.characteristic
        return (lambda x: x % p), (lambda x: pow(x, -1, p))
    if not ring.is_field:
        raise ValueError(f"elimination over {ring} requires a field; use snf for Z")
    return (lambda x: x), (lambda x: 1 / Fraction(x))


def _rref_bits(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    piv_rows: dict[int, int] = {}
    for r in M.rows():
        v = _to_bits(r)
        for pc, row in piv_rows.items():
            if v >> pc & 1:
                v ^= row
        if not v:
            continue
        lead = (v & -v).bit_length() - 1
        for pc in piv_rows:
            if piv_rows[pc] >> lead & 1:
                piv_rows[pc] ^= v
        piv_rows[lead] = v
    pivots = sorted(piv_rows)
    return ExactMatrix(M.ring, len(pivots), M.ncols, [_from_bits(piv_rows[p]) for p in pivots]), pivots


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns."""
    if M.ring.characteristic == 2:
        return _rref_bits(M)
    norm, inv = _field_ops(M.ring)
    piv_rows: dict[int, dict] = {}
    for r in M.rows():
        if not r:
            continue
        v = dict(r)
        # clear pivot columns (pivot rows are fully reduced)
        for pc in [c for c in v if c in piv_rows]:
            c = v.get(pc)
            if not c:
                continue
            for k, x in piv_rows[pc].items():
                y = norm(v.get(k, 0) - c * x)
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        if not v:
            continue
        lead = min(v)
        s = inv(v[lead])
        v = {k: norm(x * s) for k, x in v.items()}
        v = {k: x for k, x in v.items() if x}
        for pc, row in piv_rows.items():
            c = row.get(lead)
            if c:
                for k, x in v.items():
                    y = norm(row.get(k, 0) - c * x)
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        piv_rows[lead] = v
    pivots = sorted(piv_rows)
    R = ExactMatrix(M.ring, len(pivots), M.ncols, [piv_rows[p] for p in pivots])
    return R, pivots


def kernel_basis(M: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of {x : M x = 0}."""
    R, pivots = rref(M)
    pset = set(pivots)
    free = [j for j in range(M.ncols) if j not in pset]
    one = M.ring.coerce(1)
    p = M.ring.characteristic
    cols = []
    for f in free:
        col = {f: one}
        for row, pc in zip(R.rows(), pivots):
            x = row.get(f)
            if x:
                col[pc] = (-x) % p if p else -x
        cols.append(col)
    return ExactMatrix.from_columns(M.ring, M.ncols, cols)


class Cokernel(NamedTuple):
    """proj: R^rows -> R^k kills the image; proj @ section = I_k."""

    proj: ExactMatrix
    section: ExactMatrix
    image_pivots: list[int]


def cokernel(M: ExactMatrix) -> Cokernel:
    R, pivots = rref(M.T)
    pset = set(pivots)
    keep = [j for j in range(M.nrows) if j not in pset]
    pos = {j: a for a, j in enumerate(keep)}
    one = M.ring.coerce(1)
    p = M.ring.characteristic
    rows = [dict() for _ in keep]
    for a, j in enumerate(keep):
        rows[a][j] = one
    for row, pc in zip(R.rows(), pivots):
        for j, x in row.items():
            a = pos.get(j)
            if a is not None:
                rows[a][pc] = (-x) % p if p else -x
    proj = ExactMatrix(M.ring, len(keep), M.nrows, rows)
    section = ExactMatrix.from_columns(M.ring, M.nrows, [{j: one} for j in keep])
    return Cokernel(proj, section, pivots)


def image_basis(M: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the column space (canonical: rows of rref(M^T))."""
    R, _ = rref(M.T)
    return R.T


def inverse(A: ExactMatrix) -> ExactMatrix:
    n = A.nrows
    if A.ncols != n:
        raise ValueError("inverse of non-square matrix")
    aug = ExactMatrix.hstack([A, ExactMatrix.identity(A.ring, n)])
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(list(range(n)), list(range(n, 2 * n)))


def left_inverse(K: ExactMatrix) -> ExactMatrix:
    """L with L @ K = I for K with independent columns."""
    k = K.ncols
    if k == 0:
        return ExactMatrix(K.ring, 0, K.nrows)
    _, pivots = rref(K.T)
    if len(pivots) != k:
        raise ValueError("columns are dependent")
    Kp = K.submatrix(pivots, list(range(k)))
    Kinv = inverse(Kp)
    sel = ExactMatrix.from_entries(K.ring, k, K.nrows, [(a, r, 1) for a, r in enumerate(pivots)])
    return Kinv @ sel


def solve_in_span(B: ExactMatrix, Y: ExactMatrix) -> ExactMatrix:
    """X with B X = Y, for B with independent columns and Y in its span."""
    L = left_inverse(B)
    X = L @ Y
    if B @ X != Y:
        raise ValueError("right-hand side is not in the column span")
    return X

"""Double complexes and the pages of their two spectral sequences.

Cells are indexed (p, q) with the horizontal map d_h: (p, q) -> (p-1, q)
and the vertical map d_v: (p, q) -> (p, q-1).  The total differential is
d_h + (-1)^p d_v.

Pages are computed from the filtered total complex:

    Z^r_s = {x in F_s : dx in F_{s-r}}
    E^r_s = Z^r_s / (Z^{r-1}_{s-1} + d Z^{r-1}_{s+r-1})

with Z^r_s = F_s for r <= 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chain import InvariantViolation, ChainLayer
from .linalg import kernel_basis, rank, image_basis
from .matrix import ExactMatrix


@dataclass
class DoubleComplex:
    ring: object
    dims: dict[tuple[int, int], int]
    dh: dict[tuple[int, int], ExactMatrix]
    dv: dict[tuple[int, int], ExactMatrix]
    valid_degree: int  # pages are reliable in total degrees <= this

    def check(self) -> None:
        R = self.ring
        for (p, q), d in self.dh.items():
            if d.shape != (self.dims[(p - 1, q)], self.dims[(p, q)]):
                raise InvariantViolation(f"d_h shape at {(p, q)}")
            e = self.dh.get((p - 1, q))
            if e is not None and not (e @ d).is_zero():
                raise InvariantViolation(f"d_h squared nonzero at {(p, q)}")
        for (p, q), d in self.dv.items():
            if d.shape != (self.dims[(p, q - 1)], self.dims[(p, q)]):
                raise InvariantViolation(f"d_v shape at {(p, q)}")
            e = self.dv.get((p, q - 1))
            if e is not None and not (e @ d).is_zero():
                raise InvariantViolation(f"d_v squared nonzero at {(p, q)}")
        for (p, q) in self.dims:
            a = self.dh.get((p, q))
            b = self.dv.get((p, q))
            if a is None or b is None:
                continue
            c1 = self.dv.get((p - 1, q))
            c2 = self.dh.get((p, q - 1))
            if c1 is None or c2 is None:
                continue
            if (c1 @ a) != (c2 @ b):
                raise InvariantViolation(f"d_h and d_v do not commute at {(p, q)}")

    # -- total complex -------------------------------------------------------

    def cells_in_degree(self, k: int) -> list[tuple[int, int]]:
        return sorted(c for c in self.dims if c[0] + c[1] == k)

    def _layout(self, k: int):
        off = {}
        pos = 0
        for c in self.cells_in_degree(k):
            off[c] = pos
            pos += self.dims[c]
        return off, pos

    def total_differential(self, k: int) -> ExactMatrix:
        src, ns = self._layout(k)
        tgt, nt = self._layout(k - 1)
        ents = []
        for (p, q), o in src.items():
            d = self.dh.get((p, q))
            if d is not None and (p - 1, q) in tgt:
                ot = tgt[(p - 1, q)]
                ents += [(ot + i, o + j, v) for i, j, v in d.entries()]
            d = self.dv.get((p, q))
            if d is not None and (p, q - 1) in tgt:
                ot = tgt[(p, q - 1)]
                sgn = -1 if p % 2 else 1
                ents += [(ot + i, o + j, sgn * v) for i, j, v in d.entries()]
        return ExactMatrix.from_entries(self.ring, nt, ns, ents)

    def total_complex(self) -> ChainLayer:
        degs = sorted({p + q for p, q in self.dims})
        dims = {k: self._layout(k)[1] for k in degs}
        bds = {k: self.total_differential(k) for k in degs if k - 1 in dims}
        return ChainLayer(self.ring, dims, bds, truncated=True)

    def filtration_degrees(self, k: int, by: str) -> list[int]:
        """Filtration index of each basis vector of Tot_k."""
        out = []
        for (p, q) in self.cells_in_degree(k):
            s = p if by == "columns" else q
            out += [s] * self.dims[(p, q)]
        return out


@dataclass
class SSPage:
    r: int
    by: str
    dims: dict[tuple[int, int], int]  # (filtration degree s, complementary degree t)

    def diagonal(self, k: int) -> int:
        return sum(v for (s, t), v in self.dims.items() if s + t == k)


def _coordinate_projection(ring, filt, keep_above):
    """Rows selecting coordinates whose filtration exceeds keep_above."""
    idx = [i for i, s in enumerate(filt) if s > keep_above]
    return ExactMatrix.from_entries(ring, len(idx), len(filt), [(a, i, 1) for a, i in enumerate(idx)])


def _coord_subspace(ring, filt, s):
    idx = [i for i, f in enumerate(filt) if f <= s]
    return ExactMatrix.from_entries(ring, len(filt), len(idx), [(i, a, 1) for a, i in enumerate(idx)])


def ss_pages(D: DoubleComplex, by: str, r_max: int) -> list[SSPage]:
    """Pages E^0..E^r_max in total degrees <= D.valid_degree.

    ``by='columns'`` filters by p (first index), ``by='rows'`` by q.  Page
    dimensions are keyed (s, t) with s the filtration index and t = k - s.
    """
    if by not in ("columns", "rows"):
        raise ValueError("filtration must be 'columns' or 'rows'")
    R = D.ring
    degs = sorted({p + q for p, q in D.dims})
    kmin = degs[0]
    dmat = {k: D.total_differential(k) for k in degs}
    filt = {k: D.filtration_degrees(k, by) for k in degs}
    cache: dict = {}

    def Z(k, r, s):
        """Basis (columns) of Z^r_s in Tot_k."""
        key = (k, max(r, 0), s)
        if key in cache:
            return cache[key]
        F = _coord_subspace(R, filt[k], s)
        if r <= 0 or k - 1 not in filt:
            out = F
        else:
            P = _coordinate_projection(R, filt[k - 1], s - r)
            K = kernel_basis(P @ dmat[k] @ F)
            out = F @ K
        cache[key] = out
        return out

    pages = []
    for r in range(r_max + 1):
        dims = {}
        for k in degs:
            if k > D.valid_degree:
                continue
            svals = sorted(set(filt[k]))
            for s in svals:
                num = Z(k, r, s)
                zn = num.ncols
                if zn == 0:
                    dims[(s, k - s)] = 0
                    continue
                parts = [Z(k, r - 1, s - 1)]
                if k + 1 in filt:
                    parts.append(dmat[k + 1] @ Z(k + 1, r - 1, s + r - 1))
                den = ExactMatrix.hstack(parts) if parts else None
                rk = rank(den) if den is not None and den.ncols else 0
                dims[(s, k - s)] = zn - rk
        pages.append(SSPage(r, by, dims))
    return pages


def total_homology(D: DoubleComplex) -> dict[int, int]:
    T = D.total_complex()
    return {k: v for k, v in T.homology_dims().items() if k <= D.valid_degree}

"""Bounded chain complexes and their homology."""
from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import rank
from .matrix import ExactMatrix
from .snf import snf


class InvariantViolation(AssertionError):
    """An algebraic invariant that must always hold was found broken."""


@dataclass
class ChainLayer:
    """C_lo <- ... <- C_hi with boundaries[p]: C_p -> C_{p-1}.

    ``boundaries`` holds the maps for lo < p <= hi.  ``truncated`` marks a
    complex cut off above hi; its top homology is then the cycle space.
    """

    ring: object
    dims: dict[int, int]
    boundaries: dict[int, ExactMatrix]
    truncated: bool = False
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def lo(self) -> int:
        return min(self.dims)

    @property
    def hi(self) -> int:
        return max(self.dims)

    def boundary_rank(self, p: int) -> int:
        if p not in self._ranks:
            d = self.boundaries.get(p)
            self._ranks[p] = 0 if d is None else rank(d)
        return self._ranks[p]

    def check_square_zero(self) -> None:
        for p in range(self.lo + 2, self.hi + 1):
            a, b = self.boundaries.get(p - 1), self.boundaries.get(p)
            if a is not None and b is not None and not (a @ b).is_zero():
                raise InvariantViolation(f"boundary squared is nonzero at degree {p}")

    def check_shapes(self) -> None:
        for p, d in self.boundaries.items():
            if d.shape != (self.dims[p - 1], self.dims[p]):
                raise InvariantViolation(f"boundary {p} has shape {d.shape}")

    def homology_dims(self) -> dict[int, int]:
        """dim H_p = dim C_p - rank d_p - rank d_{p+1} (fields only)."""
        if not self.ring.is_field:
            return {p: r for p, (r, _) in self.integral_homology().items()}
        out = {}
        for p in range(self.lo, self.hi + 1):
            out[p] = self.dims[p] - self.boundary_rank(p) - self.boundary_rank(p + 1)
        self.check_dimension_law(out)
        self.check_euler(out)
        return out

    def homology_dim(self, p: int) -> int:
        return self.dims[p] - self.boundary_rank(p) - self.boundary_rank(p + 1)

    def integral_homology(self) -> dict[int, tuple[int, list[int]]]:
        """(free rank, torsion coefficients) in each degree, via Smith form."""
        invs = {p: snf(d) for p, d in self.boundaries.items()}
        out = {}
        for p in range(self.lo, self.hi + 1):
            r_out = len(invs.get(p, []))
            inc = invs.get(p + 1, [])
            free = self.dims[p] - r_out - len(inc)
            out[p] = (free, [d for d in inc if d > 1])
        return out

    def check_dimension_law(self, h: dict[int, int]) -> None:
        # dim C_p = dim Z_p + rank d_p and dim Z_p = rank d_{p+1} + dim H_p,
        # with rank d_p bounded by both ends of the map
        for p, v in h.items():
            rp, rq = self.boundary_rank(p), self.boundary_rank(p + 1)
            z = self.dims[p] - rp
            if v < 0 or z != rq + v or rp > min(self.dims[p], self.dims.get(p - 1, 0)):
                raise InvariantViolation(f"dimension law fails in degree {p}")

    def check_euler(self, h: dict[int, int]) -> None:
        chi_c = sum((-1) ** (p % 2) * d for p, d in self.dims.items())
        chi_h = sum((-1) ** (p % 2) * d for p, d in h.items())
        if chi_c != chi_h:
            raise InvariantViolation(f"Euler characteristic {chi_c} != {chi_h}")

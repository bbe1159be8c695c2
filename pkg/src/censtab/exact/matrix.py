"""Sparse exact matrices stored as a list of row dictionaries."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .ring import Ring, QQ, ring_from_name


class BudgetExceeded(RuntimeError):
    """A computation would exceed the configured size budget."""


class ExactMatrix:
    __slots__ = ("ring", "nrows", "ncols", "_rows")

    def __init__(self, ring: Ring, nrows: int, ncols: int, rows: Sequence[dict] | None = None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self._rows = [dict() for _ in range(nrows)]
        else:
            if len(rows) != nrows:
                raise ValueError("row count mismatch")
            self._rows = list(rows)

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        one = ring.coerce(1)
        return cls(ring, n, n, [{i: one} for i in range(n)])

    @classmethod
    def from_dense(cls, ring, data, ncols: int | None = None):
        data = [list(r) for r in data]
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            d = {}
            for j, x in enumerate(r):
                v = ring.coerce(x)
                if v:
                    d[j] = v
            rows.append(d)
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def from_entries(cls, ring, nrows, ncols, entries: Iterable[tuple[int, int, object]]):
        """Sum of (row, col, value) contributions."""
        rows = [dict() for _ in range(nrows)]
        for i, j, x in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            r = rows[i]
            v = r.get(j, 0) + ring.coerce(x)
            if ring.characteristic:
                v %= ring.characteristic
            if v:
                r[j] = v
            else:
                r.pop(j, None)
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, ring, nrows, columns: Sequence[dict]):
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return cls(ring, nrows, len(columns), rows)

    # -- access ---------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i].get(j, self.ring.coerce(0))

    def row(self, i) -> dict:
        return self._rows[i]

    def rows(self) -> list[dict]:
        return self._rows

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def entries(self):
        for i, r in enumerate(self._rows):
            for j in sorted(r):
                yield i, j, r[j]

    def to_dense(self):
        z = self.ring.coerce(0)
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.ring}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- arithmetic -------------------------------------------------------

    def _clean(self, v):
        p = self.ring.characteristic
        return v % p if p else v

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.ring.characteristic
        brows = other._rows
        out = []
        for r in self._rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in brows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            if p:
                acc = {j: v % p for j, v in acc.items() if v % p}
            else:
                acc = {j: v for j, v in acc.items() if v}
            out.append(acc)
        return ExactMatrix(self.ring, self.nrows, other.ncols, out)

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector."""
        cols = {}
        p = self.ring.characteristic
        for i, r in enumerate(self._rows):
            s = 0
            for j, a in r.items():
                b = vec.get(j)
                if b:
                    s += a * b
            if p:
                s %= p
            if s:
                cols[i] = s
        return cols

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        p = self.ring.characteristic
        out = []
        for r, s in zip(self._rows, other._rows):
            d = dict(r)
            for j, v in s.items():
                x = d.get(j, 0) + sign * v
                if p:
                    x %= p
                if x:
                    d[j] = x
                else:
                    d.pop(j, None)
            out.append(d)
        return ExactMatrix(self.ring, self.nrows, self.ncols, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "ExactMatrix":
        c = self.ring.coerce(c)
        p = self.ring.characteristic
        out = []
        for r in self._rows:
            d = {}
            for j, v in r.items():
                x = v * c
                if p:
                    x %= p
                if x:
                    d[j] = x
            out.append(d)
        return ExactMatrix(self.ring, self.nrows, self.ncols, out)

    def __neg__(self):
        return self.scale(-1)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.ncols, self.nrows, self.columns())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        cpos = {c: k for k, c in enumerate(cols)}
        out = []
        for i in rows:
            out.append({cpos[j]: v for j, v in self._rows[i].items() if j in cpos})
        return ExactMatrix(self.ring, len(rows), len(cols), out)

    def with_entry(self, i, j, value) -> "ExactMatrix":
        rows = [dict(r) for r in self._rows]
        v = self.ring.coerce(value)
        if v:
            rows[i][j] = v
        else:
            rows[i].pop(j, None)
        return ExactMatrix(self.ring, self.nrows, self.ncols, rows)

    def change_ring(self, ring: Ring) -> "ExactMatrix":
        return ExactMatrix.from_entries(ring, self.nrows, self.ncols, self.entries())

    # -- block operations ---------------------------------------------------

    @staticmethod
    def hstack(mats: Sequence["ExactMatrix"], ring=None, nrows=None) -> "ExactMatrix":
        if not mats:
            return ExactMatrix(ring, nrows or 0, 0)
        nrows = mats[0].nrows
        out = [dict() for _ in range(nrows)]
        off = 0
        for m in mats:
            if m.nrows != nrows:
                raise ValueError("hstack row mismatch")
            for i, r in enumerate(m._rows):
                for j, v in r.items():
                    out[i][off + j] = v
            off += m.ncols
        return ExactMatrix(mats[0].ring, nrows, off, out)

    @staticmethod
    def vstack(mats: Sequence["ExactMatrix"], ring=None, ncols=None) -> "ExactMatrix":
        if not mats:
            return ExactMatrix(ring, 0, ncols or 0)
        ncols = mats[0].ncols
        out = []
        for m in mats:
            if m.ncols != ncols:
                raise ValueError("vstack column mismatch")
            out.extend(dict(r) for r in m._rows)
        return ExactMatrix(mats[0].ring, len(out), ncols, out)

    @staticmethod
    def block_diag(mats: Sequence["ExactMatrix"], ring=None) -> "ExactMatrix":
        ring = mats[0].ring if mats else ring
        nr = sum(m.nrows for m in mats)
        nc = sum(m.ncols for m in mats)
        out = []
        off = 0
        for m in mats:
            for r in m._rows:
                out.append({off + j: v for j, v in r.items()})
            off += m.ncols
        return ExactMatrix(ring, nr, nc, out)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        p = self.ring.characteristic
        out = []
        for r in self._rows:
            for s in other._rows:
                d = {}
                for j, a in r.items():
                    base = j * other.ncols
                    for k, b in s.items():
                        x = a * b
                        if p:
                            x %= p
                        if x:
                            d[base + k] = x
                out.append(d)
        return ExactMatrix(self.ring, self.nrows * other.nrows, self.ncols * other.ncols, out)

    # -- text format ------------------------------------------------------------

    def dump(self) -> str:
        """Triplet text: header 'ring nrows ncols', then 'row col value' lines."""
        lines = [f"{self.ring.name} {self.nrows} {self.ncols}"]
        for i, j, v in self.entries():
            lines.append(f"{i} {j} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ExactMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        head = lines[0].split()
        ring = ring_from_name(head[0])
        nrows, ncols = int(head[1]), int(head[2])
        ents = []
        for ln in lines[1:]:
            a, b, c = ln.split()
            ents.append((int(a), int(b), Fraction(c)))
        return cls.from_entries(ring, nrows, ncols, ents)

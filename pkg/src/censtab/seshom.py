"""Group homology and the double complex attached to an extension of towers.

An extension 1 -> N_n -> G_n -> Q_n -> 1 of stability groupoids is given
by the inclusion of N_n in G_n and the projection G_n -> Q_n.  Homology
of finite groups uses the normalized bar complex; the quotient Q_n acts
on H_q(N_n; M) through conjugation by a lift g,
[x_1|...|x_q] (x) m -> [g x_1 g^-1|...] (x) g m,
which is the bar-model form of x (x) m -> x g^-1 (x) g m.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .exact import (ExactMatrix, Echelon, rank, kernel_basis, cokernel, left_inverse,
                    DoubleComplex, ss_pages, total_homology, InvariantViolation, BudgetExceeded)
from .groupoid import Groupoid, GroupElement
from .homology import cs_complex, cs_homology_table, generation_degree
from .module import ConsistentSequence
from .ucat import StabilityCategory


# -- finite groups and the bar complex ---------------------------------------------------


class FiniteGroup:
    """A finite group as an explicit list of elements with a product."""

    def __init__(self, elements: Sequence, mul: Callable, identity):
        self.elements = list(elements)
        self.index = {g: k for k, g in enumerate(self.elements)}
        self.identity = identity
        self._mul = mul
        self.nontrivial = [g for g in self.elements if g != identity]
        self._inv = {}
        for g in self.elements:
            for h in self.elements:
                if mul(g, h) == identity:
                    self._inv[g] = h
                    break

    def __len__(self):
        return len(self.elements)

    def mul(self, g, h):
        return self._mul(g, h)

    def inv(self, g):
        return self._inv[g]

    @classmethod
    def level(cls, G: Groupoid, n: int, subset=None) -> "FiniteGroup":
        elems = subset if subset is not None else G.enumerate(n)
        return cls(elems, G.mul, G.identity(n))


@dataclass
class BarComplex:
    """C_q(H; M) = M (x) R[(H - 1)^q], q = 0..q_max, basis (word, e)."""

    group: FiniteGroup
    ring: object
    dim_m: int
    action: Callable  # h -> matrix on M
    q_max: int

    def words(self, q):
        return itertools.product(self.group.nontrivial, repeat=q)

    def dim(self, q):
        return len(self.group.nontrivial) ** q * self.dim_m

    def _word_index(self, w):
        k = 0
        nt = self._nt_index
        base = len(self.group.nontrivial)
        for x in w:
            k = k * base + nt[x]
        return k

    def __post_init__(self):
        self._nt_index = {g: k for k, g in enumerate(self.group.nontrivial)}
        self._act_cache = {}

    def act(self, h):
        M = self._act_cache.get(h)
        if M is None:
            M = self._act_cache[h] = self.action(h)
        return M

    def boundary_columns(self, q):
        """Yield the columns of d_q: C_q -> C_{q-1} as sparse dicts."""
        H = self.group
        dm = self.dim_m
        R = self.ring
        p = R.characteristic
        one = R.coerce(1)
        e = H.identity
        for w in self.words(q):
            faces = []
            # m . h_1 := h_1^{-1} m
            faces.append((w[1:], self.act(H.inv(w[0])), 1))
            for i in range(1, q):
                prod = H.mul(w[i - 1], w[i])
                if prod != e:
                    faces.append((w[: i - 1] + (prod,) + w[i + 1:], None, -1 if i % 2 else 1))
            faces.append((w[:-1], None, -1 if q % 2 else 1))
            for j in range(dm):
                col = {}
                for w2, M, s in faces:
                    base = self._word_index(w2) * dm
                    if M is None:
                        col[base + j] = col.get(base + j, 0) + s * one
                    else:
                        for i, v in M.apply({j: one}).items():
                            col[base + i] = col.get(base + i, 0) + s * v
                if p:
                    col = {k: v % p for k, v in col.items() if v % p}
                else:
                    col = {k: v for k, v in col.items() if v}
                yield col

    def boundary(self, q) -> ExactMatrix:
        return ExactMatrix.from_columns(self.ring, self.dim(q - 1), list(self.boundary_columns(q)))

    def chain_map(self, target: "BarComplex", q: int, conj: Callable, module_map: ExactMatrix) -> ExactMatrix:
        """[x_1|..|x_q] (x) m -> [c(x_1)|..|c(x_q)] (x) module_map(m)."""
        cols = []
        dm, dt = self.dim_m, target.dim_m
        mm = module_map.columns()
        for w in self.words(q):
            w2 = tuple(conj(x) for x in w)
            if any(x == target.group.identity for x in w2):
                raise InvariantViolation("homomorphism sends a nontrivial element to the identity")
            base = target._word_index(w2) * dt
            for j in range(dm):
                cols.append({base + i: v for i, v in mm[j].items()})
        return ExactMatrix.from_columns(self.ring, target.dim(q), cols)


def bar_complex(H: FiniteGroup, ring, dim_m: int, action: Callable, q_max: int) -> BarComplex:
    return BarComplex(H, ring, dim_m, action, q_max)


def group_homology(H: FiniteGroup, ring, dim_m: int, action: Callable, q: int,
                   budget: int | None = None) -> int:
    """dim H_q(H; M) from the normalized bar complex."""
    B = BarComplex(H, ring, dim_m, action, q + 1)
    if budget is not None and B.dim(q + 1) > budget:
        raise BudgetExceeded(f"bar complex degree {q + 1} has dimension {B.dim(q + 1)} > {budget}")
    r_out = rank(B.boundary(q)) if q >= 1 else 0
    z = B.dim(q) - r_out
    E = Echelon(ring)
    for col in B.boundary_columns(q + 1):
        if col:
            E.add(col)
            if E.rank >= z:
                break
    return z - E.rank


def unnormalized_group_homology(H: FiniteGroup, ring, dim_m: int, action: Callable, q: int) -> int:
    """Cross-check using the unnormalized bar complex (all words)."""
    els = H.elements
    idx = {g: k for k, g in enumerate(els)}
    one = ring.coerce(1)

    def d(qq):
        rows = len(els) ** (qq - 1) * dim_m
        cols = []
        for w in itertools.product(els, repeat=qq):
            M0 = action(H.inv(w[0]))
            faces = [(w[1:], M0, 1)]
            for i in range(1, qq):
                faces.append((w[: i - 1] + (H.mul(w[i - 1], w[i]),) + w[i + 1:], None, -1 if i % 2 else 1))
            faces.append((w[:-1], None, -1 if qq % 2 else 1))
            for j in range(dim_m):
                col = {}
                for w2, M, s in faces:
                    k = 0
                    for x in w2:
                        k = k * len(els) + idx[x]
                    base = k * dim_m
                    if M is None:
                        col[base + j] = col.get(base + j, 0) + s * one
                    else:
                        for i2, v in M.apply({j: one}).items():
                            col[base + i2] = col.get(base + i2, 0) + s * v
                cols.append({k: v for k, v in col.items() if v})
        return ExactMatrix.from_columns(ring, rows, cols)

    dimq = len(els) ** q * dim_m
    r_out = rank(d(q)) if q >= 1 else 0
    return dimq - r_out - rank(d(q + 1))


# -- homology basis helpers ---------------------------------------------------------------


@dataclass
class HomologyBasis:
    """H_q = Z_q / B_q with cycle basis Z, left inverse L, and quotient coordinates."""

    Z: ExactMatrix
    L: ExactMatrix
    proj: ExactMatrix
    section: ExactMatrix

    @property
    def dim(self) -> int:
        return self.proj.nrows

    def classes(self, chains: ExactMatrix) -> ExactMatrix:
        """Coordinates of the homology classes of cycle columns."""
        return self.proj @ (self.L @ chains)

    def representatives(self) -> ExactMatrix:
        return self.Z @ self.section


def homology_basis(d_out: ExactMatrix | None, d_in: ExactMatrix | None, dim: int, ring) -> HomologyBasis:
    if d_out is None:
        Z = ExactMatrix.identity(ring, dim)
    else:
        Z = kernel_basis(d_out)
    L = left_inverse(Z)
    if d_in is None or d_in.ncols == 0:
        Bz = ExactMatrix(ring, Z.ncols, 0)
    else:
        Bz = L @ d_in
        if Z @ Bz != d_in:
            raise InvariantViolation("boundaries are not cycles")
    ck = cokernel(Bz)
    return HomologyBasis(Z, L, ck.proj, ck.section)


# -- extensions of towers -------------------------------------------------------------------


@dataclass
class StabilitySES:
    """1 -> N -> G -> Q -> 1, with N_n given as a subset of G_n."""

    G: Groupoid
    Q: Groupoid
    kernel_elements: Callable[[int], list[GroupElement]]
    project: Callable[[GroupElement], GroupElement]
    section: Callable[[GroupElement], GroupElement]
    name: str = ""

    def N(self, n: int) -> FiniteGroup:
        return FiniteGroup(self.kernel_elements(n), self.G.mul, self.G.identity(n))

    def check(self, n_max: int) -> dict:
        """Exhaustive exactness, homomorphism and block-sum compatibility."""
        G, Q = self.G, self.Q
        for n in range(n_max + 1):
            Gn = G.enumerate(n)
            Nn = set(self.kernel_elements(n))
            eq = Q.identity(n)
            if {self.project(g) for g in Gn} != set(Q.enumerate(n)):
                return {"passed": False, "failure": "projection not surjective", "n": n}
            if {g for g in Gn if self.project(g) == eq} != Nn:
                return {"passed": False, "failure": "kernel differs from N", "n": n}
            for q in Q.enumerate(n):
                if self.project(self.section(q)) != q:
                    return {"passed": False, "failure": "section", "n": n}
            sample = Gn[:40]
            for g in sample:
                for h in sample:
                    if self.project(G.mul(g, h)) != Q.mul(self.project(g), self.project(h)):
                        return {"passed": False, "failure": "projection not a homomorphism", "n": n}
        for m in range(n_max + 1):
            for n in range(n_max + 1 - m):
                for g in G.enumerate(m)[:20]:
                    for h in G.enumerate(n)[:20]:
                        if self.project(G.block_sum(g, h)) != Q.block_sum(self.project(g), self.project(h)):
                            return {"passed": False, "failure": "projection not monoidal", "m": m, "n": n}
                Nm, Nn = self.kernel_elements(m), set(self.kernel_elements(m + n))
                for x in Nm[:20]:
                    for y in self.kernel_elements(n)[:20]:
                        if G.block_sum(x, y) not in Nn:
                            return {"passed": False, "failure": "N not closed under block sum", "m": m, "n": n}
        return {"passed": True, "n_max": n_max}


def make_wreath_ses(k: int | object) -> StabilitySES:
    """G^n -> G wr S_n -> S_n."""
    W = Groupoid.wreath(k)
    S = Groupoid.symmetric()
    e = W.group.identity

    def kernel(n):
        return [W.element(range(n), d) for d in itertools.product(range(W.group.order), repeat=n)]

    return StabilitySES(W, S, kernel, lambda g: S.element(g.perm), lambda q: W.element(q.perm),
                        name=f"{W.group.name}^n -> {W.name} -> symmetric")


def make_degenerate_ses(G: Groupoid) -> StabilitySES:
    """G -> G -> trivial tower."""
    T = Groupoid.trivial()
    return StabilitySES(G, T, lambda n: G.enumerate(n), lambda g: T.identity(g.rank),
                        lambda q: G.identity(q.rank), name=f"{G.name} -> {G.name} -> trivial")


def _induced_action(V: ConsistentSequence, n: int, p: int) -> Callable:
    """g -> matrix of g on C_p(V)_n = Ind V_{n-p-1}."""
    cat, G = V.cat, V.cat.G
    a = n - p - 1
    H = cat.hom_set(p + 1, n)
    da = V.dims[a]

    def act(g):
        ents = []
        for ri, r in enumerate(H):
            r2, u = G.coset_normalize(G.mul(g, r.rep), p + 1)
            ti = cat.hom_index(type(r)(p + 1, n, r2))
            for x, y, v in V.rep(a, u).entries():
                ents.append((ti * da + x, ri * da + y, v))
        return ExactMatrix.from_entries(V.ring, len(H) * da, len(H) * da, ents)

    return act


def kernel_homology_module(S: StabilitySES, V: ConsistentSequence, q: int,
                           n_max: int | None = None, check_lifts: bool = True) -> ConsistentSequence:
    """H_q(N; V) as a module over the category of the quotient tower."""
    n_max = V.n_max if n_max is None else n_max
    G, Qg = S.G, S.Q
    Qcat = StabilityCategory(Qg)
    R = V.ring
    bases, bars = [], []
    for n in range(n_max + 1):
        N = S.N(n)
        B = BarComplex(N, R, V.dims[n], lambda h, n=n: V.rep(n, h), q + 1)
        d_out = B.boundary(q) if q >= 1 else None
        d_in = B.boundary(q + 1)
        bases.append(homology_basis(d_out, d_in, B.dim(q), R))
        bars.append(B)
    dims = tuple(b.dim for b in bases)
    actions = []
    for n in range(n_max + 1):
        hb, B = bases[n], bars[n]
        mats = []
        reps = hb.representatives()
        for s in Qg.generators(n):
            lifts = [S.section(s)]
            if check_lifts and len(B.group) > 1:
                lifts.append(G.mul(B.group.nontrivial[0], lifts[0]))
            got = []
            for g in lifts:
                gi = G.inv(g)
                conj = lambda x, g=g, gi=gi: G.mul(G.mul(g, x), gi)
                C = B.chain_map(B, q, conj, V.rep(n, g))
                got.append(hb.classes(C @ reps))
            if any(M != got[0] for M in got[1:]):
                raise InvariantViolation(f"quotient action depends on the lift at level {n}")
            mats.append(got[0])
        actions.append(tuple(mats))
    trans = []
    for n in range(n_max):
        one = G.identity(1)
        C = bars[n].chain_map(bars[n + 1], q, lambda x: G.block_sum(one, x), V.transitions[n])
        trans.append(bases[n + 1].classes(C @ bases[n].representatives()))
    return ConsistentSequence(Qcat, R, dims, tuple(actions), tuple(trans), label=f"H{q}(N; {V.label})")


def ses_double_complex(S: StabilitySES, V: ConsistentSequence, n: int, max_degree: int) -> DoubleComplex:
    """Bar(N_n) (x)_{N_n} C_*(V)_n in total degrees <= max_degree + 1.

    Cells (p, q): p = bar degree, q = central stability degree.
    """
    R = V.ring
    N = S.N(n)
    C = cs_complex(V, n, p_max=max_degree + 2)
    cdims = C.chain.dims
    bars, dims, dh, dv = {}, {}, {}, {}
    for q in cdims:
        act = _induced_action(V, n, q)
        bars[q] = BarComplex(N, R, cdims[q], act, 0)
    for q in cdims:
        for p in range(0, max_degree + 2 - q + 1):
            if p + q > max_degree + 1:
                continue
            dims[(p, q)] = bars[q].dim(p)
    for (p, q) in dims:
        if p >= 1 and (p - 1, q) in dims:
            dh[(p, q)] = bars[q].boundary(p)
        if (p, q - 1) in dims and q in C.chain.boundaries:
            dvq = C.chain.boundaries[q]
            I = ExactMatrix.identity(R, len(N.nontrivial) ** p)
            dv[(p, q)] = I.kron(dvq)
    D = DoubleComplex(R, dims, dh, dv, valid_degree=max_degree)
    return D


def ses_page_comparison(S: StabilitySES, V: ConsistentSequence, n: int, max_degree: int,
                        r_max: int = 4) -> dict:
    """Spectral sequence pages of both filtrations plus independent predictions."""
    D = ses_double_complex(S, V, n, max_degree)
    D.check()
    cols = ss_pages(D, "columns", r_max)
    rows = ss_pages(D, "rows", r_max)
    Nn = len(S.N(n).nontrivial)
    H = cs_homology_table(V, max_degree + 1, n, n_min=n)
    pred_cols = {(p, q): Nn ** p * H.get((q, n), 0) for (p, q) in cols[1].dims}
    pred_rows = {}
    for t in range(0, max_degree + 2):
        if t > max_degree + 1:
            continue
        M = kernel_homology_module(S, V, t, n_max=n)
        T = cs_homology_table(M, max_degree + 1, n, n_min=n)
        for s in range(-1, max_degree + 1):
            if s + t <= max_degree:
                pred_rows[(s, t)] = T.get((s, n), 0)
    return {"columns": cols, "rows": rows, "pred_columns": pred_cols, "pred_rows": pred_rows,
            "total": total_homology(D)}


def kernel_homology_generation(S: StabilitySES, V: ConsistentSequence, i_max: int) -> dict:
    """Generation degree of H_i(N; V) over the quotient tower for i <= i_max."""
    out = {}
    for i in range(0, i_max + 1):
        M = kernel_homology_module(S, V, i)
        out[i] = {"dims": list(M.dims), "generation": generation_degree(M).as_dict()}
    return out


# -- stabilization ranges -------------------------------------------------------------------


def reexpress_range(k0: int, a0: int, k: int = 2) -> tuple[int, int]:
    """(k, a) with k*i + a >= k0*i + a0 for all i >= -1, for k >= k0."""
    if k < k0:
        raise ValueError("can only weaken to a larger slope")
    return k, a0 + (k - k0)


def stabilization_range_check(V: ConsistentSequence, k: int, a: int, i_max: int,
                              n_max: int | None = None) -> dict:
    """Epi/iso of H_i(G_n; V_n) -> H_i(G_{n+1}; V_{n+1}) in the claimed ranges.

    Hypothesis: the central stability homology H_j(V)_n vanishes for
    n >= k*j + a, checked for -1 <= j <= i_max + 1 inside the window.
    """
    n_max = V.n_max if n_max is None else n_max
    G = V.cat.G
    R = V.ring
    T = cs_homology_table(V, i_max + 1, n_max)
    for j in range(-1, i_max + 2):
        for n in range(max(0, k * j + a), n_max + 1):
            if T[(j, n)]:
                return {"passed": False, "reason": "hypothesis fails", "witness": {"j": j, "n": n}}
    rows = []
    ok = True
    for i in range(0, i_max + 1):
        for n in range(0, n_max):
            info = _stabilization_map(V, i, n)
            claim_epi = n >= k * i + a - 1
            claim_iso = n >= k * i + a
            good = (not claim_epi or info["epi"]) and (not claim_iso or info["iso"])
            ok &= good
            rows.append({"i": i, "n": n, **info, "claim_epi": claim_epi, "claim_iso": claim_iso, "ok": good})
    return {"passed": ok, "k": k, "a": a, "rows": rows}


def _stabilization_map(V: ConsistentSequence, i: int, n: int) -> dict:
    G, R = V.cat.G, V.ring
    H0 = FiniteGroup.level(G, n)
    H1 = FiniteGroup.level(G, n + 1)
    B0 = BarComplex(H0, R, V.dims[n], lambda h: V.rep(n, h), i + 1)
    B1 = BarComplex(H1, R, V.dims[n + 1], lambda h: V.rep(n + 1, h), i + 1)
    # cycles at n
    Z0 = kernel_basis(B0.boundary(i)) if i >= 1 else ExactMatrix.identity(R, B0.dim(0))
    b0 = _boundary_rank(B0, i, Z0.ncols)
    dimH0 = Z0.ncols - b0
    # boundaries at n+1 plus the image of cycles
    z1 = B1.dim(i) - (rank(B1.boundary(i)) if i >= 1 else 0)
    E = Echelon(R)
    for col in B1.boundary_columns(i + 1):
        if col:
            E.add(col)
            if E.rank >= z1:
                break
    b1 = E.rank
    dimH1 = z1 - b1
    one = G.identity(1)
    C = B0.chain_map(B1, i, lambda x: G.block_sum(one, x), V.transitions[n])
    img = C @ Z0
    for col in img.columns():
        if col:
            E.add(col)
    rk = E.rank - b1  # rank of the induced map on homology
    return {"dim_source": dimH0, "dim_target": dimH1, "rank": rk,
            "epi": rk == dimH1, "iso": rk == dimH1 and rk == dimH0}


def _boundary_rank(B: BarComplex, i: int, zdim: int) -> int:
    E = Echelon(B.ring)
    for col in B.boundary_columns(i + 1):
        if col:
            E.add(col)
            if E.rank >= zdim:
                break
    return E.rank

"""Central stability complexes, their homology, and degree detectors.

The complex at level n has degree p term (p = -1..n-1)

    C_p = Ind_{G_{n-p-1}}^{G_n} V_{n-p-1},

with basis pairs (r, e): r a canonical representative in Hom(p+1, n),
e a basis vector of V_{n-p-1}.  Face i sends r (x) v to
r (id + b_{1,i} + id) (x) V(id + iota_1) v, renormalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .exact import ExactMatrix, ChainLayer, InvariantViolation, rank, BudgetExceeded
from .module import ConsistentSequence, nat_ker_coker, free_module, zero_module
from .ucat import StabilityCategory

NEG_INF = -math.inf

# number of complexes whose dimension law and Euler characteristic were asserted
CHECK_STATS = {"complexes": 0}


@dataclass
class CSComplexAt:
    module: str
    n: int
    chain: ChainLayer
    bases: dict[int, list]  # degree -> list of representatives (blocks of size dim V_a)

    def homology(self) -> dict[int, int]:
        return self.chain.homology_dims()


def _face_blocks(V: ConsistentSequence, n: int, p: int):
    """For each r in Hom(p+1, n) and face i: (index of r' in Hom(p, n), block matrix)."""
    cat, G = V.cat, V.cat.G
    a = n - p - 1
    app = V.evaluate(cat.append_map(a))
    hs = [G.block_sum(G.block_sum(G.identity(a), G.braiding(1, i)), G.identity(p - i)) for i in range(p + 1)]
    memo = {}
    out = []
    for r in cat.hom_set(p + 1, n):
        row = []
        for i, h in enumerate(hs):
            r2, u = G.coset_normalize(G.mul(r.rep, h), p)
            B = memo.get(u)
            if B is None:
                B = V.rep(a + 1, u) @ app
                memo[u] = B
            row.append((cat.hom_index(type(r)(p, n, r2)), B))
        out.append(row)
    return out


def cs_complex(V: ConsistentSequence, n: int, p_max: int | None = None, budget: int | None = None) -> CSComplexAt:
    """The (truncated at p_max) central stability complex of V at level n."""
    if n > V.n_max:
        raise ValueError(f"module known only up to level {V.n_max}")
    cat = V.cat
    top = n - 1 if p_max is None else min(n - 1, p_max)
    dims = {}
    G = cat.G
    for p in range(-1, top + 1):
        a = n - p - 1
        cosets = len(cat.hom_set(p + 1, n))
        if cosets * G.order(a) != G.order(n):
            raise InvariantViolation(f"|Hom({p + 1},{n})| = {cosets} but |G_{n}|/|G_{a}| = "
                                     f"{G.order(n) // G.order(a)}")
        dims[p] = cosets * V.dims[a]
        if budget is not None and dims[p] > budget:
            raise BudgetExceeded(f"degree {p} at level {n} has dimension {dims[p]} > {budget}")
    bds = {}
    for p in range(0, top + 1):
        a = n - p - 1
        da, db = V.dims[a], V.dims[a + 1]
        ents = []
        for ri, faces in enumerate(_face_blocks(V, n, p)):
            for i, (ti, B) in enumerate(faces):
                sgn = -1 if i % 2 else 1
                for x, y, v in B.entries():
                    ents.append((ti * db + x, ri * da + y, sgn * v))
        bds[p] = ExactMatrix.from_entries(V.ring, dims[p - 1], dims[p], ents)
    chain = ChainLayer(V.ring, dims, bds, truncated=top < n - 1)
    return CSComplexAt(V.label, n, chain, {p: cat.hom_set(p + 1, n) for p in dims})


def cs_homology(V: ConsistentSequence, i: int, n: int) -> int:
    """dim of the i-th reduced central stability homology at level n."""
    if i < -1 or i > n - 1:
        return 0
    C = cs_complex(V, n, p_max=i + 1)
    return C.chain.homology_dim(i)


def cs_homology_table(V: ConsistentSequence, i_max: int, n_max: int | None = None,
                      n_min: int = 0, check: bool = True) -> dict[tuple[int, int], int]:
    """{(i, n): dim} for -1 <= i <= i_max and n_min <= n <= n_max.

    Every complex built here is checked for d^2 = 0, the dimension law and
    the Euler characteristic of the (truncated) complex.
    """
    n_max = V.n_max if n_max is None else n_max
    out = {}
    for n in range(n_min, n_max + 1):
        C = cs_complex(V, n, p_max=i_max + 1)
        if check:
            C.chain.check_shapes()
            C.chain.check_square_zero()
            C.chain.homology_dims()  # runs the dimension law and Euler checks
            CHECK_STATS["complexes"] += 1
        for i in range(-1, i_max + 1):
            out[(i, n)] = C.chain.homology_dim(i) if i in C.chain.dims else 0
    return out


# -- alternative complex for the symmetric family ---------------------------------


def putman_complex(V: ConsistentSequence, n: int) -> ChainLayer:
    """Oriented-subset complex: degree p spans subsets T with |T| = p+1,
    tensored with V on the complement; degree -1 is V_n."""
    cat = V.cat
    if cat.G.family != "symmetric":
        raise ValueError("the subset complex is only defined for the symmetric family")
    subsets = {p: list(combinations(range(n), p + 1)) for p in range(-1, n)}
    dims = {p: len(s) * V.dims[n - p - 1] for p, s in subsets.items()}
    bds = {}
    for p in range(0, n):
        a = n - p - 1
        da, db = V.dims[a], V.dims[a + 1]
        idx = {T: k for k, T in enumerate(subsets[p - 1])}
        ents = []
        memo = {}
        for k, T in enumerate(subsets[p]):
            comp = [x for x in range(n) if x not in T]
            for i, t in enumerate(T):
                T2 = T[:i] + T[i + 1:]
                comp2 = [x for x in range(n) if x not in T2]
                pos = {x: j for j, x in enumerate(comp2)}
                f = cat.from_injection(a + 1, [pos[x] for x in comp])
                B = memo.get(f)
                if B is None:
                    B = memo[f] = V.evaluate(f)
                sgn = -1 if i % 2 else 1
                for x, y, v in B.entries():
                    ents.append((idx[T2] * db + x, k * da + y, sgn * v))
        bds[p] = ExactMatrix.from_entries(V.ring, dims[p - 1], dims[p], ents)
    return ChainLayer(V.ring, dims, bds)


# -- degree reports --------------------------------------------------------------------


@dataclass
class DegreeReport:
    kind: str
    value: float | int | None
    window: tuple[int, int]
    passed: bool = True
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        v = self.value
        if v == NEG_INF:
            v = "-inf"
        return {"kind": self.kind, "value": v, "window": list(self.window), "passed": self.passed,
                "witness": self.witness, "notes": self.notes}


def generation_degree(V: ConsistentSequence, n_max: int | None = None) -> DegreeReport:
    """Least d with H_{-1} = 0 for d < n <= n_max (-inf for the zero module)."""
    n_max = V.n_max if n_max is None else n_max
    T = cs_homology_table(V, -1, n_max)
    nz = [n for n in range(n_max + 1) if T[(-1, n)]]
    rep = DegreeReport("generation", max(nz) if nz else NEG_INF, (0, n_max))
    if nz and max(nz) == n_max:
        rep.notes.append("top of window: degree not confirmed")
    return rep


def central_stability_degree(V: ConsistentSequence, n_max: int | None = None) -> DegreeReport:
    """Least d with H_0 = H_{-1} = 0 for d < n <= n_max."""
    n_max = V.n_max if n_max is None else n_max
    T = cs_homology_table(V, 0, n_max)
    nz = [n for n in range(n_max + 1) if T[(-1, n)] or T[(0, n)]]
    rep = DegreeReport("central stability", max(nz) if nz else NEG_INF, (0, n_max))
    if nz and max(nz) == n_max:
        rep.notes.append("top of window: degree not confirmed")
    return rep


# -- coequalizer detectors via brute-force coset enumeration -----------------------------


class _BruteInduced:
    """Ind_{G_a + 1}^{G_n} V_a with cosets found by orbit enumeration."""

    def __init__(self, V: ConsistentSequence, n: int, a: int, extra=()):
        G = V.cat.G
        self.V, self.n, self.a, self.G = V, n, a, G
        sub = [G.block_sum(h, G.identity(n - a)) for h in G.enumerate(a)]
        sub_extra = list(extra)
        if sub_extra:
            grp = set(sub)
            frontier = list(sub)
            while frontier:
                x = frontier.pop()
                for s in sub_extra:
                    y = G.mul(x, s)
                    if y not in grp:
                        grp.add(y)
                        frontier.append(y)
            sub = sorted(grp)
        self.rep_of = {}
        self.reps = []
        for g in G.enumerate(n):
            if g in self.rep_of:
                continue
            orbit = [G.mul(g, h) for h in sub]
            r = min(orbit)
            self.reps.append(r)
            for x in orbit:
                self.rep_of[x] = r
        self.reps.sort()
        self.index = {r: k for k, r in enumerate(self.reps)}
        self.dim = len(self.reps) * V.dims[a]

    def locate(self, g):
        """(block index, u in G_a) with g = rep (u + id)."""
        r = self.rep_of[g]
        w = self.G.mul(self.G.inv(r), g)
        k = self.n - self.a
        if w.perm[self.a:] != tuple(range(self.a, self.n)):
            raise InvariantViolation("coset lookup produced an element outside the subgroup")
        u = self.G.element(w.perm[: self.a], None if w.dec is None else w.dec[: self.a])
        return self.index[r], u


def _append_action(V: ConsistentSequence, a: int) -> ExactMatrix:
    """V(id_a + iota_1) computed as rho(b_{a,1}^{-1}) phi_a."""
    G = V.cat.G
    return V.rep(a + 1, G.inv(G.braiding(a, 1))) @ V.transitions[a]


def _face_on_generic(V, src_a, tgt: _BruteInduced, g, e_vec, i, p):
    """Image of g (x) e under face i from degree p into tgt, as {index: value}."""
    G = V.cat.G
    a = src_a
    h = G.block_sum(G.block_sum(G.identity(a), G.braiding(1, i)), G.identity(p - i))
    blk, u = tgt.locate(G.mul(g, h))
    vec = (V.rep(a + 1, u) @ _append_action(V, a)).apply(e_vec)
    d = V.dims[a + 1]
    return {blk * d + x: v for x, v in vec.items()}


def coequalizer_detector(V: ConsistentSequence, n: int) -> dict:
    """Is V_n the coequalizer of Ind V_{n-2} => Ind V_{n-1}?  Brute-force cosets."""
    G = V.cat.G
    dn = V.dims[n]
    if n == 0:
        return {"iso": dn == 0, "coeq_dim": 0, "image_rank": 0}
    C0 = _BruteInduced(V, n, n - 1)
    # augmentation C_0 -> V_n
    aug_cols = []
    A = _append_action(V, n - 1)
    for r in C0.reps:
        M = V.rep(n, r) @ A
        aug_cols += M.columns()
    aug = ExactMatrix.from_columns(V.ring, dn, aug_cols)
    if n >= 2:
        C1 = _BruteInduced(V, n, n - 2)
        cols = []
        for r in C1.reps:
            for e in range(V.dims[n - 2]):
                col = {}
                for i in (0, 1):
                    img = _face_on_generic(V, n - 2, C0, r, {e: V.ring.coerce(1)}, i, 1)
                    s = -1 if i else 1
                    for k, v in img.items():
                        col[k] = col.get(k, 0) + s * v
                cols.append({k: v for k, v in col.items() if v})
        D = ExactMatrix.from_columns(V.ring, C0.dim, cols)
        rD = rank(D)
    else:
        rD = 0
    coeq = C0.dim - rD
    ra = rank(aug)
    return {"iso": coeq == dn and ra == dn, "coeq_dim": coeq, "image_rank": ra}


def twisted_coequalizer_detector(V: ConsistentSequence, n: int) -> dict:
    """Same test with Ind_{G_{n-2} x S_2} (V_{n-2} (x) sign) mapping by (1 - t) (x) V(id + iota_1)."""
    G = V.cat.G
    dn = V.dims[n]
    if n == 0:
        return {"iso": dn == 0, "coeq_dim": 0, "image_rank": 0}
    C0 = _BruteInduced(V, n, n - 1)
    A = _append_action(V, n - 1)
    aug_cols = []
    for r in C0.reps:
        aug_cols += (V.rep(n, r) @ A).columns()
    aug = ExactMatrix.from_columns(V.ring, dn, aug_cols)
    rmu = 0
    if n >= 2:
        t = G.block_sum(G.identity(n - 2), G.braiding(1, 1))
        Ct = _BruteInduced(V, n, n - 2, extra=[t])
        cols = []
        for r in Ct.reps:
            for e in range(V.dims[n - 2]):
                # (1 - t) applied on the S_2 factor: r (x) e - r t (x) e, then face 0
                col = {}
                for g, s in ((r, 1), (G.mul(r, t), -1)):
                    img = _face_on_generic(V, n - 2, C0, g, {e: V.ring.coerce(1)}, 0, 1)
                    for k, v in img.items():
                        col[k] = col.get(k, 0) + s * v
                cols.append({k: v for k, v in col.items() if v})
        rmu = rank(ExactMatrix.from_columns(V.ring, C0.dim, cols))
    coeq = C0.dim - rmu
    ra = rank(aug)
    return {"iso": coeq == dn and ra == dn, "coeq_dim": coeq, "image_rank": ra}


def central_stability_check(V: ConsistentSequence, n: int, twisted: bool | None = None) -> dict:
    """Three detectors of V_n = coeq(Ind V_{n-2} => Ind V_{n-1})."""
    T = cs_homology_table(V, 0, n, n_min=n)
    via_h = T[(-1, n)] == 0 and T[(0, n)] == 0
    out = {"n": n, "homology": via_h, "H_-1": T[(-1, n)], "H_0": T[(0, n)]}
    out["coequalizer"] = coequalizer_detector(V, n)["iso"]
    if twisted is None:
        twisted = V.cat.G.is_symmetric
    if twisted:
        out["twisted"] = twisted_coequalizer_detector(V, n)["iso"]
    out["agree"] = all(out[k] == via_h for k in ("coequalizer", "twisted") if k in out)
    return out


# -- Kan extension colimit ---------------------------------------------------------------


def kan_colim_check(V: ConsistentSequence, d: int, n: int, detail: bool = False):
    """Is the canonical map colim_{(m, f: m -> n), m <= d} V_m -> V_n an isomorphism?

    The colimit is the quotient of the sum over objects by relations along
    generating arrows: the stabilizer maps m -> m+1 and generators of G_m.
    """
    cat, G = V.cat, V.cat.G
    top = min(d, n)
    offs = {}
    pos = 0
    for m in range(0, top + 1):
        for f in cat.hom_set(m, n):
            offs[f] = pos
            pos += V.dims[m]
    rels = []
    one = V.ring.coerce(1)
    for m2 in range(0, top + 1):
        arrows = [cat.iso(s) for s in G.generators(m2)]
        if m2 >= 1:
            arrows.append(cat.stabilizer(m2 - 1))
        mats = [(g, V.evaluate(g)) for g in arrows]
        for f2 in cat.hom_set(m2, n):
            for g, M in mats:
                m = g.source
                f = cat.compose(f2, g)
                for e in range(V.dims[m]):
                    col = {offs[f] + e: one}
                    for x, v in M.apply({e: one}).items():
                        k = offs[f2] + x
                        col[k] = col.get(k, 0) - v
                    col = {k: v for k, v in col.items() if v}
                    if col:
                        rels.append(col)
    rrel = rank(ExactMatrix.from_columns(V.ring, pos, rels)) if rels else 0
    # canonical map to V_n
    cols = []
    for m in range(0, top + 1):
        for f in cat.hom_set(m, n):
            cols += V.evaluate(f).columns()
    ra = rank(ExactMatrix.from_columns(V.ring, V.dims[n], cols)) if cols else 0
    colim = pos - rrel
    ok = colim == V.dims[n] and ra == V.dims[n]
    if detail:
        return {"iso": ok, "colim_dim": colim, "image_rank": ra, "dim": V.dims[n]}
    return ok


# -- polynomial degree --------------------------------------------------------------------


def _vanishes(V: ConsistentSequence, d: int) -> bool:
    return all(V.dims[n] == 0 for n in range(max(d + 1, 0), V.n_max + 1))


def polynomial_degree(V: ConsistentSequence, d: int = -1) -> DegreeReport:
    """Least r with polynomial degree <= r in ranks > d, inside the known window.

    value None means the window ran out before the recursion closed, or a
    kernel of V -> TV is nonzero in ranks > d (then no finite r exists).
    """
    chain = []
    W = V
    r = 0
    while True:
        window = (d + 1, W.n_max)
        if _vanishes(W, d):
            value = NEG_INF if r == 0 else r - 1
            # a vanishing (r)-th iterated cokernel gives degree r - 1 for V
            rep = DegreeReport("polynomial", NEG_INF if r == 0 else r - 1, (d + 1, V.n_max))
            rep.notes += chain
            if W.n_max <= d:
                rep.value = None
                rep.passed = False
                rep.notes.append("window exhausted")
            return rep
        if W.n_max - 1 <= d:
            rep = DegreeReport("polynomial", None, (d + 1, V.n_max), passed=False)
            rep.notes += chain + ["window exhausted"]
            return rep
        K, C = nat_ker_coker(W)
        bad = [n for n in range(d + 1, K.n_max + 1) if K.dims[n]]
        if bad:
            rep = DegreeReport("polynomial", None, (d + 1, V.n_max), passed=False,
                               witness={"level": r, "n": bad[0], "kernel_dim": K.dims[bad[0]]})
            rep.notes += chain + ["nonzero kernel of V -> TV"]
            return rep
        chain.append(f"step {r}: kernel zero in ranks {d + 1}..{K.n_max}")
        W = C
        r += 1


# -- homological conditions -----------------------------------------------------------------


def h3_check(cat: StabilityCategory, N: int, k: int, a: int, n_max: int, ring=None) -> dict:
    """H_i(R Hom(0, -))_n = 0 for -1 <= i < N and k*i + a < n <= n_max."""
    from .exact import QQ
    ring = ring or QQ
    V = free_module(cat, 0, n_max, ring)
    T = cs_homology_table(V, N - 1, n_max)
    return _window_report("h3", T, lambda i, m: k * i + a, N, n_max, {"k": k, "a": a})


def _window_report(kind, T, bound, N, n_max, params, m=None):
    checked = 0
    for i in range(-1, N):
        for n in range(n_max + 1):
            if n > bound(i, m):
                checked += 1
                if T[(i, n)]:
                    return {"kind": kind, "passed": False, **params,
                            "witness": {"i": i, "n": n, "dim": T[(i, n)], **({"m": m} if m is not None else {})},
                            "checked": checked}
    return {"kind": kind, "passed": True, **params, "checked": checked}


def h4_check(cat: StabilityCategory, N: int, l: int, b: int, m_max: int, n_max: int, ring=None) -> dict:
    """H_i(coker(R Hom(m,-) -> T R Hom(m,-)))_n = 0 for i < N, n > l(i+m) + b."""
    from .exact import QQ
    ring = ring or QQ
    total = 0
    for m in range(0, m_max + 1):
        F = free_module(cat, m, n_max + 1, ring)
        _, C = nat_ker_coker(F)
        T = cs_homology_table(C, N - 1, n_max)
        rep = _window_report("h4", T, lambda i, mm: l * (i + mm) + b, N, n_max, {"l": l, "b": b}, m=m)
        total += rep["checked"]
        if not rep["passed"]:
            return rep
    return {"kind": "h4", "passed": True, "l": l, "b": b, "checked": total}


def _geom(l: int, top: int) -> int:
    """1 + l + ... + l^top (0 when top < 0)."""
    return sum(l ** j for j in range(top + 1))


def vanishing_bound(i: int, r: int, d: int, l: int, b: int) -> int:
    """Rank above which H_i vanishes for a module of polynomial degree <= r in ranks > d."""
    if r >= 1:
        return l ** (i + 1) * (d + r) + _geom(l, i) * b + 1
    j = i + 1
    if j == 0:
        d0 = d
    elif d >= 0:
        d0 = l ** j * d + _geom(l, j - 1) * b
    else:
        d0 = -(l ** (j - 1)) + _geom(l, j - 1) * b
    return d0 + 1


def poly_vanishing_check(V: ConsistentSequence, r: int, d: int, l: int, b: int, i_max: int) -> dict:
    """Check H_i(V)_n = 0 above vanishing_bound for -1 <= i <= i_max in the window.

    The polynomial degree hypothesis is verified first.
    """
    P = polynomial_degree(V, d)
    out = {"kind": "poly-vanishing", "r": r, "d": d, "l": l, "b": b, "notes": []}
    if P.value is None or P.value > r:
        out.update(passed=False, reason="polynomial degree hypothesis not verified", poly=P.as_dict())
        return out
    if r == 0 and d == -1:
        out["notes"].append("r = 0, d = -1 boundary branch")
    T = cs_homology_table(V, i_max, V.n_max)
    checked = 0
    for i in range(-1, i_max + 1):
        bd = vanishing_bound(i, r, d, l, b)
        for n in range(V.n_max + 1):
            if n > bd:
                checked += 1
                if T[(i, n)]:
                    out.update(passed=False, witness={"i": i, "n": n, "dim": T[(i, n)], "bound": bd})
                    return out
    out.update(passed=True, checked=checked)
    return out

"""Consistent sequences: representations V_n of G_n with transition maps.

A module is stored by the matrices of the generators of each G_n and the
transitions phi_n : V_n -> V_{n+1}, where phi_n is the image of the
morphism iota_1 + id_n (new strand in front).  The action of an arbitrary
group element is obtained from a word in the generators and cached.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import ExactMatrix, QQ, cokernel, kernel_basis, left_inverse, rank
from .groupoid import GroupElement
from .ucat import StabilityCategory, UMorphism


class ModuleError(ValueError):
    pass


@dataclass
class ConsistentSequence:
    cat: StabilityCategory
    ring: object
    dims: tuple[int, ...]
    actions: tuple[tuple[ExactMatrix, ...], ...]
    transitions: tuple[ExactMatrix, ...]
    label: str = ""
    _rho: dict = field(default_factory=dict, repr=False, compare=False)
    _phi: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.actions) != len(self.dims) or len(self.transitions) != len(self.dims) - 1:
            raise ModuleError("levels of dims/actions/transitions disagree")
        for n, mats in enumerate(self.actions):
            if len(mats) != len(self.cat.G.generators(n)):
                raise ModuleError(f"level {n}: expected {len(self.cat.G.generators(n))} generator matrices")
            for A in mats:
                if A.shape != (self.dims[n], self.dims[n]):
                    raise ModuleError(f"level {n}: generator matrix of shape {A.shape}")
        for n, T in enumerate(self.transitions):
            if T.shape != (self.dims[n + 1], self.dims[n]):
                raise ModuleError(f"transition {n} has shape {T.shape}")

    @property
    def n_max(self) -> int:
        return len(self.dims) - 1

    def __repr__(self):
        return f"ConsistentSequence({self.label or '?'}, {self.cat.name}, {self.ring}, dims={list(self.dims)})"

    # -- actions --------------------------------------------------------------

    def rep(self, n: int, g: GroupElement) -> ExactMatrix:
        """Matrix of g acting on V_n."""
        key = (n, g)
        M = self._rho.get(key)
        if M is not None:
            return M
        G = self.cat.G
        if g.rank != n:
            raise ModuleError(f"element of rank {g.rank} acting on level {n}")
        word = G.word(g)
        M = ExactMatrix.identity(self.ring, self.dims[n])
        gens = self.actions[n]
        # reuse the longest cached prefix would need prefix elements; words are short
        for j in word:
            M = M @ gens[j]
        self._rho[key] = M
        return M

    def phi(self, m: int, n: int) -> ExactMatrix:
        """phi_{m,n} = phi_{n-1} ... phi_m : V_m -> V_n."""
        key = (m, n)
        if key not in self._phi:
            if m == n:
                M = ExactMatrix.identity(self.ring, self.dims[n])
            elif m > n:
                raise ModuleError(f"no transition from {m} to {n}")
            else:
                M = self.transitions[n - 1] @ self.phi(m, n - 1)
            self._phi[key] = M
        return self._phi[key]

    def evaluate(self, f: UMorphism) -> ExactMatrix:
        """V(f) = rho_n(rep) phi_{m,n} for f: m -> n."""
        return self.rep(f.target, f.rep) @ self.phi(f.source, f.target)


def evaluate(V: ConsistentSequence, f: UMorphism) -> ExactMatrix:
    return V.evaluate(f)


# -- validation -----------------------------------------------------------------


def validate(V: ConsistentSequence, full_check_max: int = 4) -> dict:
    """Check invertibility, group relations, equivariance and consistency.

    The first violation is reported with its (m, n, g) data.  Relations
    come from the presentation of G_n; for n <= full_check_max the map
    g -> rho(g) is additionally checked to be multiplicative on all of G_n.
    """
    G = V.cat.G
    report = {"module": V.label, "passed": True}

    def fail(kind, **data):
        report["passed"] = False
        report["failure"] = {"kind": kind, **{k: (v.word() if isinstance(v, GroupElement) else v)
                                              for k, v in data.items()}}
        return report

    for n in range(V.n_max + 1):
        I = ExactMatrix.identity(V.ring, V.dims[n])
        gens = G.generators(n)
        for s, A in zip(gens, V.actions[n]):
            if rank(A) != V.dims[n]:
                return fail("invertible", n=n, g=s)
        for w in G.relations(n):
            M = I
            for j in w:
                M = M @ V.actions[n][j]
            if M != I:
                return fail("relation", n=n, word=list(w))
        if n <= full_check_max:
            for g in G.enumerate(n):
                for s in gens:
                    if V.rep(n, G.mul(g, s)) != V.rep(n, g) @ V.rep(n, s):
                        return fail("homomorphism", n=n, g=g, s=s)
    # equivariance rho_{n+1}(id_1 + g) phi_n = phi_n rho_n(g)
    for n in range(V.n_max):
        T = V.transitions[n]
        for s in G.generators(n):
            lhs = V.rep(n + 1, G.block_sum(G.identity(1), s)) @ T
            if lhs != T @ V.rep(n, s):
                return fail("equivariance", n=n, g=s)
    # consistency rho_n(g + id_m) phi_{m,n} = phi_{m,n} for g in G_{n-m}
    for n in range(V.n_max + 1):
        for m in range(n + 1):
            P = V.phi(m, n)
            for s in G.generators(n - m):
                if V.rep(n, G.block_sum(s, G.identity(m))) @ P != P:
                    return fail("consistency", m=m, n=n, g=s)
    return report


# -- constructions -----------------------------------------------------------------


def _perm_matrix(ring, images: Sequence[int], size: int) -> ExactMatrix:
    return ExactMatrix.from_entries(ring, size, len(images), [(i, j, 1) for j, i in enumerate(images)])


def free_module(cat: StabilityCategory, m: int, n_max: int, ring=QQ) -> ConsistentSequence:
    """R Hom(m, -): basis Hom(m, n), action and transitions by post-composition."""
    G = cat.G
    dims, actions, trans = [], [], []
    for n in range(n_max + 1):
        H = cat.hom_set(m, n)
        dims.append(len(H))
        mats = []
        for s in G.generators(n):
            mats.append(_perm_matrix(ring, [cat.hom_index(cat.compose(cat.iso(s), f)) for f in H], len(H)))
        actions.append(tuple(mats))
        if n < n_max:
            st = cat.stabilizer(n)
            H1 = cat.hom_set(m, n + 1)
            trans.append(_perm_matrix(ring, [cat.hom_index(cat.compose(st, f)) for f in H], len(H1)))
    return ConsistentSequence(cat, ring, tuple(dims), tuple(actions), tuple(trans), label=f"free({m})")


def zero_module(cat: StabilityCategory, n_max: int, ring=QQ) -> ConsistentSequence:
    G = cat.G
    return ConsistentSequence(
        cat, ring, (0,) * (n_max + 1),
        tuple(tuple(ExactMatrix(ring, 0, 0) for _ in G.generators(n)) for n in range(n_max + 1)),
        tuple(ExactMatrix(ring, 0, 0) for _ in range(n_max)), label="zero")


def _restrict_levels(V: ConsistentSequence, n_max: int) -> ConsistentSequence:
    if n_max > V.n_max:
        raise ModuleError(f"module only known up to {V.n_max}")
    return ConsistentSequence(V.cat, V.ring, V.dims[: n_max + 1], V.actions[: n_max + 1],
                              V.transitions[:n_max], label=V.label)


def truncate(V: ConsistentSequence, n_max: int) -> ConsistentSequence:
    return _restrict_levels(V, n_max)


def quotient(V: ConsistentSequence, images: Sequence[ExactMatrix], label="") -> ConsistentSequence:
    """Levelwise quotient V_n / im(images[n]) for a submodule given by spanning columns."""
    G = V.cat.G
    cks = [cokernel(M) for M in images]
    dims = tuple(c.proj.nrows for c in cks)
    actions = []
    for n, c in enumerate(cks):
        actions.append(tuple(c.proj @ A @ c.section for A in V.actions[n]))
    trans = tuple(cks[n + 1].proj @ V.transitions[n] @ cks[n].section for n in range(V.n_max))
    return ConsistentSequence(V.cat, V.ring, dims, tuple(actions), trans, label=label)


def submodule(V: ConsistentSequence, bases: Sequence[ExactMatrix], label="") -> ConsistentSequence:
    """Levelwise submodule spanned by independent columns bases[n]."""
    Ls = [left_inverse(B) for B in bases]
    dims = tuple(B.ncols for B in bases)
    actions = []
    for n, B in enumerate(bases):
        mats = []
        for A in V.actions[n]:
            X = Ls[n] @ (A @ B)
            if B @ X != A @ B:
                raise ModuleError(f"level {n} subspace is not G_n-stable")
            mats.append(X)
        actions.append(tuple(mats))
    trans = []
    for n in range(V.n_max):
        Y = V.transitions[n] @ bases[n]
        X = Ls[n + 1] @ Y
        if bases[n + 1] @ X != Y:
            raise ModuleError(f"transition {n} leaves the subspace")
        trans.append(X)
    return ConsistentSequence(V.cat, V.ring, dims, tuple(actions), tuple(trans), label=label)


def map_kernel(V: ConsistentSequence, maps: Sequence[ExactMatrix], label="") -> ConsistentSequence:
    return submodule(V, [kernel_basis(M) for M in maps], label=label)


def map_cokernel(W: ConsistentSequence, maps: Sequence[ExactMatrix], label="") -> ConsistentSequence:
    return quotient(W, maps, label=label)


def check_natural(V: ConsistentSequence, W: ConsistentSequence, maps: Sequence[ExactMatrix]) -> tuple | None:
    """First (kind, n, generator) where a levelwise map fails to be natural."""
    G = V.cat.G
    for n in range(min(V.n_max, W.n_max) + 1):
        for s, A, B in zip(G.generators(n), V.actions[n], W.actions[n]):
            if maps[n] @ A != B @ maps[n]:
                return ("equivariance", n, s.word())
        if n < min(V.n_max, W.n_max):
            if maps[n + 1] @ V.transitions[n] != W.transitions[n] @ maps[n]:
                return ("transition", n, None)
    return None


@dataclass
class Presentation:
    """coker( + R Hom(a_j, -) -> + R Hom(b_i, -) ).

    ``entries[(j, i)]`` is a list of (coefficient, morphism b_i -> a_j);
    the basis element tau of Hom(a_j, n) maps to sum c * (tau o lambda).
    """

    gen_ranks: list[int]
    rel_ranks: list[int]
    entries: dict[tuple[int, int], list[tuple[object, UMorphism]]]
    label: str = ""

    def degree(self) -> int:
        return max(self.gen_ranks + self.rel_ranks, default=-1)

    def check(self) -> None:
        for (j, i), terms in self.entries.items():
            if not (0 <= j < len(self.rel_ranks) and 0 <= i < len(self.gen_ranks)):
                raise ModuleError(f"entry ({j},{i}) outside the presentation")
            for c, f in terms:
                if (f.source, f.target) != (self.gen_ranks[i], self.rel_ranks[j]):
                    raise ModuleError(f"entry ({j},{i}): morphism {f.word()} should be "
                                      f"{self.gen_ranks[i]} -> {self.rel_ranks[j]}")


def presentation_matrix(cat, P: Presentation, n: int, ring) -> ExactMatrix:
    gblocks = [cat.hom_set(b, n) for b in P.gen_ranks]
    goff = [0]
    for H in gblocks:
        goff.append(goff[-1] + len(H))
    rblocks = [cat.hom_set(a, n) for a in P.rel_ranks]
    ents = []
    col = 0
    for j, H in enumerate(rblocks):
        for tau in H:
            for i in range(len(P.gen_ranks)):
                for c, lam in P.entries.get((j, i), []):
                    ents.append((goff[i] + cat.hom_index(cat.compose(tau, lam)), col, c))
            col += 1
    return ExactMatrix.from_entries(ring, goff[-1], col, ents)


def dsum(*mods: ConsistentSequence) -> ConsistentSequence:
    V0 = mods[0]
    n_max = min(V.n_max for V in mods)
    dims = tuple(sum(V.dims[n] for V in mods) for n in range(n_max + 1))
    actions = tuple(
        tuple(ExactMatrix.block_diag([V.actions[n][k] for V in mods], V0.ring)
              for k in range(len(V0.actions[n])))
        for n in range(n_max + 1))
    trans = tuple(ExactMatrix.block_diag([V.transitions[n] for V in mods], V0.ring) for n in range(n_max))
    return ConsistentSequence(V0.cat, V0.ring, dims, actions, trans,
                              label="(+ " + " ".join(V.label for V in mods) + ")")


def present(cat: StabilityCategory, P: Presentation, n_max: int, ring=QQ, return_maps=False):
    """The module presented by P, levels 0..n_max."""
    P.check()
    frees = [free_module(cat, b, n_max, ring) for b in P.gen_ranks]
    if frees:
        P0 = dsum(*frees) if len(frees) > 1 else frees[0]
    else:
        P0 = zero_module(cat, n_max, ring)
    mats = [presentation_matrix(cat, P, n, ring) for n in range(n_max + 1)]
    V = quotient(P0, mats, label=P.label or "presented")
    if return_maps:
        return V, P0, mats
    return V


def shift(V: ConsistentSequence) -> ConsistentSequence:
    """(TV)_n = V_{n+1}, g acting as id_1 + g, transitions V(id_1 + iota_1 + id_n)."""
    cat, G = V.cat, V.cat.G
    dims = V.dims[1:]
    actions = []
    for n in range(V.n_max):
        actions.append(tuple(V.rep(n + 1, G.block_sum(G.identity(1), s)) for s in G.generators(n)))
    trans = []
    for n in range(V.n_max - 1):
        f = cat.msum(cat.identity(1), cat.stabilizer(n))
        trans.append(V.evaluate(f))
    return ConsistentSequence(cat, V.ring, tuple(dims), tuple(actions), tuple(trans), label=f"(shift {V.label})")


def nat_ker_coker(V: ConsistentSequence) -> tuple[ConsistentSequence, ConsistentSequence]:
    """Kernel and cokernel of the natural map V -> TV (levels 0..n_max-1)."""
    T = shift(V)
    Vt = _restrict_levels(V, V.n_max - 1)
    maps = list(V.transitions)
    K = map_kernel(Vt, maps, label=f"(ker {V.label})")
    C = map_cokernel(T, maps, label=f"(coker {V.label})")
    return K, C


def tensor(V: ConsistentSequence, W: ConsistentSequence) -> ConsistentSequence:
    n_max = min(V.n_max, W.n_max)
    G = V.cat.G
    dims = tuple(V.dims[n] * W.dims[n] for n in range(n_max + 1))
    actions = tuple(tuple(A.kron(B) for A, B in zip(V.actions[n], W.actions[n])) for n in range(n_max + 1))
    trans = tuple(V.transitions[n].kron(W.transitions[n]) for n in range(n_max))
    return ConsistentSequence(V.cat, V.ring, dims, actions, trans, label=f"(tensor {V.label} {W.label})")


def change_ring(V: ConsistentSequence, ring) -> ConsistentSequence:
    return ConsistentSequence(
        V.cat, ring, V.dims,
        tuple(tuple(A.change_ring(ring) for A in mats) for mats in V.actions),
        tuple(T.change_ring(ring) for T in V.transitions), label=V.label)


def free_cover(V: ConsistentSequence, d: int):
    """A free module P generated in ranks <= d with a natural map P -> V.

    Generators are picked rank by rank from canonical complements of the
    image of the generators chosen so far.  Returns (P, maps).
    """
    cat = V.cat
    R = V.ring
    gens: list[tuple[int, dict]] = []  # (rank, vector in V_rank)
    for m in range(min(d, V.n_max) + 1):
        img = _cover_matrix(V, gens, m)
        ck = cokernel(img)
        for k in range(ck.section.ncols):
            col = {i: v for i, v in ck.section.columns()[k].items()}
            gens.append((m, col))
    frees = [free_module(cat, m, V.n_max, R) for m, _ in gens]
    P = dsum(*frees) if len(frees) > 1 else (frees[0] if frees else zero_module(cat, V.n_max, R))
    maps = [_cover_matrix(V, gens, n) for n in range(V.n_max + 1)]
    return P, maps


def _cover_matrix(V, gens, n):
    cat = V.cat
    cols = []
    for m, v in gens:
        for f in cat.hom_set(m, n):
            cols.append(V.evaluate(f).apply(v))
    return ExactMatrix.from_columns(V.ring, V.dims[n], cols)

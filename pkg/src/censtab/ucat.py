"""The category whose morphisms m -> n are cosets G_n / G_{n-m}.

A morphism is stored by its canonical coset representative (see
``Groupoid.coset_normalize``): the representative agrees with any lift
on the last m strands, which carry the image of the source.  For the
symmetric family this is an injection {0..m-1} -> {0..n-1}, strand j of
the source going to rep.perm[n-m+j].
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

from .groupoid import Groupoid, GroupElement


@dataclass(frozen=True, order=True)
class UMorphism:
    source: int
    target: int
    rep: GroupElement

    @property
    def complement(self) -> int:
        return self.target - self.source

    def image(self) -> tuple[int, ...]:
        """Target strands hit by the source strands (in source order)."""
        return self.rep.perm[self.complement:]

    def word(self) -> str:
        return f"{self.source}->{self.target}:{self.rep.word()}"


@dataclass
class SemisimplicialSet:
    """Finite semisimplicial set with levels -1..p_max.

    ``faces[p][k]`` lists the indices in level p-1 of the faces d_0..d_p
    of the k-th p-simplex.
    """

    levels: dict[int, list]
    faces: dict[int, list[tuple[int, ...]]]

    def size(self, p: int) -> int:
        return len(self.levels.get(p, []))

    def check_identities(self) -> tuple | None:
        """First violation of d_i d_j = d_{j-1} d_i (i < j), or None."""
        for p in sorted(self.faces):
            if p - 1 not in self.faces:
                continue
            for k, fs in enumerate(self.faces[p]):
                for j in range(len(fs)):
                    for i in range(j):
                        if self.faces[p - 1][fs[j]][i] != self.faces[p - 1][fs[i]][j - 1]:
                            return (p, k, i, j)
        return None

    def to_json(self) -> str:
        data = {
            "levels": {str(p): [_simplex_word(s) for s in v] for p, v in sorted(self.levels.items())},
            "faces": {str(p): [list(f) for f in v] for p, v in sorted(self.faces.items())},
        }
        return json.dumps(data, indent=1, sort_keys=True)


def _simplex_word(s):
    if isinstance(s, UMorphism):
        return s.word()
    if isinstance(s, tuple):
        return [_simplex_word(x) for x in s]
    return s


class StabilityCategory:
    """Morphisms, composition, block sum and face maps over a groupoid."""

    def __init__(self, groupoid: Groupoid):
        self.G = groupoid
        self._homs: dict[tuple[int, int], list[UMorphism]] = {}
        self._index: dict[tuple[int, int], dict[UMorphism, int]] = {}

    def __repr__(self):
        return f"StabilityCategory({self.G.name})"

    @property
    def name(self) -> str:
        return self.G.name

    # -- morphisms ---------------------------------------------------------

    def canonical(self, m: int, g: GroupElement) -> UMorphism:
        rep, _ = self.G.coset_normalize(g, m)
        return UMorphism(m, g.rank, rep)

    def iso(self, g: GroupElement) -> UMorphism:
        return UMorphism(g.rank, g.rank, g)

    def identity(self, n: int) -> UMorphism:
        return UMorphism(n, n, self.G.identity(n))

    def initial(self, n: int) -> UMorphism:
        """The unique-up-to-G_n morphism 0 -> n (identity coset)."""
        return UMorphism(0, n, self.G.identity(n))

    def stabilizer(self, n: int) -> UMorphism:
        """iota_1 + id_n : n -> n+1 (new strand in front)."""
        return UMorphism(n, n + 1, self.G.identity(n + 1))

    def append_map(self, n: int) -> UMorphism:
        """id_n + iota_1 : n -> n+1 (new strand at the end)."""
        return self.msum(self.identity(n), self.initial(1))

    def hom_set(self, m: int, n: int) -> list[UMorphism]:
        """All morphisms m -> n, in a fixed order (empty if m > n)."""
        key = (m, n)
        if key not in self._homs:
            if m > n or m < 0:
                out = []
            else:
                out = self._enumerate_homs(m, n)
            self._homs[key] = out
            self._index[key] = {f: i for i, f in enumerate(out)}
        return self._homs[key]

    def _enumerate_homs(self, m, n):
        G = self.G
        k = n - m
        if G.family == "trivial":
            return [UMorphism(m, n, G.identity(n))]
        out = []
        for img in itertools.permutations(range(n), m):
            taken = set(img)
            comp = tuple(x for x in range(n) if x not in taken)
            perm = comp + tuple(img)
            if G.decorated:
                e = G.group.identity
                for d in itertools.product(range(G.group.order), repeat=m):
                    out.append(UMorphism(m, n, GroupElement(perm, (e,) * k + d)))
            else:
                out.append(UMorphism(m, n, GroupElement(perm, None)))
        return out

    def hom_index(self, f: UMorphism) -> int:
        self.hom_set(f.source, f.target)
        return self._index[(f.source, f.target)][f]

    def compose(self, outer: UMorphism, inner: UMorphism) -> UMorphism:
        """outer o inner, for inner: m -> n and outer: n -> N."""
        if outer.source != inner.target:
            raise ValueError(f"cannot compose {outer.word()} after {inner.word()}")
        N, n = outer.target, outer.source
        lift = self.G.mul(outer.rep, self.G.block_sum(self.G.identity(N - n), inner.rep))
        return self.canonical(inner.source, lift)

    def msum(self, f1: UMorphism, f2: UMorphism) -> UMorphism:
        """Monoidal sum f1 + f2 : n1+n2 -> (m1+n1)+(m2+n2)."""
        G = self.G
        n1, m1 = f1.source, f1.complement
        n2, m2 = f2.source, f2.complement
        twist = G.block_sum(G.block_sum(G.identity(m1), G.inv(G.braiding(n1, m2))), G.identity(n2))
        lift = G.mul(G.block_sum(f1.rep, f2.rep), twist)
        return self.canonical(n1 + n2, lift)

    def face(self, i: int, p: int) -> UMorphism:
        """d_i = id_i + iota_1 + id_{p-i} : p -> p+1, missing position i."""
        if not 0 <= i <= p:
            raise ValueError(f"face index {i} out of range for {p}")
        G = self.G
        lift = G.block_sum(G.braiding(1, i), G.identity(p - i))
        return self.canonical(p, lift)

    def from_injection(self, n: int, images: Sequence[int], dec: Sequence[int] | None = None) -> UMorphism:
        """Morphism len(images) -> n sending source strand j to images[j]."""
        m = len(images)
        taken = set(images)
        if len(taken) != m or any(not 0 <= x < n for x in images):
            raise ValueError(f"not an injection into {n}: {images}")
        comp = tuple(x for x in range(n) if x not in taken)
        perm = comp + tuple(images)
        if self.G.decorated:
            e = self.G.group.identity
            d = tuple(dec) if dec is not None else (e,) * m
            return UMorphism(m, n, GroupElement(perm, (e,) * (n - m) + d))
        return UMorphism(m, n, self.G.element(perm))

    # -- semisimplicial sets ----------------------------------------------------

    def k_set(self, m: int, n: int, p_max: int | None = None) -> SemisimplicialSet:
        """The semisimplicial set K_. Hom(m, -) at level n.

        p-simplices are pairs (sigma, y) with sigma: p+1 -> n canonical and
        y: m -> n-p-1; for m = 0 these are just the injective words
        sigma.  The (-1)-simplices are Hom(m, n).
        """
        top = n - m - 1
        if p_max is not None:
            top = min(top, p_max)
        G = self.G
        levels: dict[int, list] = {}
        faces: dict[int, list[tuple[int, ...]]] = {}
        for p in range(-1, top + 1):
            a = n - p - 1
            levels[p] = [(s, y) for s in self.hom_set(p + 1, n) for y in self.hom_set(m, a)]
        index = {p: {x: k for k, x in enumerate(v)} for p, v in levels.items()}
        for p in range(0, top + 1):
            a = n - p - 1
            app = self.append_map(a)
            out = []
            for s, y in levels[p]:
                y1 = self.compose(app, y)
                fs = []
                for i in range(p + 1):
                    h = G.block_sum(G.block_sum(G.identity(a), G.braiding(1, i)), G.identity(p - i))
                    r2, u = G.coset_normalize(G.mul(s.rep, h), p)
                    s2 = UMorphism(p, n, r2)
                    y2 = self.compose(self.iso(u), y1)
                    fs.append(index[p - 1][(s2, y2)])
                out.append(tuple(fs))
            faces[p] = out
        return SemisimplicialSet(levels, faces)

    def augmentation(self, K: SemisimplicialSet, p: int, k: int) -> int:
        """Index in level -1 reached from simplex k of level p by d_0 repeatedly."""
        while p >= 0:
            k = K.faces[p][k][0]
            p -= 1
        return k

    def split_components(self, m: int, n: int, K: SemisimplicialSet | None = None) -> dict:
        """Decompose K_. Hom(m,-)_n over the (-1)-simplices x: m -> n.

        Each component is matched with K_. Hom(0,-)_{n-m} by
        sigma' -> f o (id_{n-m} + iota_m) o sigma' where f lifts x.
        Returns {x: {p: {k: index in the k_set(0, n-m) level p}}}.
        """
        K = K or self.k_set(m, n)
        L = self.k_set(0, n - m)
        comps: dict = {}
        for x in K.levels[-1]:
            comps[x[1]] = {p: {} for p in K.levels}
        for p, simp in K.levels.items():
            for k, (s, y) in enumerate(simp):
                x = K.levels[-1][self.augmentation(K, p, k)][1]
                comps[x][p][k] = None
        for x, levels in comps.items():
            f = x.rep
            # psi = f o (id_{n-m} + iota_m): n-m -> n
            psi = self.compose(self.iso(f), self.msum(self.identity(n - m), self.initial(m)))
            lookup = {}
            for p in L.levels:
                for j, (s2, _) in enumerate(L.levels[p]):
                    lookup[self.compose(psi, s2)] = j
            for p in levels:
                for k in levels[p]:
                    s = K.levels[p][k][0]
                    if s not in lookup:
                        raise AssertionError(f"simplex {s.word()} not in the component of {x.word()}")
                    levels[p][k] = lookup[s]
        return comps

    # -- homogeneity ---------------------------------------------------------------

    def homogeneity_check(self, n_max: int) -> dict:
        """Exhaustive check of transitivity, stabilizers, weak complements and prebraiding."""
        G = self.G
        report = {"category": self.name, "n_max": n_max, "passed": True, "checked": []}

        def fail(kind, **data):
            report["passed"] = False
            report["failure"] = {"kind": kind, **{k: _w(v) for k, v in data.items()}}
            return report

        elems = {n: G.enumerate(n) for n in range(n_max + 1)}
        # transitivity of G_B on Hom(A, B)
        for b in range(n_max + 1):
            for a in range(b + 1):
                H = self.hom_set(a, b)
                orbit = {self.compose(self.iso(g), H[0]) for g in elems[b]}
                if orbit != set(H):
                    return fail("transitivity", a=a, b=b)
        report["checked"].append("transitivity")
        # Aut(A) -> Aut(A+B) injective with image Fix(B, A+B)
        for a in range(n_max + 1):
            for b in range(n_max + 1 - a):
                emb = {G.block_sum(f, G.identity(b)) for f in elems[a]}
                if len(emb) != len(elems[a]):
                    return fail("stabilizer injective", a=a, b=b)
                j = UMorphism(b, a + b, G.identity(a + b))  # iota_A + id_B
                fix = {f for f in elems[a + b] if self.compose(self.iso(f), j) == j}
                if fix != emb:
                    return fail("stabilizer image", a=a, b=b)
        report["checked"].append("stabilizers")
        # all morphisms mono
        for a in range(n_max + 1):
            for b in range(a, n_max + 1):
                for c in range(b, n_max + 1):
                    for s in self.hom_set(b, c):
                        seen = {}
                        for psi in self.hom_set(a, b):
                            t = self.compose(s, psi)
                            if t in seen:
                                return fail("mono", s=s, psi=psi, other=seen[t])
                            seen[t] = psi
        report["checked"].append("mono")
        # psi -> (psi o (id_A + iota_B), psi o (iota_A + id_B)) injective
        for a in range(n_max + 1):
            for b in range(n_max + 1 - a):
                ja = self.msum(self.identity(a), self.initial(b))
                jb = self.msum(self.initial(a), self.identity(b))
                for c in range(a + b, n_max + 1):
                    seen = {}
                    for psi in self.hom_set(a + b, c):
                        key = (self.compose(psi, ja), self.compose(psi, jb))
                        if key in seen:
                            return fail("joint injectivity", a=a, b=b, c=c, psi=psi)
                        seen[key] = psi
        report["checked"].append("joint injectivity")
        # complements exist and are unique up to G_D + id_A
        for a in range(n_max + 1):
            for b in range(a, n_max + 1):
                d = b - a
                j = UMorphism(a, b, G.identity(b))  # iota_D + id_A
                lifts: dict = {}
                for f in elems[b]:
                    lifts.setdefault(self.compose(self.iso(f), j), []).append(f)
                if set(lifts) != set(self.hom_set(a, b)):
                    return fail("complement existence", a=a, b=b)
                sub = {G.block_sum(g, G.identity(a)) for g in elems[d]}
                for psi, fs in lifts.items():
                    f0i = G.inv(fs[0])
                    for f in fs[1:]:
                        if G.mul(f0i, f) not in sub:
                            return fail("complement uniqueness", a=a, b=b, psi=psi)
        report["checked"].append("complements")
        # prebraiding: b_{A,B} o (id_A + iota_B) = iota_B + id_A
        for a in range(n_max + 1):
            for b in range(n_max + 1 - a):
                lhs = self.compose(self.iso(G.braiding(a, b)), self.msum(self.identity(a), self.initial(b)))
                rhs = self.msum(self.initial(b), self.identity(a))
                if lhs != rhs:
                    return fail("prebraiding", a=a, b=b)
        report["checked"].append("prebraiding")
        # composition is associative and unital
        for a in range(min(n_max, 3) + 1):
            for b in range(a, min(n_max, 3) + 1):
                for c in range(b, n_max + 1):
                    for f in self.hom_set(a, b)[:6]:
                        if self.compose(self.identity(b), f) != f or self.compose(f, self.identity(a)) != f:
                            return fail("unit", f=f)
                        for g in self.hom_set(b, c)[:6]:
                            for h in self.hom_set(c, n_max)[:6]:
                                if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                                    return fail("associativity", f=f, g=g, h=h)
        report["checked"].append("associativity")
        return report


def _w(v):
    if isinstance(v, (UMorphism, GroupElement)):
        return v.word()
    return v

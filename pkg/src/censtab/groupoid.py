"""Towers of groups with block sum and braiding.

Three families are supported:

* ``symmetric``: the symmetric groups S_n acting on strands 0..n-1.
* ``wreath``: G wr S_n for a finite abelian group G given by its
  multiplication table.
* ``trivial``: the trivial group at every rank (the natural numbers
  viewed as a groupoid).

Strands are 0-based internally; ``GroupElement.word()`` shows the
1-based image list used in text formats.

Multiplication convention for the wreath family: an element (dec, perm)
sends the pair (strand i, x) to (perm[i], dec[i] + x).  Products compose
right to left, so (g * h) applies h first.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class FiniteAbelianGroup:
    """Finite group on {0..k-1} from a multiplication table.

    The table is not validated on construction so that a broken table can
    be reported by the axiom checker rather than rejected up front.
    """

    def __init__(self, table: Sequence[Sequence[int]], name: str | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name or f"table{self.order}"
        self.identity = self._find_identity()
        self._inv = self._find_inverses()
        self._gens: tuple[int, ...] | None = None
        self._words: dict[int, tuple[int, ...]] | None = None

    @classmethod
    def cyclic(cls, k: int) -> "FiniteAbelianGroup":
        if k < 1:
            raise ValueError("cyclic group order must be positive")
        return cls([[(a + b) % k for b in range(k)] for a in range(k)], name=f"Z/{k}")

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(self.order)):
                return e
        return 0

    def _find_inverses(self) -> tuple[int, ...]:
        inv = []
        for a in range(self.order):
            inv.append(next((b for b in range(self.order) if self.table[a][b] == self.identity), a))
        return tuple(inv)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def check(self) -> dict | None:
        """First violated group/abelian axiom, or None."""
        k = self.order
        for row in self.table:
            if len(row) != k or any(not 0 <= x < k for x in row):
                return {"axiom": "closure", "row": list(row)}
        e = self.identity
        for x in range(k):
            if self.table[e][x] != x or self.table[x][e] != x:
                return {"axiom": "identity", "element": x}
            if self.table[x][self._inv[x]] != e:
                return {"axiom": "inverse", "element": x}
        for a, b in itertools.product(range(k), repeat=2):
            if self.table[a][b] != self.table[b][a]:
                return {"axiom": "commutativity", "a": a, "b": b}
        for a, b, c in itertools.product(range(k), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                return {"axiom": "associativity", "a": a, "b": b, "c": c}
        return None

    def generators(self) -> tuple[int, ...]:
        """Greedy generating set: smallest elements not yet in the span."""
        if self._gens is None:
            gens: list[int] = []
            span = {self.identity}
            for x in range(self.order):
                if x in span:
                    continue
                gens.append(x)
                span = self._close(gens)
            self._gens = tuple(gens)
        return self._gens

    def _close(self, gens: Sequence[int]) -> set[int]:
        seen = {self.identity}
        todo = [self.identity]
        while todo:
            a = todo.pop()
            for s in gens:
                b = self.table[a][s]
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return seen

    def word(self, x: int) -> tuple[int, ...]:
        """Shortest word (indices into generators()) multiplying to x."""
        if self._words is None:
            gens = self.generators()
            words = {self.identity: ()}
            queue = deque([self.identity])
            while queue:
                a = queue.popleft()
                for j, s in enumerate(gens):
                    b = self.table[a][s]
                    if b not in words:
                        words[b] = words[a] + (j,)
                        queue.append(b)
            self._words = words
        return self._words[x]


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element of G_n: a permutation of n strands plus optional decorations."""

    perm: tuple[int, ...]
    dec: tuple[int, ...] | None = None

    @property
    def rank(self) -> int:
        return len(self.perm)

    def word(self) -> str:
        s = ",".join(str(p + 1) for p in self.perm)
        if self.dec is not None:
            s += ";" + ",".join(str(d) for d in self.dec)
        return s

    def __repr__(self) -> str:
        return f"GroupElement({self.word()})"


FAMILIES = ("symmetric", "wreath", "trivial")


@dataclass
class Groupoid:
    """Descriptor of a stability groupoid tower."""

    family: str = "symmetric"
    group: FiniteAbelianGroup | None = None
    _enum_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "wreath" and self.group is None:
            raise ValueError("wreath family needs a finite abelian group")

    @classmethod
    def symmetric(cls) -> "Groupoid":
        return cls("symmetric")

    @classmethod
    def wreath(cls, k_or_group) -> "Groupoid":
        g = k_or_group if isinstance(k_or_group, FiniteAbelianGroup) else FiniteAbelianGroup.cyclic(int(k_or_group))
        return cls("wreath", g)

    @classmethod
    def trivial(cls) -> "Groupoid":
        return cls("trivial")

    @property
    def name(self) -> str:
        if self.family == "wreath":
            return f"wreath({self.group.name})"
        return self.family

    @property
    def decorated(self) -> bool:
        return self.family == "wreath"

    @property
    def is_symmetric(self) -> bool:
        """True when the braiding squares to the identity."""
        return True

    # -- elements -----------------------------------------------------

    def element(self, perm: Sequence[int], dec: Sequence[int] | None = None) -> GroupElement:
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation: {perm}")
        if self.family == "trivial" and perm != tuple(range(len(perm))):
            raise ValueError("trivial family only has identity elements")
        if self.decorated:
            if dec is None:
                dec = (self.group.identity,) * len(perm)
            dec = tuple(int(d) for d in dec)
            if len(dec) != len(perm) or any(not 0 <= d < self.group.order for d in dec):
                raise ValueError(f"bad decorations {dec}")
            return GroupElement(perm, dec)
        if dec is not None and any(dec):
            raise ValueError("this family has no decorations")
        return GroupElement(perm, None)

    def from_word(self, word: str) -> GroupElement:
        """Parse '2,3,1' or '2,3,1;0,1,0' (1-based images)."""
        word = word.strip()
        if ";" in word:
            p, d = word.split(";", 1)
            dec = [int(x) for x in d.split(",") if x.strip()]
        else:
            p, dec = word, None
        perm = [int(x) - 1 for x in p.split(",") if x.strip()]
        return self.element(perm, dec)

    def identity(self, n: int) -> GroupElement:
        return self.element(range(n))

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """g * h: apply h first, then g."""
        if g.rank != h.rank:
            raise ValueError("rank mismatch in product")
        gp = g.perm
        perm = tuple(gp[j] for j in h.perm)
        if not self.decorated:
            return GroupElement(perm, None)
        tab = self.group.table
        gd = g.dec
        dec = tuple(tab[gd[h.perm[i]]][h.dec[i]] for i in range(len(perm)))
        return GroupElement(perm, dec)

    def inv(self, g: GroupElement) -> GroupElement:
        n = g.rank
        perm = [0] * n
        for i, j in enumerate(g.perm):
            perm[j] = i
        if not self.decorated:
            return GroupElement(tuple(perm), None)
        # (dec, p)^{-1} sends (p(i), dec_i + x) back to (i, x)
        gi = self.group.inv
        dec = tuple(gi(g.dec[perm[j]]) for j in range(n))
        return GroupElement(tuple(perm), dec)

    def block_sum(self, g: GroupElement, h: GroupElement) -> GroupElement:
        m = g.rank
        perm = g.perm + tuple(m + j for j in h.perm)
        dec = None if not self.decorated else g.dec + h.dec
        return GroupElement(perm, dec)

    def braiding(self, m: int, n: int) -> GroupElement:
        """b_{m,n}: first m strands move past the last n strands."""
        if self.family == "trivial":
            return self.identity(m + n)
        perm = tuple(i + n if i < m else i - m for i in range(m + n))
        return self.element(perm)

    def order(self, n: int) -> int:
        if self.family == "trivial":
            return 1
        f = 1
        for i in range(2, n + 1):
            f *= i
        if self.decorated:
            f *= self.group.order ** n
        return f

    def enumerate(self, n: int, limit: int | None = None) -> list[GroupElement]:
        """All elements of G_n in a fixed order."""
        if limit is not None and self.order(n) > limit:
            raise ValueError(f"|G_{n}| = {self.order(n)} exceeds enumeration limit {limit}")
        if n in self._enum_cache:
            return self._enum_cache[n]
        if self.family == "trivial":
            out = [self.identity(n)]
        elif not self.decorated:
            out = [GroupElement(p, None) for p in itertools.permutations(range(n))]
        else:
            decs = list(itertools.product(range(self.group.order), repeat=n))
            out = [GroupElement(p, d) for p in itertools.permutations(range(n)) for d in decs]
        self._enum_cache[n] = out
        return out

    # -- generators and words ----------------------------------------

    def generators(self, n: int) -> list[GroupElement]:
        """Adjacent transpositions s_0..s_{n-2}, then decorations on strand 0."""
        if self.family == "trivial":
            return []
        gens = []
        for i in range(n - 1):
            p = list(range(n))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(self.element(p))
        if self.decorated and n >= 1:
            e = self.group.identity
            for a in self.group.generators():
                gens.append(self.element(range(n), (a,) + (e,) * (n - 1)))
        return gens

    def word(self, g: GroupElement) -> list[int]:
        """Word in generators(n) (left factor first) whose product is g."""
        n = g.rank
        if self.family == "trivial":
            return []
        # g = (0, perm) * (dec, id)
        out = _perm_word(g.perm)
        if self.decorated:
            e = self.group.identity
            base = n - 1
            for i, x in enumerate(g.dec):
                if x == e:
                    continue
                # strand i decoration = pi * c_0(x) * pi^{-1}, pi = s_{i-1}...s_0
                w = [base + j for j in self.group.word(x)]
                out += list(range(i - 1, -1, -1)) + w + list(range(i))
        return out

    def relations(self, n: int) -> list[list[int]]:
        """Words in generators(n) that must multiply to the identity.

        Coxeter relations for S_n; for the wreath family additionally the
        relations of G on strand 0, commutation of strand-0 decorations
        with s_j (j >= 1), and with decorations moved to strand 1.
        """
        if self.family == "trivial":
            return []
        rels: list[list[int]] = []
        s = list(range(n - 1))
        for i in s:
            rels.append([i, i])
        for i in s:
            for j in s:
                if j == i + 1:
                    rels.append([i, j] * 3)
                elif j > i + 1:
                    rels.append([i, j, i, j])
        if self.decorated and n >= 1:
            G = self.group
            base = n - 1
            gw = {x: [base + j for j in G.word(x)] for x in range(G.order)}
            inv_word = lambda x: gw[G.inv(x)]
            for x in range(G.order):
                for y in range(G.order):
                    rels.append(gw[x] + gw[y] + inv_word(G.op(x, y)))
            for a in range(len(G.generators())):
                for j in range(1, n - 1):
                    rels.append([base + a, j] + gw[G.inv(G.generators()[a])] + [j])
                if n >= 2:
                    for b in range(len(G.generators())):
                        ta = [base + a]
                        tb2 = [0, base + b, 0]
                        tai = gw[G.inv(G.generators()[a])]
                        tbi2 = [0] + gw[G.inv(G.generators()[b])] + [0]
                        rels.append(ta + tb2 + tai + tbi2)
        return rels

    def word_product(self, n: int, word: Sequence[int]) -> GroupElement:
        gens = self.generators(n)
        g = self.identity(n)
        for j in word:
            g = self.mul(g, gens[j])
        return g

    # -- cosets ---------------------------------------------------------

    def coset_normalize(self, g: GroupElement, m: int) -> tuple[GroupElement, GroupElement]:
        """Split g = rep * (u + id_m) with u in G_{n-m}.

        rep agrees with g on the last m strands and sends the first n-m
        strands order-preservingly, undecorated, onto the remaining ones.
        """
        n = g.rank
        if not 0 <= m <= n:
            raise ValueError(f"cannot normalize rank {n} element modulo G_{n - m}")
        k = n - m
        if self.family == "trivial":
            return g, self.identity(k)
        tail = g.perm[k:]
        taken = set(tail)
        comp = [x for x in range(n) if x not in taken]
        pos = {x: j for j, x in enumerate(comp)}
        rep_perm = tuple(comp) + tail
        u_perm = tuple(pos[g.perm[i]] for i in range(k))
        if self.decorated:
            e = self.group.identity
            rep = GroupElement(rep_perm, (e,) * k + g.dec[k:])
            u = GroupElement(u_perm, g.dec[:k])
        else:
            rep = GroupElement(rep_perm, None)
            u = GroupElement(u_perm, None)
        return rep, u

    # -- checks ---------------------------------------------------------

    def axiom_check(self, n_max: int, enum_limit: int = 50000) -> dict:
        """Exhaustive check of the stability groupoid and braiding axioms.

        Returns a report with ``passed`` and, on failure, a counterexample.
        """
        report = {"groupoid": self.name, "n_max": n_max, "passed": True, "checked": []}

        def fail(kind, **data):
            report["passed"] = False
            report["failure"] = {"kind": kind, **{k: _jsonable(v) for k, v in data.items()}}
            return report

        if self.decorated:
            bad = self.group.check()
            if bad is not None:
                return fail("coefficient group", **bad)
        elems = {n: self.enumerate(n, enum_limit) for n in range(n_max + 1)}
        # group axioms inside each G_n
        for n in range(n_max + 1):
            E = elems[n]
            e = self.identity(n)
            Es = set(E)
            if len(Es) != len(E) or len(E) != self.order(n):
                return fail("enumeration", n=n)
            for g in E:
                if self.mul(g, e) != g or self.mul(e, g) != g:
                    return fail("identity", n=n, g=g)
                if self.mul(g, self.inv(g)) != e:
                    return fail("inverse", n=n, g=g)
            sample = E if len(E) <= 48 else E[:: max(1, len(E) // 48)]
            for a in sample:
                for b in sample:
                    ab = self.mul(a, b)
                    for c in sample:
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                            return fail("associativity", n=n, a=a, b=b, c=c)
        report["checked"].append("group axioms")
        # G_0 trivial
        if len(elems[0]) != 1:
            return fail("trivial G_0")
        # block sum: homomorphism, injective, associative, unital
        for m in range(n_max + 1):
            for n in range(n_max + 1 - m):
                seen = {}
                for g in elems[m]:
                    for h in elems[n]:
                        s = self.block_sum(g, h)
                        if s in seen:
                            return fail("block sum injective", m=m, n=n, pair=(g, h), other=seen[s])
                        seen[s] = (g, h)
                Am = elems[m][: 6]
                An = elems[n][: 6]
                for g1 in Am:
                    for g2 in Am:
                        for h1 in An:
                            for h2 in An:
                                lhs = self.block_sum(self.mul(g1, g2), self.mul(h1, h2))
                                rhs = self.mul(self.block_sum(g1, h1), self.block_sum(g2, h2))
                                if lhs != rhs:
                                    return fail("block sum homomorphism", m=m, n=n, g1=g1, g2=g2, h1=h1, h2=h2)
                if self.block_sum(self.identity(0), self.identity(m)) != self.identity(m):
                    return fail("unit", m=m)
        report["checked"].append("block sum")
        # intersection axiom (G_{l+m} x 1) cap (1 x G_{m+n}) = 1 x G_m x 1
        for l in range(n_max + 1):
            for m in range(n_max + 1 - l):
                for n in range(n_max + 1 - l - m):
                    left = {self.block_sum(g, self.identity(n)) for g in elems[l + m]}
                    right = {self.block_sum(self.identity(l), g) for g in elems[m + n]}
                    mid = {self.block_sum(self.block_sum(self.identity(l), g), self.identity(n)) for g in elems[m]}
                    if left & right != mid:
                        return fail("intersection", l=l, m=m, n=n)
        report["checked"].append("intersection")
        # braiding: naturality, hexagons, symmetry
        for m in range(n_max + 1):
            for n in range(n_max + 1 - m):
                b = self.braiding(m, n)
                if self.inv(b) != self.braiding(n, m):
                    return fail("symmetry", m=m, n=n)
                for f in elems[m][:12]:
                    for g in elems[n][:12]:
                        lhs = self.mul(self.block_sum(g, f), b)
                        rhs = self.mul(b, self.block_sum(f, g))
                        if lhs != rhs:
                            return fail("naturality", m=m, n=n, f=f, g=g)
        for l in range(n_max + 1):
            for m in range(n_max + 1 - l):
                for n in range(n_max + 1 - l - m):
                    lhs = self.braiding(l, m + n)
                    rhs = self.mul(self.block_sum(self.identity(m), self.braiding(l, n)),
                                   self.block_sum(self.braiding(l, m), self.identity(n)))
                    if lhs != rhs:
                        return fail("hexagon 1", l=l, m=m, n=n)
                    lhs = self.braiding(l + m, n)
                    rhs = self.mul(self.block_sum(self.braiding(l, n), self.identity(m)),
                                   self.block_sum(self.identity(l), self.braiding(m, n)))
                    if lhs != rhs:
                        return fail("hexagon 2", l=l, m=m, n=n)
        report["checked"].append("braiding")
        # generators and presentation
        for n in range(n_max + 1):
            for g in elems[n][:200]:
                if self.word_product(n, self.word(g)) != g:
                    return fail("word", n=n, g=g)
            for r in self.relations(n):
                if self.word_product(n, r) != self.identity(n):
                    return fail("relation", n=n, word=r)
        report["checked"].append("presentation")
        return report


def _perm_word(perm: Sequence[int]) -> list[int]:
    """Adjacent transpositions s_i with perm = s_{w0} s_{w1} ... ."""
    p = list(perm)
    tail: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                # p = p' * s_i with p' = p * s_i
                p[i], p[i + 1] = p[i + 1], p[i]
                tail.append(i)
                changed = True
    return tail[::-1]


def _jsonable(v):
    if isinstance(v, GroupElement):
        return v.word()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from censtab import FiniteAbelianGroup, Groupoid


SYM = Groupoid.symmetric()
WR2 = Groupoid.wreath(2)
WR3 = Groupoid.wreath(3)


def test_orders_and_enumeration():
    assert len(SYM.enumerate(3)) == 6
    assert len(WR2.enumerate(2)) == 8
    assert SYM.enumerate(0) == [SYM.identity(0)]
    assert WR3.order(2) == 18


def test_enumeration_is_sorted_and_distinct():
    for G, n in ((SYM, 4), (WR2, 3)):
        E = G.enumerate(n)
        assert E == sorted(E) and len(set(E)) == len(E) == G.order(n)


def test_generators():
    assert [g.word() for g in SYM.generators(3)] == ["2,1,3", "1,3,2"]
    gens = WR2.generators(1)
    assert len(gens) == 1 and gens[0].dec == (1,)


@pytest.mark.parametrize("G,n_max", [(SYM, 4), (WR2, 3), (WR3, 2)])
def test_generators_generate(G, n_max):
    for n in range(n_max + 1):
        seen = {G.identity(n)}
        frontier = list(seen)
        gens = G.generators(n)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = G.mul(s, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        assert len(seen) == G.order(n)


def test_braiding_example():
    assert SYM.braiding(2, 1).word() == "2,3,1"


def test_coset_normalize_examples():
    for n in range(4):
        for m in range(n + 1):
            rep, u = SYM.coset_normalize(SYM.identity(n), m)
            assert rep == SYM.identity(n) and u == SYM.identity(n - m)
    g = SYM.from_word("3,2,1")  # the transposition (1 3)
    rep, u = SYM.coset_normalize(g, 1)
    assert rep.word() == "2,3,1"
    # g sends 1 -> 3 = rep(2) and 2 -> 2 = rep(1), so u swaps the first two strands
    assert u.word() == "2,1"
    assert SYM.mul(rep, SYM.block_sum(u, SYM.identity(1))) == g


@pytest.mark.parametrize("G,n_max", [(SYM, 4), (WR2, 3)])
def test_coset_normalize_round_trip_and_constant_on_cosets(G, n_max):
    for n in range(n_max + 1):
        E = G.enumerate(n)
        for m in range(n + 1):
            sub = G.enumerate(n - m)
            for g in E:
                rep, u = G.coset_normalize(g, m)
                assert G.mul(rep, G.block_sum(u, G.identity(m))) == g
                for v in sub:
                    h = G.mul(g, G.block_sum(v, G.identity(m)))
                    assert G.coset_normalize(h, m)[0] == rep


def _elements(G, max_rank, rank=None):
    @st.composite
    def draw(d):
        n = d(st.integers(0, max_rank)) if rank is None else rank
        perm = d(st.permutations(range(n)))
        dec = [d(st.integers(0, G.group.order - 1)) for _ in range(n)] if G.decorated else None
        return G.element(perm, dec)
    return draw()


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_group_laws_random(data):
    G = data.draw(st.sampled_from([SYM, WR2, WR3]))
    a = data.draw(_elements(G, 5))
    n = a.rank
    b = data.draw(_elements(G, 5, n))
    c = data.draw(_elements(G, 5, n))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity(n)
    assert G.from_word(a.word()) == a


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_block_sum_strict_and_braiding_natural(data):
    G = data.draw(st.sampled_from([SYM, WR2]))
    g = data.draw(_elements(G, 3))
    f = data.draw(_elements(G, 3))
    k = data.draw(_elements(G, 2))
    assert G.block_sum(G.block_sum(g, f), k) == G.block_sum(g, G.block_sum(f, k))
    m, n = g.rank, f.rank
    # (f + g) b_{m,n} = b_{m,n} (g + f)
    assert G.mul(G.block_sum(f, g), G.braiding(m, n)) == G.mul(G.braiding(m, n), G.block_sum(g, f))
    assert G.mul(G.braiding(m, n), G.braiding(n, m)) == G.identity(m + n)


def test_axiom_check_passes():
    assert SYM.axiom_check(4)["passed"]
    assert WR2.axiom_check(3)["passed"]
    assert Groupoid.trivial().axiom_check(4)["passed"]


def test_corrupted_table_is_caught():
    table = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    table[1][2] = 1  # 1 + 2 should be 0
    bad = FiniteAbelianGroup(table)
    G = Groupoid.wreath(bad)
    rep = G.axiom_check(2)
    assert not rep["passed"]
    assert "failure" in rep


def test_relations_hold():
    for G, n in ((SYM, 4), (WR2, 3)):
        for w in G.relations(n):
            assert G.word_product(n, w) == G.identity(n)


def test_bad_elements_rejected():
    with pytest.raises(ValueError):
        SYM.element([0, 0])
    with pytest.raises(ValueError):
        WR2.element([0], [5])

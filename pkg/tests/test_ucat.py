import itertools
from math import factorial, comb

import pytest
from hypothesis import given, settings, strategies as st

from censtab import Groupoid, StabilityCategory
from censtab.ucat import UMorphism

SYM = StabilityCategory(Groupoid.symmetric())
WR2 = StabilityCategory(Groupoid.wreath(2))


@pytest.mark.parametrize("m,n", [(0, 0), (0, 3), (1, 3), (2, 3), (3, 3), (2, 5), (4, 2)])
def test_symmetric_hom_set_sizes(m, n):
    expected = factorial(n) // factorial(n - m) if m <= n else 0
    assert len(SYM.hom_set(m, n)) == expected


def test_wreath_hom_set_sizes():
    # injections decorated on the source strands
    assert len(WR2.hom_set(1, 2)) == 4
    assert len(WR2.hom_set(2, 3)) == 6 * 4
    for m, n in [(1, 2), (2, 3)]:
        G = WR2.G
        assert len(WR2.hom_set(m, n)) * G.order(n - m) == G.order(n)


def _homs(cat, n_max=4):
    @st.composite
    def draw(d):
        n = d(st.integers(0, n_max))
        m = d(st.integers(0, n))
        return d(st.sampled_from(cat.hom_set(m, n)))
    return draw()


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_unit_and_associativity(data):
    cat = data.draw(st.sampled_from([SYM, WR2]))
    f = data.draw(_homs(cat, 3))
    assert cat.compose(cat.identity(f.target), f) == f
    assert cat.compose(f, cat.identity(f.source)) == f
    c = data.draw(st.integers(f.target, f.target + 1))
    N = data.draw(st.integers(c, c + 1))
    g = data.draw(st.sampled_from(cat.hom_set(f.target, c)))
    h = data.draw(st.sampled_from(cat.hom_set(c, N)))
    assert cat.compose(h, cat.compose(g, f)) == cat.compose(cat.compose(h, g), f)


def test_composition_matches_injections():
    for f in SYM.hom_set(2, 3):
        for g in SYM.hom_set(3, 4):
            gf = SYM.compose(g, f)
            # as maps of strands: j -> g(f(j))
            gi = dict(zip(range(3), g.image()))
            assert gf.image() == tuple(gi[x] for x in f.image())


def test_compose_rejects_mismatch():
    with pytest.raises(ValueError):
        SYM.compose(SYM.identity(2), SYM.identity(3))


def test_msum_examples():
    a = SYM.msum(SYM.identity(2), SYM.initial(1))
    assert a == SYM.append_map(2) and a.image() == (0, 1)
    b = SYM.msum(SYM.initial(1), SYM.identity(2))
    assert b == SYM.stabilizer(2) and b.image() == (1, 2)
    f = SYM.from_injection(2, [1])
    g = SYM.from_injection(3, [0, 2])
    # f + g : 1 + 2 -> 2 + 3, second block shifted by 2
    assert SYM.msum(f, g).image() == (1, 2, 4)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_msum_interchange(data):
    cat = data.draw(st.sampled_from([SYM, WR2]))
    f1 = data.draw(_homs(cat, 2))
    f2 = data.draw(_homs(cat, 2))
    g1 = data.draw(st.sampled_from(cat.hom_set(f1.target, f1.target + data.draw(st.integers(0, 1)))))
    g2 = data.draw(st.sampled_from(cat.hom_set(f2.target, f2.target + data.draw(st.integers(0, 1)))))
    lhs = cat.compose(cat.msum(g1, g2), cat.msum(f1, f2))
    rhs = cat.msum(cat.compose(g1, f1), cat.compose(g2, f2))
    assert lhs == rhs


def test_face_examples():
    # d_i misses position i
    for p in range(4):
        for i in range(p + 1):
            img = SYM.face(i, p).image()
            assert set(range(p + 1)) - set(img) == {i}
            assert list(img) == sorted(img)
    with pytest.raises(ValueError):
        SYM.face(3, 2)


@pytest.mark.parametrize("cat", [SYM, WR2])
def test_cosimplicial_identity(cat):
    # d_j d_i = d_i d_{j-1} for i < j
    for p in range(4):
        for j in range(p + 2):
            for i in range(j):
                lhs = cat.compose(cat.face(j, p + 1), cat.face(i, p))
                rhs = cat.compose(cat.face(i, p + 1), cat.face(j - 1, p))
                assert lhs == rhs


def test_from_injection_validation():
    with pytest.raises(ValueError):
        SYM.from_injection(3, [0, 0])
    with pytest.raises(ValueError):
        SYM.from_injection(2, [2])


def test_k_set_sizes():
    K = SYM.k_set(0, 2)
    assert [K.size(p) for p in (-1, 0, 1)] == [1, 2, 2]
    K3 = SYM.k_set(0, 3)
    # injective words of length p+1 in 3 letters
    assert [K3.size(p) for p in (-1, 0, 1, 2)] == [1, 3, 6, 6]
    K = SYM.k_set(1, 3)
    # (sigma, y) with sigma: p+1 -> 3 and y: 1 -> 3-p-1
    assert [K.size(p) for p in (-1, 0, 1)] == [3, 3 * 2, 6 * 1]


@pytest.mark.parametrize("cat,m,n", [(SYM, 0, 4), (SYM, 1, 4), (SYM, 2, 4), (WR2, 0, 3), (WR2, 1, 3)])
def test_k_set_identities(cat, m, n):
    assert cat.k_set(m, n).check_identities() is None


def test_k_set_faces_are_precomposition():
    # for m = 0 the faces of sigma are sigma o d_i
    K = SYM.k_set(0, 4)
    for p in range(1, 4):
        for k, (s, _) in enumerate(K.levels[p]):
            for i, t in enumerate(K.faces[p][k]):
                assert K.levels[p - 1][t][0] == SYM.compose(s, SYM.face(i, p))


def test_split_components():
    for m, n in [(1, 3), (2, 4), (1, 4)]:
        K = SYM.k_set(m, n)
        comps = SYM.split_components(m, n, K)
        L = SYM.k_set(0, n - m)
        assert len(comps) == len(SYM.hom_set(m, n))
        for levels in comps.values():
            for p, idx in levels.items():
                # each component is a copy of the injective-word complex
                assert sorted(idx.values()) == list(range(L.size(p)))


def test_to_json_is_deterministic():
    a = SYM.k_set(0, 2).to_json()
    b = StabilityCategory(Groupoid.symmetric()).k_set(0, 2).to_json()
    assert a == b


@pytest.mark.parametrize("cat,n", [(SYM, 4), (WR2, 3), (StabilityCategory(Groupoid.trivial()), 4)])
def test_homogeneity(cat, n):
    rep = cat.homogeneity_check(n)
    assert rep["passed"], rep.get("failure")
    assert "prebraiding" in rep["checked"]


def test_corrupted_composition_is_caught(monkeypatch):
    cat = StabilityCategory(Groupoid.symmetric())
    honest = StabilityCategory.compose

    def skewed(self, outer, inner):
        out = honest(self, outer, inner)
        if out.source == 1 and out.target == 3 and out.image() == (2,):
            return self.from_injection(3, [1])
        return out

    monkeypatch.setattr(StabilityCategory, "compose", skewed)
    rep = cat.homogeneity_check(3)
    assert not rep["passed"]

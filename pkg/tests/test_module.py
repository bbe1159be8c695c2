from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from censtab import (Groupoid, ModuleError, StabilityCategory, dsum, free_cover, free_module,
                     nat_ker_coker, present, shift, tensor, validate, zero_module)
from censtab.acceptance import presented_corpus
from censtab.exact import GF, QQ, ExactMatrix, rank
from censtab.module import ConsistentSequence, change_ring, check_natural, map_kernel

SYM = StabilityCategory(Groupoid.symmetric())
WR2 = StabilityCategory(Groupoid.wreath(2))
CORPUS = presented_corpus(SYM)


def falling(n, m):
    return factorial(n) // factorial(n - m) if m <= n else 0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_free_dims(m):
    V = free_module(SYM, m, 5)
    assert list(V.dims) == [falling(n, m) for n in range(6)]
    assert validate(V)["passed"]


def test_free_wreath_validates():
    V = free_module(WR2, 1, 3, GF(2))
    assert list(V.dims) == [0, 2, 4, 6]
    assert validate(V)["passed"]


def test_corrupted_transition_reports_first_violation():
    V = free_module(SYM, 1, 4)
    bad_t = ExactMatrix.from_dense(QQ, [[1], [1]])
    W = ConsistentSequence(V.cat, V.ring, V.dims, V.actions,
                           (V.transitions[0], bad_t) + V.transitions[2:], label="bad")
    rep = validate(W)
    assert not rep["passed"]
    f = rep["failure"]
    assert (f["kind"], f["m"], f["n"], f["g"]) == ("consistency", 1, 3, "2,1")


def test_wrong_shapes_rejected():
    V = free_module(SYM, 1, 2)
    with pytest.raises(ModuleError):
        ConsistentSequence(V.cat, V.ring, V.dims, V.actions, V.transitions[:1])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_evaluate_is_functorial(data):
    V = free_module(SYM, 1, 4)
    a = data.draw(st.integers(0, 2))
    b = data.draw(st.integers(a, 3))
    c = data.draw(st.integers(b, 4))
    f = data.draw(st.sampled_from(SYM.hom_set(a, b)))
    g = data.draw(st.sampled_from(SYM.hom_set(b, c)))
    assert V.evaluate(SYM.compose(g, f)) == V.evaluate(g) @ V.evaluate(f)
    assert V.evaluate(SYM.identity(b)) == ExactMatrix.identity(QQ, V.dims[b])


def test_shift():
    V = free_module(SYM, 1, 5)
    T = shift(V)
    assert T.dims == V.dims[1:]
    assert validate(T)["passed"]


def test_nat_ker_coker():
    for V in (free_module(SYM, 1, 5), free_module(SYM, 2, 5), present(SYM, CORPUS["standard"][0], 5)):
        K, C = nat_ker_coker(V)
        assert validate(K)["passed"] and validate(C)["passed"]
        for n in range(V.n_max):
            # 0 -> K_n -> V_n -> V_{n+1} -> C_n -> 0
            assert V.dims[n] - K.dims[n] + C.dims[n] == V.dims[n + 1]
    # free modules: injective transitions, cokernel of R Hom(1,-) is R Hom(0,-) shifted
    K, C = nat_ker_coker(free_module(SYM, 1, 5))
    assert set(K.dims) == {0}
    assert list(C.dims) == [1, 1, 1, 1, 1]


def test_dsum_and_tensor():
    A = free_module(SYM, 1, 4)
    B = free_module(SYM, 0, 4)
    S = dsum(A, B)
    assert list(S.dims) == [a + b for a, b in zip(A.dims, B.dims)]
    T = tensor(A, A)
    assert list(T.dims) == [a * a for a in A.dims]
    assert validate(S)["passed"] and validate(T)["passed"]


def test_present_corpus_dims():
    n_max = 5
    std = present(SYM, CORPUS["standard"][0], n_max)
    assert list(std.dims) == [0, 0] + [n - 1 for n in range(2, n_max + 1)]
    pt = present(SYM, CORPUS["point"][0], n_max)
    assert list(pt.dims) == [1, 0, 0, 0, 0, 0]
    const = present(SYM, CORPUS["const"][0], n_max)
    assert list(const.dims) == [1] * (n_max + 1)
    for name, (P, deg) in CORPUS.items():
        V = present(SYM, P, 4)
        assert validate(V)["passed"], name
        assert P.degree() == deg


def test_present_sequence_is_exact():
    P = CORPUS["standard"][0]
    V, P0, mats = present(SYM, P, 5, return_maps=True)
    for n in range(6):
        # dim V_n = dim P0_n - rank(relations)
        assert V.dims[n] == P0.dims[n] - rank(mats[n])


def test_presentation_rejects_wrong_morphism():
    from censtab import Presentation
    P = Presentation([1], [2], {(0, 0): [(1, SYM.identity(2))]})
    with pytest.raises(ModuleError):
        present(SYM, P, 3)


@pytest.mark.parametrize("name", ["standard", "free2", "point"])
def test_free_cover_surjects(name):
    P, deg = CORPUS[name]
    V = present(SYM, P, 5)
    F, maps = free_cover(V, deg)
    assert check_natural(F, V, maps) is None
    for n in range(V.n_max + 1):
        assert rank(maps[n]) == V.dims[n]
    # the kernel is again a module, i.e. the cover extends to a resolution step
    K = map_kernel(F, maps)
    assert validate(K)["passed"]
    for n in range(V.n_max + 1):
        assert K.dims[n] == F.dims[n] - V.dims[n]


def test_change_ring_and_zero():
    V = change_ring(free_module(SYM, 1, 3), GF(3))
    assert validate(V)["passed"]
    Z = zero_module(SYM, 3)
    assert list(Z.dims) == [0, 0, 0, 0] and validate(Z)["passed"]

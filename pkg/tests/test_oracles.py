"""The frozen oracle values agree with their generators."""
from oracles import (INJECTIVE_WORDS_TOP, abelian_group_homology_f2, dense_det, dense_rank, derangements,
                     injective_words_homology)


def test_injective_words_top_is_derangement_number():
    for n, v in INJECTIVE_WORDS_TOP.items():
        if n <= 4:
            h = injective_words_homology(n)
            assert h[n - 1] == v
            assert all(h[p] == 0 for p in range(-1, n - 1))
        assert derangements(n) == v


def test_dense_helpers():
    assert dense_rank([[1, 2], [2, 4]]) == 1
    assert dense_rank([[1, 1], [1, -1]], p=2) == 1
    assert dense_det([[2, 0], [0, 3]]) == 6
    assert abelian_group_homology_f2(3, 2) == 6

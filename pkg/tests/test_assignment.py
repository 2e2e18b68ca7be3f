import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conered.assignment import matching_total, min_cost_matching, solve_assignment

from oracles import assignment_enumerate


def test_zero_cost_gives_identity():
    sigma = solve_assignment(np.zeros((4, 4)))
    assert np.array_equal(sigma, np.arange(4))


def test_unique_minima_recovered():
    cost = np.full((3, 3), 10.0)
    cost[2, 0] = 0.0
    cost[0, 1] = 0.0
    cost[1, 2] = 0.0
    sigma = solve_assignment(cost)
    assert np.array_equal(sigma, [2, 0, 1])


def test_five_by_five_matches_enumeration():
    rng = np.random.default_rng(17)
    cost = rng.random((5, 5))
    sigma = solve_assignment(cost)
    expected, total = assignment_enumerate(cost)
    assert np.array_equal(sigma, expected)
    assert cost[sigma, np.arange(5)].sum() == pytest.approx(total, abs=1e-12)


def test_tie_breaking_is_lexicographic():
    # both the identity and the swap are optimal; identity is smaller
    cost = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert np.array_equal(solve_assignment(cost), [0, 1])


@given(st.integers(0, 100_000))
@settings(max_examples=150, deadline=None)
def test_random_instances_match_enumeration(case_seed):
    rng = np.random.default_rng(case_seed)
    r = int(rng.integers(2, 6))
    cost = rng.random((r, r))
    if rng.random() < 0.4:
        cost = np.round(cost, 1)  # deliberately create ties
    sigma = solve_assignment(cost)
    expected, total = assignment_enumerate(cost)
    assert np.array_equal(sigma, expected)
    assert cost[sigma, np.arange(r)].sum() == pytest.approx(total, abs=1e-9)


def test_rectangular_matching_picks_distinct_columns():
    rng = np.random.default_rng(23)
    cost = rng.random((3, 7))
    row_to_col = min_cost_matching(cost)
    assert row_to_col.shape == (3,)
    assert np.unique(row_to_col).size == 3
    assert matching_total(cost) == pytest.approx(
        cost[np.arange(3), row_to_col].sum(), abs=1e-12
    )


def test_rectangular_matching_is_optimal():
    import itertools

    rng = np.random.default_rng(29)
    cost = rng.random((3, 5))
    best = min(
        sum(cost[i, p[i]] for i in range(3))
        for p in itertools.permutations(range(5), 3)
    )
    assert matching_total(cost) == pytest.approx(best, abs=1e-12)


def test_matching_rejects_too_few_columns():
    from conered.errors import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        min_cost_matching(np.zeros((3, 2)))

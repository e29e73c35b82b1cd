import math

import pytest

from xshuffle.errors import CapExceeded, QueryError
from xshuffle.oracle import (CountQuery, Kind, Mode, connected_counts_oracle, count_all,
                             counts_to_json, eval_oracle, fixed_point_dist_oracle, labeled_splits)
from xshuffle.perm import Permutation, parse_cycles


def test_tiny_tables():
    assert count_all(1) == {Permutation.identity(1): 1}
    assert count_all(2) == {Permutation.identity(2): 2, Permutation((2, 1)): 2}
    assert count_all(4)[Permutation.identity(4)] == 10


@pytest.mark.parametrize("n", range(1, 7))
def test_totals(n):
    assert sum(count_all(n).values()) == n ** n
    assert sum(count_all(n, Mode.PERMUTATION).values()) == math.factorial(n)


def test_thread_count_does_not_change_results():
    assert count_all(5, threads=1) == count_all(5, threads=4)
    q = CountQuery(Kind.NBAR, ((3, 1, 2),), (), 2)
    assert eval_oracle(q, threads=1) == eval_oracle(q, threads=3)


def test_component_queries():
    assert eval_oracle(CountQuery((Kind.N_UNI), (), (1, 2))) == 1
    assert eval_oracle(CountQuery.of(Kind.N_TREE, parse_cycles("(3 2 1)"))) == 5
    assert eval_oracle(CountQuery(Kind.N_UNI_UPPER, ((1,), (2,)))) == 0
    assert eval_oracle(CountQuery(Kind.N_UNI_UPPER, ((2,), (1,)))) == 1
    assert eval_oracle(CountQuery(Kind.N_UNI_UPPER, ((1, 2), (3, 4)))) == 0


def test_tree_rooted_at_zero():
    assert eval_oracle(CountQuery.prime(Kind.N_PRIME, (1,))) == 1
    assert eval_oracle(CountQuery.prime(Kind.N_DOUBLEPRIME, (1,))) == 1
    assert eval_oracle(CountQuery.prime(Kind.N_PRIME_BETAPLUS_GT, (1,), 1)) == 0
    assert eval_oracle(CountQuery.prime(Kind.N_PRIME_BETAMINUS_LT, (1,), 2)) == 1


def test_query_validation():
    with pytest.raises(QueryError):
        CountQuery(Kind.N, ((1, 2), (2, 3)))
    with pytest.raises(QueryError):
        CountQuery(Kind.N_PRIME, ((1, 2),))
    with pytest.raises(QueryError):
        CountQuery(Kind.N_UNI_UPPER, ((1, 2),))
    with pytest.raises(QueryError):
        CountQuery(Kind.NBAR, ((1, 2),), (), 0)
    with pytest.raises(QueryError):
        CountQuery(Kind.N_ROOTED_AT, ((1, 2),), (), 5)


def test_caps():
    with pytest.raises(CapExceeded):
        count_all(8)
    with pytest.raises(CapExceeded):
        eval_oracle(CountQuery.of(Kind.N, Permutation.identity(8)))
    with pytest.raises(CapExceeded):
        count_all(4, cap=3)


def test_fixed_point_distribution():
    assert fixed_point_dist_oracle(1) == [0, 1]
    assert fixed_point_dist_oracle(2) == [0.5, 0, 0.5]


def test_connected_counts():
    assert connected_counts_oracle(1) == {1: 1}
    assert connected_counts_oracle(2)[2] == 1
    for n in range(3, 8):
        assert connected_counts_oracle(n)[1] == 2 * (n - 1) ** (n - 1)
        assert connected_counts_oracle(n, Mode.PERMUTATION)[1] == 2


def test_labeled_splits_count():
    # m rotations times C(m-1, k-1) compositions
    assert len(list(labeled_splits((1, 2, 3, 4), 2))) == 4 * 3
    assert sorted(labeled_splits((1, 2), 1)) == [((1, 2),), ((2, 1),)]


def test_json_export():
    rows = counts_to_json(count_all(2))
    assert rows == [{"permutation": "()", "count": "2"}, {"permutation": "(2 1)", "count": "2"}]

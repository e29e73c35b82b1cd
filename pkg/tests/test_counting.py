import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from xshuffle import counting as ct
from xshuffle.errors import CapExceeded
from xshuffle.oracle import CountQuery, Kind, count_all, eval_oracle
from xshuffle.perm import Permutation, flip, parse_cycles
from xshuffle import verify


def test_closed_forms():
    assert [ct.involutions(n) for n in range(6)] == [1, 1, 2, 4, 10, 26]
    assert ct.catalan(3) == 5 and ct.catalan(4) == 14
    assert [ct.g_closed(*mp) for mp in [(1, 1), (2, 1), (2, 2), (1, 3), (3, 2)]] == [1, 3, 11, 9, 37]
    assert all(ct.g_closed(m, p) == ct.g_closed(p, m) for m in range(1, 12) for p in range(1, 12))


def test_tree_counts():
    assert ct.n_tree_structured((1,)) == 1
    assert ct.n_tree_structured((3, 2, 1)) == 5
    assert ct.n_tree_structured((1, 2, 3)) == 4
    assert ct.n_tree_structured((4, 3, 2, 1)) == 14
    assert ct.n_prime_table((1,)) == {(1, 1): 1}


def test_worked_examples():
    assert ct.n_structured(parse_cycles("(4 3)(2 1)")) == 15
    assert ct.n_structured(Permutation.identity(5)) == 26
    assert ct.nuni_structured((2,), (1,)) == 1
    assert ct.nuni_upper_structured((1, 2), (3, 4)) == 0


def test_structured_cap():
    with pytest.raises(CapExceeded):
        ct.n_tree_structured(tuple(range(9, 0, -1)))
    assert ct.n_tree_structured(tuple(range(9, 0, -1)), cap=9) == ct.catalan(9)


@pytest.mark.parametrize("n", range(1, 6))
def test_full_sweep_against_oracle(n):
    counts = count_all(n)
    for image in itertools.permutations(range(1, n + 1)):
        p = Permutation(image)
        assert ct.n_structured(p) == counts.get(p, 0), p


def test_random_degree_seven_against_oracle():
    counts = count_all(7)
    rng = random.Random(7)
    for _ in range(500):
        image = list(range(1, 8))
        rng.shuffle(image)
        p = Permutation(tuple(image))
        assert ct.n_structured(p) == counts.get(p, 0), p


@settings(max_examples=40, deadline=None)
@given(st.permutations(list(range(1, 9))))
def test_flip_invariance_degree_eight(image):
    p = Permutation(tuple(image))
    assert ct.n_structured(p) == ct.n_structured(flip(p))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.permutations(list(range(1, n + 1)))), st.integers(1, 5))
def test_unicyclic_formula_on_random_splits(seq, cut):
    cut = min(cut, len(seq) - 1)
    a, b = tuple(seq[:cut]), tuple(seq[cut:])
    for up, low in ((a, b), (b, a)):
        assert ct.nuni_upper_structured(up, low, check=True) == eval_oracle(CountQuery(Kind.N_UNI_UPPER, (up, low)))


def test_separated_unicycles():
    # elementwise-below upper cycle contributes nothing
    for a, b in [((1,), (2,)), ((2, 1), (4, 3)), ((1, 3, 2), (5, 4))]:
        assert ct.nuni_upper_structured(a, b) == 0


def test_split_identities():
    assert verify.check_split_identities(5) == (True, "")


def test_split_sum_maxima():
    assert verify.check_split_maxima(5) == (True, "")


def test_prime_tables_against_oracle():
    assert verify.check_prime_tables(4) == (True, "")


def test_involution_growth():
    assert verify.check_involution_bounds() == (True, "")

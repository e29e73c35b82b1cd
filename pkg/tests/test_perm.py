import pytest
from hypothesis import given, strategies as st

from xshuffle.errors import ParseError
from xshuffle.perm import (CycleSeq, PartitionClass, Permutation, apply_sigma, concat,
                           cycle_decomposition, flip, format_cycles, parse_cycles,
                           partitions, reverse, sigma)

perms = st.integers(0, 8).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(
    lambda xs: Permutation(tuple(xs)))


def test_parse_pads_fixed_points():
    assert parse_cycles("(2 1)", 4).image == (2, 1, 3, 4)


def test_parse_two_three_cycles():
    assert parse_cycles("(1 3 2)(4 5 6)", 6).image == (3, 1, 2, 5, 6, 4)


@pytest.mark.parametrize("text", ["(1 1)", "(1 2)(2 3)", "(1 2", "1 2)", "(a b)", "((1 2))", "(0 1)"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_cycles(text)


def test_parse_rejects_element_beyond_degree():
    with pytest.raises(ParseError):
        parse_cycles("(5 1)", 4)


def test_empty_and_unit_products():
    assert parse_cycles("", 3).is_identity()
    assert parse_cycles("()", 2) == Permutation.identity(2)
    assert parse_cycles("").n == 0
    assert format_cycles(Permutation.identity(3)) == "()"


def test_cycle_decomposition_canonical_form():
    cycles, cls = cycle_decomposition(Permutation((3, 1, 2, 5, 6, 4)))
    assert [c.elements for c in cycles] == [(6, 4, 5), (3, 2, 1)]
    assert cls == PartitionClass((3, 3))
    cycles, cls = cycle_decomposition(Permutation((2, 1, 3)))
    assert [c.elements for c in cycles] == [(3,), (2, 1)]
    assert cls.lengths == (2, 1)
    assert cycle_decomposition(Permutation.identity(3))[1].lengths == (1, 1, 1)


def test_concat_and_identity_of_concat():
    t = Permutation((2, 1))
    assert concat(t, t).image == (2, 1, 4, 3)
    assert concat(Permutation(()), t) == t
    assert concat(t, Permutation.identity(1)).image == (2, 1, 3)


def test_flip_examples():
    assert flip(Permutation.identity(4)).is_identity()
    assert flip(Permutation((2, 1))) == Permutation((2, 1))
    left = parse_cycles("(3 2 1)")
    assert flip(left) == left


def test_sigma_and_sequence_operators():
    assert sigma(3).image == (3, 2, 1)
    assert reverse(CycleSeq((5, 2, 7))).elements == (7, 2, 5)
    assert apply_sigma(CycleSeq((1, 3)), 4).elements == (4, 2)
    with pytest.raises(ValueError):
        apply_sigma(CycleSeq((5,)), 4)


def _partition_count(n: int) -> int:
    # Euler's pentagonal recurrence, independent of the generator
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if g > m:
                    break
                total += (-1) ** (k + 1) * p[m - g]
            if k * (3 * k - 1) // 2 > m:
                break
            k += 1
        p[m] = total
    return p[n]


def test_partitions_small_and_order():
    assert [c.lengths for c in partitions(3)] == [(3,), (2, 1), (1, 1, 1)]
    assert len(partitions(4)) == 5


@pytest.mark.parametrize("n", [0, 1, 7, 15, 28])
def test_partition_counts_match_pentagonal_recurrence(n):
    assert len(partitions(n)) == _partition_count(n)
    assert len(partitions(28)) == 3718 if n == 28 else True


@given(perms)
def test_format_parse_round_trip(p):
    assert parse_cycles(format_cycles(p), p.n) == p
    assert parse_cycles(format_cycles(p, fixed_points=True), p.n) == p


@given(perms)
def test_flip_is_an_involution(p):
    assert flip(flip(p)) == p
    assert flip(p).cycle_type() == p.cycle_type()


@given(perms, perms)
def test_composition_and_inverse(p, q):
    if p.n == q.n:
        assert (p * q).inverse() == q.inverse() * p.inverse()
    assert (p * p.inverse()).is_identity()


@given(perms)
def test_cycles_rebuild_permutation(p):
    cycles, cls = cycle_decomposition(p)
    assert Permutation.from_cycles([c.elements for c in cycles], p.n) == p
    assert cls.n == p.n
    assert all(c.elements[0] == max(c.elements) for c in cycles)
    assert [c.elements[0] for c in cycles] == sorted((c.elements[0] for c in cycles), reverse=True)

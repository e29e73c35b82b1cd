import csv
import io

import pytest

from xshuffle import counting as ct
from xshuffle import extremal as ex
from xshuffle.errors import CapExceeded
from xshuffle.perm import PartitionClass, format_cycles, partitions
from xshuffle.verify import check_class_max, expected_winners


def test_constructors():
    assert format_cycles(ex.cycle_left(3)) == "(3 2 1)"
    assert format_cycles(ex.double_cycle_left(4, 2)) == "(4 3)(2 1)"
    assert format_cycles(ex.double_cycle_left(5, 2)) == "(5 4 3)(2 1)"
    assert format_cycles(ex.double_cycle_left(5, 3)) == "(5 4)(3 2 1)"
    with pytest.raises(ValueError):
        ex.double_cycle_left(6, 2)


def test_class_values():
    assert ex.class_max(PartitionClass((2, 2))).max_value == 15
    assert ex.class_max(PartitionClass((3, 2))).max_value == 47
    assert ex.class_max(PartitionClass((1,) * 40)).max_value == ct.involutions(40)
    r = ex.class_max(PartitionClass((3, 2, 2)))
    assert format_cycles(r.canonical_maximizer) == "(7 6 5)(4 3)(2 1)"
    assert r.maximizer_count == 3 == len(r.maximizers())


def test_single_cycle_class_is_catalan():
    for n in range(1, 30):
        r = ex.class_max(PartitionClass((n,)))
        assert r.max_value == ct.catalan(n)
        assert r.canonical_maximizer == ex.cycle_left(n)


@pytest.mark.parametrize("n", range(1, 11))
def test_three_evaluations_agree(n):
    for cls in partitions(n):
        v = ex.class_max(cls).max_value
        assert v == ex.class_max_by_involutions(cls) == ex.class_max_by_profiles(cls)


def test_canonical_maximizers_match_structured_engine():
    for n in range(1, 8):
        for cls in partitions(n):
            r = ex.class_max(cls)
            assert all(ct.n_structured(p, cap=9) == r.max_value for p in r.maximizers())


def test_class_maxima_against_oracle():
    assert check_class_max(12) == (True, "")


def test_most_likely_small_cases():
    assert {format_cycles(p) for p in ex.most_likely_permutations(2)} == {"()", "(2 1)"}
    assert {format_cycles(p) for p in ex.most_likely_permutations(3)} == {"(3 2 1)", "(3 2)", "(2 1)"}
    assert ex.winners(3)[0].max_value == 5
    assert [format_cycles(p) for p in ex.most_likely_permutations(4)] == ["(4 3)(2 1)"]
    assert ex.winners(4)[0].max_value == 15
    assert ex.winners(17)[0].cls == PartitionClass((9, 8))
    assert ex.winners(18)[0].cls == PartitionClass((1,) * 18)


@pytest.mark.parametrize("n", range(1, 29))
def test_most_likely_winner_table(n):
    assert set(ex.most_likely_permutations(n)) == expected_winners(n)


def test_unicyclic_maximum():
    assert ex.w_max_unicyclic(2) == 1
    assert ex.w_max_unicyclic(4) == 11
    assert all(ex.w_max_unicyclic(n) <= 4 ** (n - 2) for n in range(2, 10))
    with pytest.raises(CapExceeded):
        ex.w_max_unicyclic(10)


def test_caps():
    with pytest.raises(CapExceeded):
        ex.most_likely(41)
    with pytest.raises(CapExceeded):
        ex.class_max(PartitionClass((41,)))


def test_csv_table_round_trip():
    rows = list(csv.DictReader(io.StringIO(ex.class_table_csv(5))))
    assert len(rows) == len(partitions(5))
    assert set(rows[0]) == {"n", "partition", "maxValue", "canonicalMaximizer", "isGlobalWinner"}
    winners = [r for r in rows if r["isGlobalWinner"] == "true"]
    assert [r["partition"] for r in winners] == ["3+2"] and winners[0]["maxValue"] == "47"
    assert winners[0]["canonicalMaximizer"] == "(5 4 3)(2 1)"

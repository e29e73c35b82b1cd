"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import itertools
import math
import time

import pytest

from xshuffle import counting as ct
from xshuffle import extremal as ex
from xshuffle import oracle
from xshuffle import verify as vf
from xshuffle.oracle import Mode, count_all
from xshuffle.perm import PartitionClass, Permutation
from xshuffle.series import limit_distribution


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}"
        if detail:
            line += f"  ({detail})"
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def _all(*checks):
    """Combine (ok, detail) pairs, keeping the first failure."""
    for ok, detail in checks:
        if not ok:
            return False, detail
    return True, ""


def test_criterion_1_oracle_structure_equivalence(report):
    oracle.clear_cache()
    ct.clear_caches()
    t0 = time.perf_counter()
    counts = count_all(6, threads=1)
    bad = [p for p in map(Permutation, itertools.permutations(range(1, 7)))
           if ct.n_structured(p) != counts.get(p, 0)]
    seconds = time.perf_counter() - t0
    ok = not bad and len(counts) <= 720 and seconds < 30
    assert report(1, "n_structured = oracle on all 720 permutations of 6", ok,
                  f"{seconds:.2f}s, {len(bad)} mismatches")


def test_criterion_2_identity_multiplicity(report):
    checks = [(ct.involutions(4) == 10 and ct.involutions(5) == 26, "Q4/Q5")]
    for n in range(1, 8):
        checks.append((count_all(n)[Permutation.identity(n)] == ct.involutions(n), f"oracle n={n}"))
    for n in range(1, 11):
        checks.append((ct.n_structured(Permutation.identity(n)) == ct.involutions(n), f"structured n={n}"))
    for n in range(1, 41):
        checks.append((ex.class_max(PartitionClass((1,) * n)).max_value == ct.involutions(n), f"class n={n}"))
    ok, detail = _all(*checks)
    assert report(2, "identity multiplicity is the involution count", ok, detail or "oracle n<=7, structured n<=10, class sum n<=40")


def test_criterion_3_most_likely_permutation(report):
    t0 = time.perf_counter()
    ok, detail = vf.check_most_likely(28)
    w4 = ex.winners(4)
    ok = ok and w4[0].max_value == 15 and ex.most_likely_permutations(4) == [ex.double_cycle_left(4, 2)]
    seconds = time.perf_counter() - t0
    assert report(3, "most likely permutation for 1 <= n <= 28", ok and seconds < 30,
                  detail or f"{seconds:.2f}s")


def test_criterion_4_unicyclic_formula(report):
    known = {(1, 1): 1, (2, 1): 3, (2, 2): 11, (1, 3): 9, (3, 2): 37}
    checks = [vf.check_unicyclic_formula(6)]
    checks.append((all(ct.g_closed(m, p) == v for (m, p), v in known.items()), "known G values"))
    ok, detail = _all(*checks)
    assert report(4, "unicyclic split formula and closed form", ok, detail)


def test_criterion_5_symmetry(report):
    ok, detail = _all(vf.check_block_swap_oracle(6), vf.check_block_flip_oracle(6), vf.check_concat_swap_bijection(6),
                      vf.check_symmetry_structured(samples=150, degree=8))
    assert report(5, "block swap, block flip and the concatenation bijection", ok, detail)


def test_criterion_6_bounds(report):
    ok, detail = _all(vf.check_tree_maxima(7), vf.check_unicyclic_bound(7),
                      vf.check_multiplicity_bound(6), vf.check_involution_bounds())
    assert report(6, "extremal bounds", ok, detail)


def test_criterion_7_fixed_points(report):
    ok, detail = _all(vf.check_fixed_point_oracle(7), vf.check_limits())
    e = math.e
    uni = limit_distribution(Mode.UNIFORM, 40).pk[0]
    perm = limit_distribution(Mode.PERMUTATION, 0).pk[0]
    ok = ok and abs(uni - math.exp(-(4 - 6 / e - e ** -2) / 2)) < 1e-6
    ok = ok and abs(perm - math.exp((7 - 4 * e) / 2)) < 1e-6
    assert report(7, "fixed-point distributions and limits", ok,
                  detail or f"p0={uni:.6f}, pbar0={perm:.6f}")


def test_criterion_8_series_identities(report):
    ok, detail = vf.check_series_identities(60)
    assert report(8, "series identities to order 60", ok, detail)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

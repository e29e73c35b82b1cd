"""Class-wise and global maxima of the multiplicity.

Within a cycle type the maximum is attained by the permutations built from
decreasing interval blocks, and its value is the involution sum with C_L for
single cycles and G(L, L') for pairs.  The sum only sees cycle lengths, so
it is evaluated over multisets of lengths instead of individual involutions.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod

from .counting import catalan, g_closed
from .errors import CapExceeded, InvariantFailure
from .perm import PartitionClass, Permutation, format_cycles, partitions

__all__ = [
    "ClassMaxReport",
    "block_permutation",
    "class_max",
    "class_table_csv",
    "cycle_left",
    "double_cycle_left",
    "class_max_by_involutions",
    "class_max_by_profiles",
    "identity",
    "most_likely",
    "most_likely_permutations",
    "w_max_unicyclic",
    "winners",
]

CLASS_CAP = 40


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def cycle_left(n: int) -> Permutation:
    return Permutation.from_cycles([tuple(range(n, 0, -1))], n)


def double_cycle_left(n: int, m: int) -> Permutation:
    """(n ... m+1)(m ... 1) with m = floor(n/2) or ceil(n/2)."""
    if m not in (n // 2, (n + 1) // 2):
        raise ValueError(f"m={m} is neither floor nor ceil of {n}/2")
    return Permutation.from_cycles([tuple(range(n, m, -1)), tuple(range(m, 0, -1))], n)


def block_permutation(lengths) -> Permutation:
    """Decreasing interval cycles, the first length occupying the top block."""
    n = sum(lengths)
    top = n
    cycles = []
    for length in lengths:
        cycles.append(tuple(range(top, top - length, -1)))
        top -= length
    return Permutation.from_cycles(cycles, n)


def _arrangements(lengths) -> list[tuple[int, ...]]:
    """Distinct orderings of a multiset, lexicographically descending."""
    counts = {x: lengths.count(x) for x in set(lengths)}
    keys = sorted(counts, reverse=True)
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int]):
        if len(prefix) == len(lengths):
            out.append(tuple(prefix))
            return
        for x in keys:
            if counts[x]:
                counts[x] -= 1
                prefix.append(x)
                rec(prefix)
                prefix.pop()
                counts[x] += 1

    rec([])
    return out


@dataclass(frozen=True)
class ClassMaxReport:
    cls: PartitionClass
    max_value: int
    canonical_maximizer: Permutation
    maximizer_count: int

    def maximizers(self) -> list[Permutation]:
        """Every maximizing permutation: one per distinct order of the blocks."""
        return [block_permutation(o) for o in _arrangements(self.cls.lengths)]


def _profile_sum(sizes: tuple[int, ...], mults: tuple[int, ...]) -> int:
    """Involution sum grouped by size: only the multiset of unpaired sizes matters.

    The first remaining cycle is either fixed or paired with one of the others,
    and all partners of the same size contribute the same term.
    """

    @lru_cache(maxsize=None)
    def rec(counts: tuple[int, ...]) -> int:
        try:
            i = next(k for k, c in enumerate(counts) if c)
        except StopIteration:
            return 1
        rest = list(counts)
        rest[i] -= 1
        total = catalan(sizes[i]) * rec(tuple(rest))
        for j, c in enumerate(rest):
            if c:
                rest[j] -= 1
                total += c * g_closed(sizes[i], sizes[j]) * rec(tuple(rest))
                rest[j] += 1
        return total

    return rec(mults)


def class_max(cls: PartitionClass, cap: int = CLASS_CAP) -> ClassMaxReport:
    if cls.n > cap:
        raise CapExceeded(f"class of {cls.n} exceeds cap {cap}")
    sizes = sorted(set(cls.lengths), reverse=True)
    mults = [cls.lengths.count(s) for s in sizes]
    value = _profile_sum(tuple(sizes), tuple(mults))
    count = factorial(cls.q) // prod(factorial(m) for m in mults)
    return ClassMaxReport(cls, value, block_permutation(cls.lengths), count)


def class_max_by_involutions(cls: PartitionClass) -> int:
    """The same maximum summed over every involution of the cycle indices."""
    lengths = cls.lengths

    def rec(remaining: tuple[int, ...]) -> int:
        if not remaining:
            return 1
        i, rest = remaining[0], remaining[1:]
        total = catalan(lengths[i]) * rec(rest)
        for pos, j in enumerate(rest):
            total += g_closed(lengths[i], lengths[j]) * rec(rest[:pos] + rest[pos + 1:])
        return total

    return rec(tuple(range(len(lengths))))


def class_max_by_profiles(cls: PartitionClass) -> int:
    """The same maximum by pairing profiles.

    A profile fixes, for distinct sizes s_i with multiplicities m_i, the
    number k_ii of pairs inside size i, k_ij of pairs across sizes i < j and
    f_i of fixed cycles.  It stands for
    prod m_i! / (prod f_i! 2^k_ii k_ii! prod_{i<j} k_ij!) involutions.
    """
    sizes = sorted(set(cls.lengths), reverse=True)
    mults = [cls.lengths.count(s) for s in sizes]
    r = len(sizes)
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    numer = prod(factorial(m) for m in mults)
    total = 0
    for cross in itertools.product(*(range(min(mults[i], mults[j]) + 1) for i, j in pairs)):
        left = list(mults)
        for (i, j), k in zip(pairs, cross):
            left[i] -= k
            left[j] -= k
        if min(left, default=0) < 0:
            continue
        base = prod(g_closed(sizes[i], sizes[j]) ** k for (i, j), k in zip(pairs, cross))
        base_denom = prod(factorial(k) for k in cross)
        for inner in itertools.product(*(range(left[i] // 2 + 1) for i in range(r))):
            value, denom = base, base_denom
            for i, kii in enumerate(inner):
                fi = left[i] - 2 * kii
                value *= catalan(sizes[i]) ** fi * g_closed(sizes[i], sizes[i]) ** kii
                denom *= factorial(fi) * 2 ** kii * factorial(kii)
            weight, rem = divmod(numer, denom)
            if rem:
                raise InvariantFailure(f"profile weight {numer}/{denom} is not integral")
            total += weight * value
    return total


def most_likely(n: int, cap: int = CLASS_CAP) -> list[ClassMaxReport]:
    """One report per partition of n, largest maximum first (stable on ties)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds cap {cap}")
    reports = [class_max(c, cap) for c in partitions(n)]
    return sorted(reports, key=lambda r: -r.max_value)


def winners(n: int, cap: int = CLASS_CAP) -> list[ClassMaxReport]:
    reports = most_likely(n, cap)
    best = reports[0].max_value
    return [r for r in reports if r.max_value == best]


def most_likely_permutations(n: int, cap: int = CLASS_CAP) -> list[Permutation]:
    """All permutations of maximum multiplicity, ties included."""
    found = {p for r in winners(n, cap) for p in r.maximizers()}
    return sorted(found, key=lambda p: p.image)


def w_max_unicyclic(n: int, cap: int = 9) -> int:
    """Maximum unicyclic multiplicity over all permutations of n elements."""
    if n < 2:
        raise ValueError("a unicycle needs at least two vertices")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds cap {cap}")
    best = max(g_closed(m, n - m) for m in range(1, n))
    if best > 4 ** (n - 2):
        raise InvariantFailure(f"W_{n} = {best} exceeds 4^{n - 2}")
    return best


def class_table_csv(n: int, cap: int = CLASS_CAP) -> str:
    reports = most_likely(n, cap)
    best = reports[0].max_value
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["n", "partition", "maxValue", "canonicalMaximizer", "isGlobalWinner"])
    for r in reports:
        out.writerow([n, str(r.cls), str(r.max_value), format_cycles(r.canonical_maximizer),
                      "true" if r.max_value == best else "false"])
    return buf.getvalue()

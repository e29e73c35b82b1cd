"""Structured multiplicities: closed forms, rooted-tree recursions, and the
unicyclic split formula, combined through the involution sum over cycles.

Nothing here enumerates words.  Rooted tree counts come from a recursion that
detaches the out-edge of an extreme vertex: if the smallest vertex s is not
the root, its transposition acts first, so ``pi = rho (s c)`` where rho is the
product of two independent tree components; if the root is the smallest
vertex, the largest vertex M acts last and ``pi = (M c) rho``.  Every count is
memoized on the order pattern of its argument.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import CapExceeded, InvariantFailure
from .perm import CycleSeq, Permutation

__all__ = [
    "catalan",
    "clear_caches",
    "g_closed",
    "involutions",
    "n_doubleprime",
    "n_prime",
    "n_prime_beta_minus_lt",
    "n_prime_beta_plus_gt",
    "n_prime_table",
    "n_rooted",
    "n_structured",
    "n_tree_structured",
    "nbar",
    "nbar_prime",
    "nuni_structured",
    "nuni_upper_structured",
]

DEFAULT_TREE_CAP = 8

_Q = [1, 1]


def involutions(n: int) -> int:
    """Q_n, the number of involutions of an n-set."""
    if n < 0:
        raise ValueError("negative n")
    while len(_Q) <= n:
        k = len(_Q)
        _Q.append(_Q[k - 1] + (k - 1) * _Q[k - 2])
    return _Q[n]


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("negative n")
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def g_closed(m: int, p: int) -> int:
    """Largest unicyclic multiplicity of an m-cycle times a p-cycle."""
    if m < 1 or p < 1:
        raise ValueError("cycle lengths must be positive")
    s = m + p
    num = comb(2 * m, m) * comb(2 * p, p) * (s + 4 * m * p) - s * comb(2 * s, s)
    den = 2 * s * (s + 1)
    q, r = divmod(num, den)
    if r:
        raise InvariantFailure(f"G({m},{p}): {num} not divisible by {den}")
    return q


def _check(size: int, cap: int | None, what: str):
    cap = DEFAULT_TREE_CAP if cap is None else cap
    if size > cap:
        raise CapExceeded(f"{what}: size {size} exceeds tree cap {cap}")


# --------------------------------------------------------------------------
# order patterns


def _cycles_of(succ: dict[int, int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for start in succ:
        if start in seen:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = succ[x]
        out.append(tuple(cyc))
    return out


def _pattern(cycle: Sequence[int]) -> tuple[tuple[int, ...], list[int]]:
    """Rank-relabelled cycle rotated to start at its maximum, plus the labels."""
    labels = sorted(cycle)
    rank = {x: r for r, x in enumerate(labels)}
    ranks = [rank[x] for x in cycle]
    i = ranks.index(len(ranks) - 1)
    return tuple(ranks[i:] + ranks[:i]), labels


def _split(cyc: tuple[int, ...], pivot: int, c: int, pivot_first: bool):
    """Cycles of pi (pivot c) (pivot acts first) or (pivot c) pi."""
    m = len(cyc)
    succ = {cyc[i]: cyc[(i + 1) % m] for i in range(m)}

    def tau(x):
        return c if x == pivot else pivot if x == c else x

    if pivot_first:
        new = {x: succ[tau(x)] for x in cyc}
    else:
        new = {x: tau(succ[x]) for x in cyc}
    parts = _cycles_of(new)
    assert len(parts) == 2
    cp = next(p for p in parts if pivot in p)
    cc = next(p for p in parts if c in p)
    return cp, cc


@lru_cache(maxsize=None)
def _rooted(cyc: tuple[int, ...], root: int) -> int:
    m = len(cyc)
    if m == 1:
        return 1
    pivot, first = (0, True) if root != 0 else (m - 1, False)
    total = 0
    for c in range(m):
        if c == pivot:
            continue
        cp, cc = _split(cyc, pivot, c, first)
        if root not in cc:
            continue
        total += _rooted_labels(cp, pivot) * _rooted_labels(cc, root)
    return total


def _rooted_labels(cycle: Sequence[int], root: int) -> int:
    pat, labels = _pattern(cycle)
    return _rooted(pat, labels.index(root))


@lru_cache(maxsize=None)
def _beta_table(cyc: tuple[int, ...]) -> dict[tuple[int, int], int]:
    """Trees rooted at rank 0 by (largest, smallest) child of the root, in ranks.

    -1 marks a root with no children.
    """
    m = len(cyc)
    if m == 1:
        return {(-1, -1): 1}
    top = m - 1
    out: Counter = Counter()
    for c in range(top):
        cp, cc = _split(cyc, top, c, False)
        if 0 not in cc:
            continue
        weight = _rooted_labels(cp, top)
        pat, labels = _pattern(cc)
        for (bp, bm), v in _beta_table(pat).items():
            bp = labels[bp] if bp >= 0 else -1
            bm = labels[bm] if bm >= 0 else -1
            if c == 0:
                # the top vertex now hangs directly off the root
                bp, bm = top, (bm if bm >= 0 else top)
            out[bp, bm] += weight * v
    return dict(out)


# --------------------------------------------------------------------------
# rooted counts on labelled supports


def _elements(seq) -> tuple[int, ...]:
    return tuple(seq.elements) if isinstance(seq, CycleSeq) else tuple(seq)


def n_rooted(cycle, root: int, cap: int | None = None) -> int:
    """Tree representations of the cycle with the loop at ``root``."""
    cycle = _elements(cycle)
    _check(len(cycle), cap, "rooted tree count")
    if root not in cycle:
        raise ValueError(f"root {root} not in {cycle}")
    return _rooted_labels(cycle, root)


def n_tree_structured(mu, cap: int | None = None) -> int:
    mu = _elements(mu)
    _check(len(mu), cap, "tree multiplicity")
    pat, _ = _pattern(mu)
    return sum(_rooted(pat, r) for r in range(len(mu)))


def n_prime_table(d, cap: int | None = None) -> dict[tuple[int, int], int]:
    """Trees rooted at 0 representing (D 0), keyed by (beta_plus, beta_minus)."""
    d = _elements(d)
    _check(len(d), cap, "rooted-at-0 table")
    if 0 in d or min(d) < 0:
        raise ValueError("D must consist of positive integers")
    return _prime_table_cached(d)


@lru_cache(maxsize=None)
def _prime_table_cached(d: tuple[int, ...]) -> dict[tuple[int, int], int]:
    pat, labels = _pattern(d + (0,))
    return {(labels[bp], labels[bm]): v for (bp, bm), v in _beta_table(pat).items()}


def n_prime(d, cap: int | None = None) -> int:
    return sum(n_prime_table(d, cap).values())


def n_prime_beta_plus_gt(d, x: int, cap: int | None = None) -> int:
    return sum(v for (bp, _), v in n_prime_table(d, cap).items() if bp > x)


def n_prime_beta_minus_lt(d, x: int, cap: int | None = None) -> int:
    return sum(v for (_, bm), v in n_prime_table(d, cap).items() if bm < x)


def n_doubleprime(d, cap: int | None = None) -> int:
    """Trees rooted at 0 for (D 0) containing the edge min(D) -> 0."""
    d = _elements(d)
    smallest = min(d)
    return sum(v for (_, bm), v in n_prime_table(d, cap).items() if bm == smallest)


# --------------------------------------------------------------------------
# cyclic splits


def _cut_blocks(seq: tuple[int, ...], k: int):
    """Each way of cutting the cyclic sequence into k blocks, blocks listed in
    cyclic order starting with the block that contains seq[0]."""
    m = len(seq)
    for starts in itertools.combinations(range(m), k):
        if starts[0] != 0:
            # the last block wraps round through position 0
            starts = (starts[-1] - m,) + starts[:-1]
        bounds = starts + (starts[0] + m,)
        yield [_cyclic_slice(seq, bounds[i], bounds[i + 1]) for i in range(k)]


def _cyclic_slice(seq: tuple[int, ...], lo: int, hi: int) -> tuple[int, ...]:
    m = len(seq)
    return tuple(seq[i % m] for i in range(lo, hi))


def nbar(d, k: int, cap: int | None = None) -> int:
    """Sum over (D_1 ... D_k) = (D) of the product of N'((D_i 0))."""
    d = _elements(d)
    if k < 1 or k > len(d):
        return 0
    total = 0
    for blocks in _cut_blocks(d, k):
        term = 1
        for b in blocks:
            term *= n_prime(b, cap)
        total += term
    # each cut set carries k labellings with the same product
    return k * total


def nbar_prime(d, k: int, cap: int | None = None) -> int:
    """As ``nbar`` but the block holding min(D) must use the edge min(D) -> 0."""
    d = _elements(d)
    if k < 1 or k > len(d):
        return 0
    smallest = min(d)
    total = 0
    for blocks in _cut_blocks(d, k):
        term = 1
        for b in blocks:
            term *= n_doubleprime(b, cap) if smallest in b else n_prime(b, cap)
        total += term
    return k * total


# --------------------------------------------------------------------------
# unicyclic multiplicity


def _nuni_upper_split_sum(a: tuple[int, ...], b: tuple[int, ...], cap: int | None, check: bool = False) -> int:
    """The split formula summed with A_1 anchored on the block holding a[0].

    With ``check`` the unanchored sum is evaluated too and must equal k times
    the anchored one for every k.
    """
    total = 0
    for k in range(1, min(len(a), len(b)) + 1):
        a_cuts = list(_cut_blocks(a, k))
        b_cuts = list(_cut_blocks(b, k))
        anchored = 0
        for ys in a_cuts:
            # ys[0] = A_1, then A_k, A_{k-1}, ..., A_2 in cyclic order
            a_lab = [ys[(k - i + 1) % k] for i in range(1, k + 1)]
            anchored += _labelled_b_sum(a_lab, b_cuts, k, cap)
        if check:
            full = 0
            for ys in a_cuts:
                for shift in range(k):
                    a_lab = [ys[(k - i + 1 + shift) % k] for i in range(1, k + 1)]
                    full += _labelled_b_sum(a_lab, b_cuts, k, cap)
            if full != k * anchored:
                raise InvariantFailure(f"k={k}: unanchored sum {full} != {k} * {anchored}")
        total += anchored
    return total


def _labelled_b_sum(a_lab, b_cuts, k, cap) -> int:
    out = 0
    for zs in b_cuts:
        for j0 in range(k):
            b_lab = [zs[(j0 + i) % k] for i in range(k)]
            term = 1
            for i in range(k):
                term *= n_prime_beta_plus_gt(a_lab[i], b_lab[i][0], cap)
                if not term:
                    break
                term *= n_prime_beta_minus_lt(b_lab[i], a_lab[(i + 1) % k][-1], cap)
                if not term:
                    break
            out += term
    return out


def _separated_sum(low: tuple[int, ...], high: tuple[int, ...], cap: int | None) -> int:
    """Unicyclic count of (low)(high) when every element of low is smaller."""
    total = 0
    for k in range(1, min(len(low), len(high)) + 1):
        prod = nbar(low, k, cap) * nbar(high, k, cap)
        q, r = divmod(prod, k)
        if r:
            raise InvariantFailure(f"k={k}: {prod} not divisible by k")
        total += q
    return total


def nuni_upper_structured(a, b, cap: int | None = None, check: bool = False) -> int:
    """Unicyclic representations of (A)(B) in which (A) is the upper cycle."""
    a, b = _elements(a), _elements(b)
    if set(a) & set(b):
        raise ValueError("A and B overlap")
    _check(len(a) + len(b), cap, "unicyclic multiplicity")
    if max(a) < min(b):
        return 0
    if max(b) < min(a):
        return _separated_sum(b, a, cap)
    return _nuni_upper_split_sum(a, b, cap, check)


def nuni_structured(a, b, cap: int | None = None) -> int:
    return nuni_upper_structured(a, b, cap) + nuni_upper_structured(b, a, cap)


# --------------------------------------------------------------------------
# full multiplicity


def n_structured(p: Permutation, cap: int | None = None) -> int:
    """N(p) as a sum over involutions of the cycle index set.

    The involution recursion is exponential in the number of cycles; classes
    with many cycles are better served by ``extremal.class_max``.
    """
    cycles = [c.elements for c in p.cycles()]
    q = len(cycles)
    tree = [n_tree_structured(c, cap) for c in cycles]
    uni: dict[tuple[int, int], int] = {}

    def pair(i, j):
        if (i, j) not in uni:
            uni[i, j] = nuni_structured(cycles[i], cycles[j], cap)
        return uni[i, j]

    @lru_cache(maxsize=None)
    def rec(remaining: frozenset) -> int:
        if not remaining:
            return 1
        i = min(remaining)
        rest = remaining - {i}
        total = tree[i] * rec(rest)
        for j in rest:
            w = pair(i, j)
            if w:
                total += w * rec(rest - {j})
        return total

    return rec(frozenset(range(q)))


def clear_caches():
    """Forget memoized pattern counts (used for cold-start timings)."""
    for fn in (g_closed, _rooted, _beta_table, _prime_table_cached):
        fn.cache_clear()

"""Brute-force ground truth: tally every word, or every rooted tree.

Everything here is exact enumeration.  The word space is cut into chunks by
fixing a prefix of the word; each chunk is classified with numpy and the
partial tallies are merged by addition, so the chunk order (and the number of
worker threads) cannot change a result.

Tables are cached per ground-set size.  A query on an arbitrary support is
first relabelled order-preservingly onto 0..s-1, which is exactly the
invariance of every count under order-preserving conjugation.
"""

from __future__ import annotations

import enum
import itertools
import math
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, QueryError
from .perm import Permutation, format_cycles

__all__ = [
    "BigCount",
    "CountQuery",
    "Kind",
    "Mode",
    "connected_counts_oracle",
    "clear_cache",
    "count_all",
    "counts_to_json",
    "eval_oracle",
    "fixed_point_dist_oracle",
    "labeled_splits",
]

BigCount = int

UNIFORM_CAP = 7
PERMUTATION_CAP = 8
WORD_QUERY_CAP = 7
TREE_QUERY_CAP = 9

_CHUNK_ROWS = 1 << 18


class Mode(str, enum.Enum):
    UNIFORM = "uniform"
    PERMUTATION = "permutation"


class Kind(str, enum.Enum):
    N = "N"
    N_TREE = "N_TREE"
    N_UNI = "N_UNI"
    N_UNI_UPPER = "N_UNI_UPPER"
    N_ROOTED_AT = "N_ROOTED_AT"
    N_PRIME = "N_PRIME"
    N_PRIME_BETAPLUS_GT = "N_PRIME_BETAPLUS_GT"
    N_PRIME_BETAMINUS_LT = "N_PRIME_BETAMINUS_LT"
    N_DOUBLEPRIME = "N_DOUBLEPRIME"
    NBAR = "NBAR"
    NBARPRIME = "NBARPRIME"


_WORD_KINDS = {Kind.N, Kind.N_TREE, Kind.N_UNI, Kind.N_UNI_UPPER}
_PRIME_KINDS = {
    Kind.N_PRIME,
    Kind.N_PRIME_BETAPLUS_GT,
    Kind.N_PRIME_BETAMINUS_LT,
    Kind.N_DOUBLEPRIME,
}
_SPLIT_KINDS = {Kind.NBAR, Kind.NBARPRIME}


# --------------------------------------------------------------------------
# enumeration and vectorized classification


def _prefix_chunks(n: int, free: Sequence[int], fixed: dict[int, int]) -> Iterator[np.ndarray]:
    """All words on 0..n-1 with ``fixed`` positions pinned, chunked by prefix."""
    free = list(free)
    tail = len(free)
    while tail > 0 and n ** tail > _CHUNK_ROWS:
        tail -= 1
    head, rest = free[: len(free) - tail], free[len(free) - tail:]
    if rest:
        grid = np.indices((n,) * len(rest), dtype=np.int64).reshape(len(rest), -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    for prefix in itertools.product(range(n), repeat=len(head)):
        block = np.empty((grid.shape[0], n), dtype=np.int64)
        for pos, val in fixed.items():
            block[:, pos] = val
        for pos, val in zip(head, prefix):
            block[:, pos] = val
        block[:, rest] = grid
        yield block


def _word_chunks(n: int, mode: Mode) -> Iterator[np.ndarray]:
    if mode is Mode.UNIFORM:
        yield from _prefix_chunks(n, range(n), {})
        return
    # permutation words, partitioned by their first entry
    if n == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    for first in range(n):
        others = [v for v in range(n) if v != first]
        perms = list(itertools.permutations(others))
        rows = np.array(perms, dtype=np.int64).reshape(len(perms), n - 1)
        yield np.hstack([np.full((rows.shape[0], 1), first, dtype=np.int64), rows])


def _induced_images(words: np.ndarray) -> np.ndarray:
    """Image tables (0-based) of (n a_n)...(1 a_1) for each row."""
    k, n = words.shape
    rows = np.arange(k)
    inv = np.tile(np.arange(n, dtype=np.int64), (k, 1))
    for j in range(n):
        a = words[:, j]
        tmp = inv[rows, a].copy()
        inv[rows, a] = inv[:, j]
        inv[:, j] = tmp
    return np.argsort(inv, axis=1)


def _codes(images: np.ndarray) -> np.ndarray:
    n = images.shape[1]
    weights = np.array([n ** i for i in range(n)], dtype=np.int64)
    return images @ weights


def code_of(image: Sequence[int]) -> int:
    n = len(image)
    return sum(v * n ** i for i, v in enumerate(image))


def _ring_data(words: np.ndarray):
    """Ring membership, component count and ring length per row."""
    k, n = words.shape
    ar = np.arange(n)
    power = words.copy()
    on_ring = power == ar
    ring_min = np.minimum(ar, power)
    for _ in range(n - 1):
        power = np.take_along_axis(words, power, axis=1)
        on_ring |= power == ar
        ring_min = np.minimum(ring_min, power)
    # ring_min[v] is the smallest vertex on v's forward orbit; for ring
    # vertices this is the smallest vertex of their ring.
    n_rings = (on_ring & (ring_min == ar)).sum(axis=1)
    ring_len = on_ring.sum(axis=1)
    return on_ring, n_rings, ring_len


def _merge(parts: Iterable[dict]) -> dict:
    total: Counter = Counter()
    for part in parts:
        for key, value in part.items():
            total[key] += value
    return dict(total)


def _tally(keys: np.ndarray) -> dict:
    if keys.size == 0:
        return {}
    if keys.ndim == 1:
        uniq, counts = np.unique(keys, return_counts=True)
        return {int(u): int(c) for u, c in zip(uniq, counts)}
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    return {tuple(int(x) for x in u): int(c) for u, c in zip(uniq, counts)}


def _run(fn, chunks: Iterable[np.ndarray], threads: int) -> list:
    if threads <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


@dataclass(frozen=True)
class WordTable:
    """Tallies over every word of one size and mode.

    ``total``: image code -> count.  ``tree``/``uni``: the same restricted to
    connected digraphs with a loop / a longer ring.  ``uni_upper``:
    (image code, upper-vertex bitmask) -> count for connected unicycles.
    ``fixed``: fixed-point count -> words.  ``connected``: fixed-point count ->
    connected words.  Upper vertices are kept as a bitmask so the
    upper-cycle filter does not presuppose which cycle they land in.
    """

    n: int
    mode: Mode
    total: dict
    tree: dict
    uni: dict
    uni_upper: dict
    fixed: dict
    connected: dict


def _classify_words(words: np.ndarray) -> dict:
    k, n = words.shape
    if n == 0:
        return {"total": {0: 1}, "tree": {}, "uni": {}, "uni_upper": {}, "fixed": {0: 1}, "connected": {}}
    images = _induced_images(words)
    codes = _codes(images)
    ar = np.arange(n)
    fixed = (images == ar).sum(axis=1)
    on_ring, n_rings, ring_len = _ring_data(words)
    connected = n_rings == 1
    tree = connected & (ring_len == 1)
    uni = connected & (ring_len >= 2)
    # a ring vertex v = a_u is upper when its ring predecessor u is smaller
    upper_hit = on_ring & (ar < words)
    upper_mask = np.where(upper_hit, np.left_shift(1, words), 0).sum(axis=1)
    return {
        "total": _tally(codes),
        "tree": _tally(codes[tree]),
        "uni": _tally(codes[uni]),
        "uni_upper": _tally(np.stack([codes[uni], upper_mask[uni]], axis=1)),
        "fixed": _tally(fixed),
        "connected": _tally(fixed[connected]),
    }


def _check_cap(n: int, cap: int, what: str):
    if n > cap:
        raise CapExceeded(f"{what}: size {n} exceeds cap {cap}")


_cache: dict = {}
_cache_lock = threading.Lock()


def _memo(key, build):
    # Concurrent callers may both build; the stored value is identical.
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    value = build()
    with _cache_lock:
        return _cache.setdefault(key, value)


def clear_cache():
    """Drop every memoized enumeration table."""
    with _cache_lock:
        _cache.clear()


def _word_table(n: int, mode: Mode, threads: int = 1) -> WordTable:
    def build():
        parts = _run(_classify_words, _word_chunks(n, mode), threads)
        fields = {name: _merge(p[name] for p in parts) for name in parts[0]}
        return WordTable(n, mode, **fields)

    return _memo(("words", n, mode), build)


def word_table(n: int, mode: Mode = Mode.UNIFORM, cap: int | None = None, threads: int = 1) -> WordTable:
    mode = Mode(mode)
    default = UNIFORM_CAP if mode is Mode.UNIFORM else PERMUTATION_CAP
    _check_cap(n, default if cap is None else cap, f"{mode.value} word enumeration")
    return _word_table(n, mode, threads)


def _classify_rooted(words: np.ndarray, root: int) -> dict:
    k, n = words.shape
    reach = words.copy()
    for _ in range(n):
        reach = np.take_along_axis(words, reach, axis=1)
    is_tree = (reach == root).all(axis=1)
    words = words[is_tree]
    images = _induced_images(words)
    codes = _codes(images)
    ar = np.arange(n)
    child = (words == root) & (ar != root)
    bplus = np.where(child, ar, -1).max(axis=1)
    bminus = np.where(child, ar, n).min(axis=1)
    bminus = np.where(bminus == n, -1, bminus)
    return _tally(np.stack([codes, bplus, bminus], axis=1))


def _rooted_table(s: int, root: int, threads: int = 1) -> dict:
    """(image code, beta_plus, beta_minus) -> number of trees rooted at ``root``.

    Vertices are 0..s-1; betas are the largest/smallest child of the root,
    -1 when the root has no children.
    """
    def build():
        free = [v for v in range(s) if v != root]
        chunks = _prefix_chunks(s, free, {root: root})
        return _merge(_run(lambda c: _classify_rooted(c, root), chunks, threads))

    return _memo(("rooted", s, root), build)


# --------------------------------------------------------------------------
# queries


@dataclass(frozen=True)
class CountQuery:
    """One multiplicity to be counted by enumeration.

    ``cycles`` is the target written as disjoint cycles on ``support``
    (support elements missing from every cycle are fixed points).  For
    ``N_UNI_UPPER`` the target is exactly two cycles, the first being the
    upper one.  The ``N_PRIME`` family needs 0 in the support and roots the
    tree at 0.  ``NBAR``/``NBARPRIME`` take one cyclic sequence D and refer to
    the blocks (D_i 0).  ``param`` is x for ``N_ROOTED_AT`` and the beta
    bounds, and k for the split kinds.
    """

    kind: Kind
    cycles: tuple[tuple[int, ...], ...]
    support: tuple[int, ...] = ()
    param: int | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        cycles = tuple(tuple(int(x) for x in c) for c in self.cycles)
        mentioned = [x for c in cycles for x in c]
        if len(set(mentioned)) != len(mentioned):
            raise QueryError(f"cycles overlap: {cycles}")
        support = tuple(sorted(set(self.support) | set(mentioned)))
        if any(x < 0 for x in support):
            raise QueryError("support must be nonnegative")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "support", support)
        if kind in _PRIME_KINDS and 0 not in support:
            raise QueryError(f"{kind.value} needs the dummy vertex 0 in the support")
        if kind is Kind.N_UNI_UPPER and (len(cycles) != 2 or len(mentioned) != len(support)):
            raise QueryError("N_UNI_UPPER takes exactly two cycles covering the support")
        if kind in _SPLIT_KINDS:
            if len(cycles) != 1 or 0 in support:
                raise QueryError(f"{kind.value} takes one sequence of positive integers")
            if self.param is None or not 1 <= self.param:
                raise QueryError(f"{kind.value} needs k >= 1")
        if kind is Kind.N_ROOTED_AT and self.param not in support:
            raise QueryError("root must lie in the support")
        if kind in (Kind.N_PRIME_BETAPLUS_GT, Kind.N_PRIME_BETAMINUS_LT) and self.param is None:
            raise QueryError(f"{kind.value} needs a bound x")

    @classmethod
    def of(cls, kind, perm: Permutation, param: int | None = None) -> CountQuery:
        cycles = tuple(c.elements for c in perm.cycles() if len(c) > 1)
        return cls(Kind(kind), cycles, tuple(range(1, perm.n + 1)), param)

    @classmethod
    def prime(cls, kind, d: Sequence[int], param: int | None = None) -> CountQuery:
        """Query on the cycle (D 0)."""
        return cls(Kind(kind), (tuple(d) + (0,),), (), param)

    def image_on_ranks(self) -> tuple[int, ...]:
        rank = {x: r for r, x in enumerate(self.support)}
        image = list(range(len(self.support)))
        for c in self.cycles:
            for i, x in enumerate(c):
                image[rank[x]] = rank[c[(i + 1) % len(c)]]
        return tuple(image)


def _word_query(q: CountQuery, cap: int | None, threads: int) -> int:
    s = len(q.support)
    _check_cap(s, WORD_QUERY_CAP if cap is None else cap, f"{q.kind.value} query")
    table = _word_table(s, Mode.UNIFORM, threads)
    code = code_of(q.image_on_ranks())
    if q.kind is Kind.N:
        return table.total.get(code, 0)
    if q.kind is Kind.N_TREE:
        return table.tree.get(code, 0)
    if q.kind is Kind.N_UNI:
        return table.uni.get(code, 0)
    rank = {x: r for r, x in enumerate(q.support)}
    allowed = sum(1 << rank[x] for x in q.cycles[0])
    return sum(
        count
        for (c, mask), count in table.uni_upper.items()
        if c == code and mask & ~allowed == 0
    )


def _tree_query(q: CountQuery, cap: int | None, threads: int) -> int:
    s = len(q.support)
    _check_cap(s, TREE_QUERY_CAP if cap is None else cap, f"{q.kind.value} query")
    rank = {x: r for r, x in enumerate(q.support)}
    code = code_of(q.image_on_ranks())
    if q.kind is Kind.N_ROOTED_AT:
        table = _rooted_table(s, rank[q.param], threads)
        return sum(v for (c, _, _), v in table.items() if c == code)
    table = _rooted_table(s, 0, threads)  # 0 is the smallest support element
    entries = [(bp, bm, v) for (c, bp, bm), v in table.items() if c == code]
    if q.kind is Kind.N_PRIME:
        return sum(v for _, _, v in entries)
    labels = q.support
    if q.kind is Kind.N_PRIME_BETAPLUS_GT:
        return sum(v for bp, _, v in entries if bp >= 0 and labels[bp] > q.param)
    if q.kind is Kind.N_PRIME_BETAMINUS_LT:
        return sum(v for _, bm, v in entries if bm >= 0 and labels[bm] < q.param)
    # N_DOUBLEPRIME: the smallest positive element hangs directly off 0
    if s < 2:
        return 0
    return sum(v for _, bm, v in entries if bm == 1)


def labeled_splits(d: Sequence[int], k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every tuple (D_1, ..., D_k) of nonempty blocks with (D_1 ... D_k) = (D).

    Each tuple is produced once: the rotation is fixed by where D_1 starts
    and the cut points by a composition of |D| into k parts.
    """
    d = tuple(d)
    m = len(d)
    if k > m:
        return
    for start in range(m):
        rot = d[start:] + d[:start]
        for cuts in itertools.combinations(range(1, m), k - 1):
            bounds = (0,) + cuts + (m,)
            yield tuple(rot[bounds[i]:bounds[i + 1]] for i in range(k))


def _split_query(q: CountQuery, cap: int | None, threads: int) -> int:
    (d,) = q.cycles
    _check_cap(len(d) + 1, TREE_QUERY_CAP if cap is None else cap, f"{q.kind.value} query")
    smallest = min(d)
    total = 0
    for blocks in labeled_splits(d, q.param):
        term = 1
        for block in blocks:
            kind = Kind.N_DOUBLEPRIME if (q.kind is Kind.NBARPRIME and smallest in block) else Kind.N_PRIME
            term *= _tree_query(CountQuery.prime(kind, block), cap, threads)
            if term == 0:
                break
        total += term
    return total


def eval_oracle(q: CountQuery, cap: int | None = None, threads: int = 1) -> BigCount:
    """Exact count for one query by enumeration."""
    if q.kind in _WORD_KINDS:
        return _word_query(q, cap, threads)
    if q.kind in _SPLIT_KINDS:
        return _split_query(q, cap, threads)
    return _tree_query(q, cap, threads)


# --------------------------------------------------------------------------
# whole-distribution drivers


def count_all(n: int, mode: Mode = Mode.UNIFORM, cap: int | None = None, threads: int = 1) -> dict[Permutation, BigCount]:
    """Multiplicity of every permutation reached by some word."""
    table = word_table(n, mode, cap, threads)
    out = {}
    for code, count in table.total.items():
        image = tuple((code // n ** i) % n + 1 for i in range(n))
        out[Permutation(image)] = count
    expected = n ** n if Mode(mode) is Mode.UNIFORM else math.factorial(n)
    assert sum(out.values()) == expected
    return out


def fixed_point_dist_oracle(n: int, mode: Mode = Mode.UNIFORM, cap: int | None = None, threads: int = 1) -> list[Fraction]:
    """p_{n,k} for k = 0..n as exact fractions."""
    table = word_table(n, mode, cap, threads)
    total = sum(table.fixed.values())
    dist = [Fraction(table.fixed.get(k, 0), total) for k in range(n + 1)]
    assert sum(dist) == 1
    return dist


def connected_counts_oracle(n: int, mode: Mode = Mode.UNIFORM, cap: int | None = None, threads: int = 1) -> dict[int, BigCount]:
    """Connected words bucketed by the fixed-point count of their permutation."""
    table = word_table(n, mode, cap, threads)
    return dict(sorted(table.connected.items()))


def counts_to_json(counts: dict[Permutation, BigCount]) -> list[dict]:
    rows = sorted(counts.items(), key=lambda kv: kv[0].image)
    return [{"permutation": format_cycles(p), "count": str(c)} for p, c in rows]


"""Shuffle words, their permutations, and the functional digraph j -> a_j.

A word ``(a_1, ..., a_n)`` stands for the product
``(n a_n) ... (2 a_2)(1 a_1)``, the transposition ``(1 a_1)`` acting first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ParseError
from .perm import CycleSeq, Permutation

__all__ = [
    "ComponentKind",
    "RingComponent",
    "RootedTree",
    "ShuffleWord",
    "apply_word",
    "build_digraph",
    "flip_word",
    "induced_component_permutation",
    "concat_swap_map",
    "parse_word",
    "postman",
]


@dataclass(frozen=True)
class ShuffleWord:
    a: tuple[int, ...]
    permutation_mode: bool = False

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        n = len(a)
        for j, x in enumerate(a, 1):
            if not 1 <= x <= n:
                raise ValueError(f"a_{j} = {x} outside 1..{n}")
        if self.permutation_mode and len(set(a)) != n:
            raise ValueError(f"{a} is not a bijection")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)

    def __getitem__(self, j: int) -> int:
        """1-based access: ``w[j]`` is a_j."""
        return self.a[j - 1]

    def __str__(self) -> str:
        return ",".join(map(str, self.a))


def parse_word(text: str, permutation_mode: bool = False) -> ShuffleWord:
    """Parse a comma-separated word literal such as ``"5,1,4,6,3,2"``."""
    text = text.strip()
    if not text:
        return ShuffleWord((), permutation_mode)
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad word literal {text!r}") from exc
    try:
        return ShuffleWord(values, permutation_mode)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def apply_word(w: ShuffleWord) -> Permutation:
    # Track the inverse: composing a transposition on the left swaps two
    # positions of the inverse image table.
    inv = list(range(w.n + 1))
    for j, aj in enumerate(w.a, 1):
        inv[j], inv[aj] = inv[aj], inv[j]
    image = [0] * w.n
    for x in range(1, w.n + 1):
        image[inv[x] - 1] = x
    return Permutation(tuple(image))


def postman(succ: Mapping[int, int], start: int) -> int:
    """Follow ``start`` through the transpositions (v succ[v]) in increasing v.

    The times of day are the source labels; loops do nothing.
    """
    pos = start
    for t in sorted(succ):
        target = succ[t]
        if pos == t:
            pos = target
        elif pos == target:
            pos = t
    return pos


class ComponentKind(enum.Enum):
    TREE = "tree"
    UNICYCLE = "unicycle"


@dataclass(frozen=True)
class RingComponent:
    vertices: frozenset[int]
    ring: tuple[int, ...]
    succ: Mapping[int, int] = field(compare=False)
    hanging_trees: Mapping[int, tuple[int, ...]] = field(compare=False)
    upper: frozenset[int] = frozenset()
    lower: frozenset[int] = frozenset()

    @property
    def kind(self) -> ComponentKind:
        return ComponentKind.TREE if len(self.ring) == 1 else ComponentKind.UNICYCLE

    @property
    def root(self) -> int | None:
        """The loop vertex of a tree component."""
        return self.ring[0] if len(self.ring) == 1 else None


def build_digraph(w: ShuffleWord) -> list[RingComponent]:
    """Split the digraph j -> a_j into components, ordered by smallest ring vertex."""
    n = w.n
    stamp = [0] * (n + 1)
    ring_of = [0] * (n + 1)  # ring id (smallest ring vertex) of each vertex
    rings: dict[int, tuple[int, ...]] = {}
    for start in range(1, n + 1):
        if stamp[start]:
            continue
        path = []
        x = start
        while not stamp[x]:
            stamp[x] = start
            path.append(x)
            x = w[x]
        if stamp[x] == start:
            # closed a new ring inside this walk
            cyc = path[path.index(x):]
            i = cyc.index(min(cyc))
            ring = tuple(cyc[i:] + cyc[:i])
            rid = ring[0]
            rings[rid] = ring
        else:
            rid = ring_of[x]
        for v in path:
            ring_of[v] = rid

    components = []
    for rid in sorted(rings):
        ring = rings[rid]
        on_ring = set(ring)
        verts = frozenset(v for v in range(1, n + 1) if ring_of[v] == rid)
        succ = {v: w[v] for v in sorted(verts)}
        children: dict[int, list[int]] = {v: [] for v in verts}
        for v in verts:
            if v not in on_ring:
                children[succ[v]].append(v)
        hanging = {v: tuple(sorted(c)) for v, c in children.items() if c}
        upper: set[int] = set()
        lower: set[int] = set()
        if len(ring) > 1:
            for i, v in enumerate(ring):
                pred = ring[i - 1]
                (upper if pred < v else lower).add(v)
        # invariants: one out-edge per vertex, so edges == vertices, and one ring
        assert len(succ) == len(verts)
        assert all(succ[v] in verts for v in verts)
        components.append(
            RingComponent(verts, ring, succ, hanging, frozenset(upper), frozenset(lower))
        )
    return components


def _cycles_of_map(mapping: Mapping[int, int]) -> list[CycleSeq]:
    seen: set[int] = set()
    out = []
    for start in sorted(mapping, reverse=True):
        if start in seen:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = mapping[x]
        out.append(CycleSeq(tuple(cyc)))
    return out


def induced_component_permutation(c: RingComponent) -> tuple[CycleSeq, ...]:
    """The permutation a component induces on its own vertices.

    A tree gives one cycle through every vertex.  A unicycle gives
    ``(upper_cycle, lower_cycle)``.
    """
    mapping = {v: postman(c.succ, v) for v in c.vertices}
    cycles = _cycles_of_map(mapping)
    if c.kind is ComponentKind.TREE:
        if len(cycles) != 1:
            raise AssertionError(f"tree component induced {len(cycles)} cycles")
        return (cycles[0],)
    if len(cycles) != 2:
        raise AssertionError(f"unicyclic component induced {len(cycles)} cycles")
    first, second = cycles
    if c.upper <= set(first.elements):
        upper, lower = first, second
    else:
        upper, lower = second, first
    if not (c.upper <= set(upper.elements) and c.lower <= set(lower.elements)):
        raise AssertionError("upper/lower vertices split across cycles")
    return upper, lower


def _split_concat(p: Permutation, n: int, m: int) -> tuple[Permutation, Permutation]:
    if p.n != n + m:
        raise ValueError(f"degree {p.n} is not {n} + {m}")
    left, right = p.image[:n], p.image[n:]
    if any(v > n for v in left) or any(v <= n for v in right):
        raise ValueError(f"{p} is not a concatenation of degrees {n} and {m}")
    return Permutation(left), Permutation(tuple(v - n for v in right))


def concat_swap_map(w: ShuffleWord, n: int, m: int) -> ShuffleWord:
    """Send a representation of ``pi || rho`` to one of ``rho || pi``.

    ``pi`` has degree n and ``rho`` degree m.  Calling again with the roles of
    n and m exchanged undoes the map.
    """
    pi, rho = _split_concat(apply_word(w), n, m)
    pi_inv = pi.inverse()

    def psi(x: int) -> int:
        return m + x if x <= n else x - n

    def pi_inv_ext(x: int) -> int:
        return pi_inv(x) if x <= n else x

    def rho_ext(x: int) -> int:
        return rho(x) if x <= m else x

    b = [0] * (n + m)
    for x in range(1, m + 1):
        b[x - 1] = psi(pi_inv_ext(w[x + n]))
    for x in range(m + 1, m + n + 1):
        b[x - 1] = rho_ext(psi(w[x - m]))
    return ShuffleWord(tuple(b), w.permutation_mode)


def flip_word(w: ShuffleWord) -> ShuffleWord:
    """The word of the flipped permutation: b_j = n + 1 - a_{n+1-j}."""
    n = w.n
    return ShuffleWord(tuple(n + 1 - w[n + 1 - j] for j in range(1, n + 1)), w.permutation_mode)


@dataclass(frozen=True)
class RootedTree:
    """A tree with all edges oriented towards ``root``; the root carries a loop.

    The root may be the dummy vertex 0.
    """

    root: int
    parent: Mapping[int, int] = field(compare=False)

    def __post_init__(self):
        verts = set(self.parent) | {self.root}
        if self.root in self.parent:
            raise ValueError("root must not have a parent")
        for v in self.parent:
            x, steps = v, 0
            while x != self.root:
                if x not in self.parent or steps > len(verts):
                    raise ValueError(f"vertex {v} does not reach the root")
                x = self.parent[x]
                steps += 1

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    def root_children(self) -> list[int]:
        return sorted(v for v, p in self.parent.items() if p == self.root)

    @property
    def beta_plus(self) -> int | None:
        kids = self.root_children()
        return kids[-1] if kids else None

    @property
    def beta_minus(self) -> int | None:
        kids = self.root_children()
        return kids[0] if kids else None

    def permutation(self) -> dict[int, int]:
        succ = dict(self.parent)
        succ[self.root] = self.root
        return {v: postman(succ, v) for v in self.support}

    def cycle(self) -> CycleSeq:
        cycles = _cycles_of_map(self.permutation())
        assert len(cycles) == 1
        return cycles[0]


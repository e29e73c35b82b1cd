"""Permutations of {1..n}, cycle notation, and the structural operators.

Permutations are immutable and 1-based: ``p(i)`` is the image of ``i`` and
``p.image[i - 1]`` stores it.  Cycle notation follows the usual convention,
``(a b c)`` sends a to b, b to c and c to a.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ParseError

__all__ = [
    "CycleSeq",
    "PartitionClass",
    "Permutation",
    "apply_sigma",
    "concat",
    "cycle_decomposition",
    "flip",
    "format_cycles",
    "order_pattern",
    "parse_cycles",
    "partitions",
    "reverse",
    "sigma",
]


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"not a bijection of 1..{len(image)}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> Permutation:
        cycles = [tuple(c) for c in cycles]
        seen: set[int] = set()
        for c in cycles:
            for x in c:
                if x < 1:
                    raise ValueError(f"cycle element {x} is not positive")
                if x in seen:
                    raise ValueError(f"duplicate element {x}")
                seen.add(x)
        top = max(seen, default=0)
        if n is None:
            n = top
        elif top > n:
            raise ValueError(f"element {top} exceeds degree {n}")
        image = list(range(1, n + 1))
        for c in cycles:
            for i, x in enumerate(c):
                image[x - 1] = c[(i + 1) % len(c)]
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __len__(self) -> int:
        return len(self.image)

    def __mul__(self, other: Permutation) -> Permutation:
        # (p * q)(x) = p(q(x)): q acts first
        if self.n != other.n:
            raise ValueError("degrees differ")
        return Permutation(tuple(self.image[v - 1] for v in other.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, v in enumerate(self.image, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.image, 1))

    def fixed_points(self) -> int:
        return sum(1 for i, v in enumerate(self.image, 1) if v == i)

    def cycles(self) -> list[CycleSeq]:
        return cycle_decomposition(self)[0]

    def cycle_type(self) -> PartitionClass:
        return cycle_decomposition(self)[1]

    def __str__(self) -> str:
        return format_cycles(self)


@dataclass(frozen=True)
class CycleSeq:
    """A nonempty sequence of distinct integers read as a cycle or a block."""

    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        if not els:
            raise ValueError("empty cycle sequence")
        if len(set(els)) != len(els):
            raise ValueError(f"repeated element in {els}")
        object.__setattr__(self, "elements", els)

    @property
    def gamma_minus(self) -> int:
        return self.elements[0]

    @property
    def gamma_plus(self) -> int:
        return self.elements[-1]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def canonical(self) -> CycleSeq:
        """Rotation starting at the largest element."""
        i = self.elements.index(max(self.elements))
        return CycleSeq(self.elements[i:] + self.elements[:i])

    def rotations(self) -> list[CycleSeq]:
        els = self.elements
        return [CycleSeq(els[i:] + els[:i]) for i in range(len(els))]

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.elements)) + ")"


@dataclass(frozen=True)
class PartitionClass:
    """Multiset of cycle lengths, stored in nonincreasing order."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(sorted((int(x) for x in self.lengths), reverse=True))
        if any(x < 1 for x in lengths):
            raise ValueError(f"nonpositive part in {lengths}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def n(self) -> int:
        return sum(self.lengths)

    @property
    def q(self) -> int:
        return len(self.lengths)

    def __str__(self) -> str:
        return "+".join(map(str, self.lengths)) if self.lengths else "0"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|(\S))")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse cycle notation such as ``"(4 3)(2 1)"``.

    Elements not mentioned are fixed points.  When ``n`` is omitted the degree
    is the largest element written (0 for an empty string).  ``"()"`` is
    accepted as the empty product.
    """
    cycles: list[list[int]] = []
    current: list[int] | None = None
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1):
            if current is not None:
                raise ParseError(f"nested '(' at offset {m.start(1)}")
            current = []
        elif m.group(2):
            if current is None:
                raise ParseError(f"unbalanced ')' at offset {m.start(2)}")
            if current:
                cycles.append(current)
            current = None
        elif m.group(3):
            if current is None:
                raise ParseError(f"integer outside a cycle at offset {m.start(3)}")
            value = int(m.group(3))
            if value < 1:
                raise ParseError("cycle elements must be positive")
            current.append(value)
        else:
            raise ParseError(f"unexpected character {m.group(4)!r} at offset {m.start(4)}")
    if current is not None:
        raise ParseError("unterminated cycle")
    seen: set[int] = set()
    for c in cycles:
        for x in c:
            if x in seen:
                raise ParseError(f"duplicate element {x}")
            seen.add(x)
    if n is not None:
        if n < 0:
            raise ParseError("negative degree")
        if seen and max(seen) > n:
            raise ParseError(f"element {max(seen)} exceeds degree {n}")
    return Permutation.from_cycles(cycles, n)


def format_cycles(p: Permutation, fixed_points: bool = False) -> str:
    """Canonical cycle notation; the identity prints as ``()``."""
    cycles = [c for c in p.cycles() if fixed_points or len(c) > 1]
    if not cycles:
        return "()"
    return "".join(str(c) for c in cycles)


def cycle_decomposition(p: Permutation) -> tuple[list[CycleSeq], PartitionClass]:
    """Disjoint cycles (fixed points included) in canonical order.

    Each cycle starts at its largest element and cycles are listed by largest
    element, descending.
    """
    seen = [False] * (p.n + 1)
    cycles = []
    for start in range(p.n, 0, -1):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p(x)
        cycles.append(CycleSeq(tuple(cyc)))
    return cycles, PartitionClass(tuple(len(c) for c in cycles))


def concat(p: Permutation, q: Permutation) -> Permutation:
    """Block-diagonal join: ``q`` acts on the shifted range n+1..n+m."""
    return Permutation(p.image + tuple(p.n + v for v in q.image))


def sigma(n: int) -> Permutation:
    return Permutation(tuple(range(n, 0, -1)))


def flip(p: Permutation) -> Permutation:
    s = sigma(p.n)
    return s * p.inverse() * s


def reverse(s: CycleSeq) -> CycleSeq:
    return CycleSeq(s.elements[::-1])


def apply_sigma(s: CycleSeq, n: int) -> CycleSeq:
    if any(x < 1 or x > n for x in s.elements):
        raise ValueError(f"element of {s} outside 1..{n}")
    return CycleSeq(tuple(n + 1 - x for x in s.elements))


def partitions(n: int) -> list[PartitionClass]:
    """All partitions of n in reverse lexicographic order ({n} first)."""
    if n < 0:
        raise ValueError("negative n")
    out: list[PartitionClass] = []

    def rec(remaining: int, largest: int, prefix: list[int]):
        if remaining == 0:
            out.append(PartitionClass(tuple(prefix)))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def order_pattern(seq: Sequence[int]) -> tuple[int, ...]:
    """Ranks (0-based) of the entries of a sequence of distinct integers."""
    ranks = {x: r for r, x in enumerate(sorted(seq))}
    return tuple(ranks[x] for x in seq)

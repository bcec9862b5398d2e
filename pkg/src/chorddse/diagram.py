"""Rooted chord diagrams as decorated fixed-point-free involutions.

Points are numbered 1..2n counter-clockwise starting at the root.  A diagram
keeps its chords sorted by first endpoint; decorations are indexed by the
intersection-order label of each chord (label 1 is the root chord).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Pair = tuple[int, int]


class DiagramError(ValueError):
    """Raised for malformed chord diagrams or invalid operations on them."""


def chords_cross(p: Pair, q: Pair) -> bool:
    a, b = p
    c, d = q
    return a < c < b < d or c < a < d < b


class UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def crossing_components(chords: Sequence[Pair]) -> list[list[Pair]]:
    """Connected components of the crossing graph.

    Each component is sorted by first endpoint and components are ordered by
    their smallest endpoint, which is the counter-clockwise order seen from
    the root.
    """
    uf = UnionFind(len(chords))
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            if chords_cross(chords[i], chords[j]):
                uf.union(i, j)
    groups: dict[int, list[Pair]] = {}
    for i, c in enumerate(chords):
        groups.setdefault(uf.find(i), []).append(c)
    comps = [sorted(g) for g in groups.values()]
    comps.sort(key=lambda g: min(min(c) for c in g))
    return comps


def _intersection_labels(chords: Sequence[Pair]) -> dict[Pair, int]:
    labels: dict[Pair, int] = {}

    def visit(group: list[Pair], k: int) -> int:
        root = min(group)
        labels[root] = k
        k += 1
        rest = [c for c in group if c != root]
        if rest:
            for comp in crossing_components(rest):
                k = visit(comp, k)
        return k

    visit(sorted(chords), 1)
    return labels


@dataclass(frozen=True)
class IntersectionGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def neighbours(self, i: int) -> set[int]:
        return {b if a == i else a for a, b in self.edges if i in (a, b)}


@dataclass(frozen=True)
class TerminalData:
    ter: tuple[int, ...]
    base: int


@dataclass(frozen=True)
class ChordDiagram:
    """A rooted chord diagram with per-chord decorations.

    ``pairs`` are sorted by first endpoint with ``x < y`` inside each pair.
    ``decorations[i]`` belongs to the chord with intersection-order label
    ``i + 1`` (for disconnected diagrams, to ``pairs[i]``).  Direct
    construction trusts its arguments; use :func:`validate_diagram` or
    :meth:`from_pairs` for untrusted input.
    """

    pairs: tuple[Pair, ...]
    decorations: tuple[int, ...]

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[Sequence[int]],
        pair_decorations: Sequence[int] | None = None,
    ) -> ChordDiagram:
        """Build a diagram from chords with decorations given per chord.

        ``pair_decorations[i]`` decorates the i-th chord as passed in; the
        result re-indexes them by intersection order.
        """
        raw = [tuple(sorted((int(a), int(b)))) for a, b in pairs]
        decos = list(pair_decorations) if pair_decorations is not None else [1] * len(raw)
        if len(decos) != len(raw):
            raise DiagramError("decoration count does not match chord count")
        by_chord = dict(zip(raw, decos))
        ordered = tuple(sorted(raw))
        d = cls(ordered, tuple(1 for _ in ordered))
        if d.is_connected:
            labels = d.label_of
            deco = [0] * len(ordered)
            for c in ordered:
                deco[labels[c] - 1] = by_chord[c]
        else:
            deco = [by_chord[c] for c in ordered]
        return cls(ordered, tuple(deco))

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def norm(self) -> int:
        return sum(self.decorations)

    @cached_property
    def partner(self) -> tuple[int, ...]:
        """Endpoint -> partner array; index 0 is unused."""
        arr = [0] * (2 * self.size + 1)
        for x, y in self.pairs:
            arr[x], arr[y] = y, x
        return tuple(arr)

    @cached_property
    def is_connected(self) -> bool:
        return len(crossing_components(self.pairs)) == 1

    @cached_property
    def label_of(self) -> dict[Pair, int]:
        if not self.is_connected:
            raise DiagramError("intersection order needs a connected diagram")
        return _intersection_labels(self.pairs)

    @cached_property
    def chord_of(self) -> tuple[Pair, ...]:
        """Chords indexed by ``label - 1``."""
        out = [None] * self.size
        for c, lab in self.label_of.items():
            out[lab - 1] = c
        return tuple(out)  # type: ignore[arg-type]

    def decoration_of(self, chord: Pair) -> int:
        if self.is_connected:
            return self.decorations[self.label_of[chord] - 1]
        return self.decorations[self.pairs.index(chord)]

    def pair_decorations(self) -> tuple[int, ...]:
        """Decorations aligned with ``pairs``."""
        return tuple(self.decoration_of(c) for c in self.pairs)

    def with_decorations(self, decorations: Sequence[int]) -> ChordDiagram:
        return ChordDiagram(self.pairs, tuple(decorations))

    def undecorated(self) -> ChordDiagram:
        return ChordDiagram(self.pairs, (1,) * self.size)

    @cached_property
    def terminal(self) -> TerminalData:
        chords = self.chord_of
        ter = []
        for i, c in enumerate(chords):
            if not any(chords_cross(c, chords[j]) for j in range(i + 1, len(chords))):
                ter.append(i + 1)
        return TerminalData(tuple(ter), ter[0])

    @property
    def base(self) -> int:
        return self.terminal.base

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "decorations": list(self.decorations)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict | str) -> ChordDiagram:
        if isinstance(data, str):
            data = json.loads(data)
        pairs = data["pairs"]
        decorations = data.get("decorations") or [1] * len(pairs)
        return validate_diagram(pairs, decorations)

    def __str__(self) -> str:
        body = "".join(f"({x},{y})" for x, y in self.pairs)
        if any(d != 1 for d in self.decorations):
            body += " d=" + ",".join(map(str, self.decorations))
        return body


def validate_diagram(pairs: Sequence[Sequence[int]], decorations: Sequence[int] | None = None) -> ChordDiagram:
    """Check an involution given as point pairs and return the canonical diagram.

    Decorations are read in intersection order when the diagram is connected
    and in first-endpoint order otherwise.
    """
    if not pairs:
        raise DiagramError("a chord diagram needs at least one chord")
    n = len(pairs)
    seen: set[int] = set()
    norm_pairs = []
    for p in pairs:
        if len(p) != 2:
            raise DiagramError(f"chord {p!r} is not a pair")
        a, b = int(p[0]), int(p[1])
        if a == b:
            raise DiagramError(f"fixed point {a}")
        for v in (a, b):
            if not 1 <= v <= 2 * n:
                raise DiagramError(f"point {v} out of range 1..{2 * n}")
            if v in seen:
                raise DiagramError(f"point {v} repeated")
            seen.add(v)
        norm_pairs.append((min(a, b), max(a, b)))
    if decorations is None:
        decorations = [1] * n
    if len(decorations) != n:
        raise DiagramError(f"expected {n} decorations, got {len(decorations)}")
    decos = tuple(int(d) for d in decorations)
    if any(d < 1 for d in decos):
        raise DiagramError("decorations must be positive integers")
    return ChordDiagram(tuple(sorted(norm_pairs)), decos)


def crossings(C: ChordDiagram) -> IntersectionGraph:
    if C.is_connected:
        lab = C.label_of
    else:
        lab = {c: i + 1 for i, c in enumerate(C.pairs)}
    edges = set()
    for i, p in enumerate(C.pairs):
        for q in C.pairs[i + 1:]:
            if chords_cross(p, q):
                a, b = lab[p], lab[q]
                edges.add((min(a, b), max(a, b)))
    return IntersectionGraph(C.size, frozenset(edges))


def is_connected(C: ChordDiagram) -> bool:
    return C.is_connected


def intersection_order(C: ChordDiagram) -> dict[Pair, int]:
    return dict(C.label_of)


def terminal_data(C: ChordDiagram) -> TerminalData:
    return C.terminal


def enumerate_connected(n: int) -> Iterator[ChordDiagram]:
    """Yield every rooted connected diagram with n chords, in lexicographic order.

    Backtracks over partner choices for the smallest free point.  A prefix
    1..t closed under the matching (t < 2n) splits the diagram, so such
    branches are cut early; survivors get a union-find connectivity check.
    """
    if n < 1:
        raise DiagramError("n must be positive")
    size = 2 * n
    partner = [0] * (size + 1)
    pairs: list[Pair] = []
    ones = (1,) * n

    def rec(p: int, reach: int) -> Iterator[ChordDiagram]:
        while p <= size and partner[p]:
            reach = max(reach, partner[p])
            p += 1
        if p > size:
            if len(crossing_components(pairs)) == 1:
                yield ChordDiagram(tuple(pairs), ones)
            return
        if p > 1 and reach == p - 1:
            return
        for q in range(p + 1, size + 1):
            if partner[q]:
                continue
            partner[p], partner[q] = q, p
            pairs.append((p, q))
            yield from rec(p + 1, max(reach, q))
            pairs.pop()
            partner[p] = partner[q] = 0

    yield from rec(1, 0)


def compositions(total: int, parts: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive parts, lexicographic."""
    cap = total if max_part is None else max_part
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, min(cap, total - parts + 1) + 1):
        for rest in compositions(total - first, parts - 1, max_part):
            yield (first,) + rest


def enumerate_decorated(total: int, max_decoration: int | None = None) -> Iterator[ChordDiagram]:
    """All decorated rooted connected diagrams of norm ``total``."""
    if total < 1:
        raise DiagramError("total must be positive")
    for n in range(1, total + 1):
        comps = list(compositions(total, n, max_decoration))
        if not comps:
            continue
        for C in enumerate_connected(n):
            for d in comps:
                yield C.with_decorations(d)


def count_table(max_n: int) -> list[tuple[int, int]]:
    return [(n, sum(1 for _ in enumerate_connected(n))) for n in range(1, max_n + 1)]

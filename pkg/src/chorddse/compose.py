"""Insertion of rooted chord diagrams and the root share decomposition.

Index map for ``C o_k D`` with ``|C| = n``, ``|D| = m`` and 1 <= k <= 2m-1::

    C point 1        -> 1
    C point p >= 2   -> p + k
    D point q <= k   -> q + 1
    D point q >  k   -> q + 2n

so the root of C sits just before the root of D and the rest of C fills the
gap between D's k-th and (k+1)-th points.
"""

from __future__ import annotations

from typing import Sequence

from .diagram import ChordDiagram, DiagramError, Pair, crossing_components


def normalize(pairs: Sequence[Sequence[int]]) -> tuple[Pair, ...]:
    """Order-preserving relabelling of the endpoints onto 1..2m; pair order kept."""
    points = [v for p in pairs for v in p]
    if len(set(points)) != len(points):
        raise DiagramError("duplicate endpoint")
    rank = {v: i + 1 for i, v in enumerate(sorted(points))}
    return tuple((rank[a], rank[b]) for a, b in pairs)


def _sub_diagram(C: ChordDiagram, chords: Sequence[Pair]) -> ChordDiagram:
    """Normalise a subset of C's chords, carrying decorations along."""
    decos = [C.decoration_of(c) for c in chords]
    return ChordDiagram.from_pairs(normalize(chords), decos)


def insert(C: ChordDiagram, D: ChordDiagram, k: int) -> ChordDiagram:
    n, m = C.size, D.size
    if not 1 <= k <= 2 * m - 1:
        raise DiagramError(f"insertion index {k} outside 1..{2 * m - 1}")

    def move_c(p: int) -> int:
        return 1 if p == 1 else p + k

    def move_d(q: int) -> int:
        return q + 1 if q <= k else q + 2 * n

    pairs = [(move_c(x), move_c(y)) for x, y in C.pairs]
    pairs += [(move_d(x), move_d(y)) for x, y in D.pairs]
    decos = list(C.pair_decorations()) + list(D.pair_decorations())
    return ChordDiagram.from_pairs(pairs, decos)


def first_component(C: ChordDiagram) -> tuple[list[Pair], list[Pair]]:
    """Split C into (C minus first component, first component) as raw chords."""
    root = C.pairs[0]
    comps = crossing_components(list(C.pairs[1:]))
    c1 = comps[0]
    rest = [root] + sorted(c for comp in comps[1:] for c in comp)
    return sorted(rest), c1


def root_share_decompose(C: ChordDiagram) -> tuple[ChordDiagram, ChordDiagram, int]:
    """Return (C', C'', i) with ``C == insert(C', C'', i)``."""
    if C.size < 2:
        raise DiagramError("root share decomposition needs at least two chords")
    if not C.is_connected:
        raise DiagramError("root share decomposition needs a connected diagram")
    rest, c1 = first_component(C)
    y_root = C.pairs[0][1]
    k = sum(1 for c in c1 for v in c if v < y_root)
    return _sub_diagram(C, rest), _sub_diagram(C, c1), k

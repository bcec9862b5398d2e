"""Static renderings: insertion trees as Graphviz DOT, diagrams as SVG text."""

from __future__ import annotations

import math
import re

from .diagram import ChordDiagram, DiagramError, validate_diagram
from .tree import insertion_tree, tree_to_dot

_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_diagram(text: str, decorations: str | None = None) -> ChordDiagram:
    """Read ``(1,4)(2,5)(3,6)`` or a JSON list of pairs; decorations as ``1,1,2``."""
    text = text.strip()
    if text.startswith("["):
        import json

        try:
            pairs = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"cannot parse diagram: {exc}") from exc
    else:
        pairs = [(int(a), int(b)) for a, b in _PAIR.findall(text)]
        if not pairs or _PAIR.sub("", text).strip():
            raise DiagramError(f"cannot parse diagram {text!r}")
    decos = None
    if decorations:
        try:
            decos = [int(d) for d in decorations.split(",")]
        except ValueError as exc:
            raise DiagramError(f"bad decorations {decorations!r}") from exc
    return validate_diagram(pairs, decos)


def tree_dot(C: ChordDiagram) -> str:
    return tree_to_dot(insertion_tree(C))


def diagram_svg(C: ChordDiagram, size: int = 240) -> str:
    """Points on a circle counter-clockwise from the root at the bottom;
    chords are labelled by intersection order, decorations shown after a colon."""
    n2 = 2 * C.size
    c = size / 2
    r = size * 0.36
    labels = C.label_of if C.is_connected else {p: i + 1 for i, p in enumerate(C.pairs)}

    def point(p: int, radius: float = r) -> tuple[float, float]:
        angle = -math.pi / 2 - 2 * math.pi * (p - 1) / n2
        return c + radius * math.cos(angle), c - radius * math.sin(angle)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'  <circle cx="{c:.2f}" cy="{c:.2f}" r="{r:.2f}" fill="none" stroke="black"/>',
    ]
    for a, b in C.pairs:
        (x1, y1), (x2, y2) = point(a), point(b)
        out.append(f'  <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="black"/>')
    for p in range(1, n2 + 1):
        x, y = point(p)
        out.append(f'  <circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="black"/>')
    rx, ry = point(1)
    out.append(f'  <circle cx="{rx:.2f}" cy="{ry:.2f}" r="5" fill="none" stroke="black"/>')
    for chord, lab in sorted(labels.items(), key=lambda t: t[1]):
        text = str(lab)
        d = C.decoration_of(chord)
        if d != 1:
            text += f":{d}"
        for p in chord:
            x, y = point(p, r + 14)
            out.append(f'  <text x="{x:.2f}" y="{y:.2f}" font-size="10" text-anchor="middle">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

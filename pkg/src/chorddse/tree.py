"""Insertion trees of chord diagrams.

Trees are nested 2-tuples ``(left, right)``; anything that is not a tuple is a
leaf label.  Final labels are ints, pre-labels are :class:`PreLabel` values
and :data:`MARK` is the unlabelled leaf added by virtual insertion.

Nodes are addressed by paths (tuples of 0 = left, 1 = right).  Edges are
numbered by the node below them: the virtual edge above the root is 1 and
the rest follow pre-order, so "edge k" is the edge into the k-th node in
pre-order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Iterator, Union

from .compose import insert, root_share_decompose
from .diagram import ChordDiagram, DiagramError, Pair

Path = tuple[int, ...]


@dataclass(frozen=True, order=True)
class PreLabel:
    """Auxiliary label from the left ("under") or right ("over") alphabet."""

    side: str
    index: int

    def __repr__(self) -> str:
        return f"{'_' if self.side == 'under' else '^'}{self.index}"


class _Mark:
    def __repr__(self) -> str:
        return "*"


MARK = _Mark()

Tree = Union[Any, tuple]


class TreeError(ValueError):
    pass


class Undecidable(TreeError):
    """Comparison between labels from the two pre-label alphabets."""


def is_leaf(t: Tree) -> bool:
    return not isinstance(t, tuple)


def leaves(t: Tree) -> list:
    if is_leaf(t):
        return [t]
    return leaves(t[0]) + leaves(t[1])


def nodes_preorder(t: Tree, path: Path = ()) -> Iterator[tuple[Path, Tree]]:
    yield path, t
    if not is_leaf(t):
        yield from nodes_preorder(t[0], path + (0,))
        yield from nodes_preorder(t[1], path + (1,))


def subtree_at(t: Tree, path: Path) -> Tree:
    for step in path:
        t = t[step]
    return t


def replace_at(t: Tree, path: Path, new: Tree) -> Tree:
    if not path:
        return new
    head, rest = path[0], path[1:]
    if head == 0:
        return (replace_at(t[0], rest, new), t[1])
    return (t[0], replace_at(t[1], rest, new))


def leaf_path(t: Tree, label: Any) -> Path:
    for path, node in nodes_preorder(t):
        if is_leaf(node) and node == label:
            return path
    raise TreeError(f"no leaf labelled {label!r}")


def edge_count(t: Tree) -> int:
    """Edges including the virtual root edge (= number of nodes)."""
    return 2 * len(leaves(t)) - 1


def tree_insert(T: Tree, U: Tree, k: int) -> Tree:
    """Subdivide edge k of U; T becomes the new vertex's left subtree."""
    nodes = list(nodes_preorder(U))
    if not 1 <= k <= len(nodes):
        raise TreeError(f"edge index {k} outside 1..{len(nodes)}")
    path, below = nodes[k - 1]
    return replace_at(U, path, (T, below))


def graft(left: Tree, right: Tree) -> Tree:
    return (left, right)


def relabel(t: Tree, mapping: dict | Callable[[Any], Any]) -> Tree:
    f = mapping if callable(mapping) else mapping.__getitem__
    if is_leaf(t):
        return f(t)
    return (relabel(t[0], f), relabel(t[1], f))


def normalize_labels(t: Tree) -> Tree:
    """Order-preserving relabelling of int leaves onto 1..n."""
    rank = {v: i + 1 for i, v in enumerate(sorted(leaves(t)))}
    return relabel(t, rank)


def fully_right_leaf(t: Tree) -> Any:
    while not is_leaf(t):
        t = t[1]
    return t


# -- insertion trees of diagrams -------------------------------------------


def _tree_of_chords(chords: list[Pair], labels: dict[Pair, int]) -> Tree:
    if len(chords) == 1:
        return labels[chords[0]]
    from .diagram import crossing_components

    chords = sorted(chords)
    root = chords[0]
    comps = crossing_components(chords[1:])
    c1 = comps[0]
    rest = [root] + [c for comp in comps[1:] for c in comp]
    k = sum(1 for c in c1 for v in c if v < root[1])
    return tree_insert(_tree_of_chords(rest, labels), _tree_of_chords(c1, labels), k)


def insertion_tree(C: ChordDiagram) -> Tree:
    """T(C), leaves labelled by C's intersection order."""
    if not C.is_connected:
        raise DiagramError("insertion tree needs a connected diagram")
    return _tree_of_chords(list(C.pairs), C.label_of)


def branch_left(t: Tree) -> dict:
    """Length of the maximal chain of right-child edges above each leaf."""
    out = {}
    for path, node in nodes_preorder(t):
        if is_leaf(node):
            nu = 0
            i = len(path) - 1
            while i >= 0 and path[i] == 1:
                nu += 1
                i -= 1
            out[node] = nu
    return out


def branch_left_vector(C: ChordDiagram) -> tuple[int, ...]:
    """nu(C) indexed by intersection-order label."""
    nu = branch_left(insertion_tree(C))
    return tuple(nu[i] for i in range(1, C.size + 1))


def branch_left_plane(C: ChordDiagram) -> tuple[int, ...]:
    """nu(C) read along the leaves of T(C) from left to right."""
    t = insertion_tree(C)
    nu = branch_left(t)
    return tuple(nu[lab] for lab in leaves(t))


def virtual_insert(T: Tree, k: int) -> Tree:
    return tree_insert(MARK, T, k)


def remove_subtree(T: Tree, path: Path) -> Tree:
    """Delete the subtree at ``path`` and contract the edge left dangling."""
    if not path:
        raise TreeError("cannot remove the whole tree")
    parent = path[:-1]
    sibling = subtree_at(T, parent + (1 - path[-1],))
    return replace_at(T, parent, sibling)


# -- admissibility ----------------------------------------------------------


def _is_final(v: Any) -> bool:
    return isinstance(v, int)


def label_less(a: Any, b: Any) -> bool:
    """Order on mixed labels: assigned naturals come before every pre-label;
    pre-labels compare only within their own alphabet."""
    fa, fb = _is_final(a), _is_final(b)
    if fa and fb:
        return a < b
    if fa != fb:
        return fa
    if a.side != b.side:
        raise Undecidable(f"{a!r} vs {b!r}")
    return a.index < b.index


def _min_label(labels: list) -> Any:
    best = labels[0]
    for v in labels[1:]:
        if label_less(v, best):
            best = v
    return best


def satisfies_p1(t: Tree) -> bool:
    """At every internal vertex the smallest label on the left is smaller
    than the label ending the fully right branch of the right subtree."""
    for _, node in nodes_preorder(t):
        if is_leaf(node):
            continue
        if not label_less(_min_label(leaves(node[0])), fully_right_leaf(node[1])):
            return False
    return True


def smallest_removable_subtree(T: Tree) -> Path:
    """Path of the smallest subtree containing the minimal label whose removal
    keeps P1; the left side of the tree-level root share decomposition."""
    if is_leaf(T):
        raise TreeError("a single leaf has no removable subtree")
    path = leaf_path(T, _min_label(leaves(T)))
    for cut in range(len(path), 0, -1):
        cand = path[:cut]
        if satisfies_p1(remove_subtree(T, cand)):
            return cand
    raise TreeError("no removable subtree keeps P1")


def _is_admissible(t: Tree) -> bool:
    labs = leaves(t)
    n = len(labs)
    if n == 1:
        return True
    if not satisfies_p1(t):
        return False
    try:
        path = smallest_removable_subtree(t)
    except TreeError:
        return False
    h = subtree_at(t, path)
    h_labels = set(leaves(h))
    size_h = len(h_labels)
    if h_labels != {1} | set(range(n - size_h + 2, n + 1)):
        return False
    rest = remove_subtree(t, path)
    return _is_admissible(normalize_labels(rest)) and _is_admissible(normalize_labels(h))


def is_admissible(T: Tree) -> bool:
    """P1 and P2, recursively on both sides of the tree decomposition."""
    labs = leaves(T)
    if not all(_is_final(v) for v in labs) or sorted(labs) != list(range(1, len(labs) + 1)):
        return False
    return _is_admissible(T)


def tree_decompose(T: Tree) -> tuple[Tree, Tree, int]:
    """Split an admissible tree as ``T == tree_insert(H, rest, r)``."""
    path = smallest_removable_subtree(T)
    if path[-1] != 0:
        raise TreeError("removable subtree is not a left child")
    h = subtree_at(T, path)
    rest = remove_subtree(T, path)
    r = next(i for i, (p, _) in enumerate(nodes_preorder(rest), 1) if p == path[:-1])
    return h, rest, r


def diagram_from_tree(T: Tree, decorations: dict[int, int] | None = None) -> ChordDiagram:
    """Inverse of :func:`insertion_tree` on admissible trees."""
    if not is_admissible(T):
        raise TreeError("tree labelling is not admissible")
    C = _diagram_from_tree(T)
    if decorations:
        C = C.with_decorations(tuple(decorations[i] for i in range(1, C.size + 1)))
    return C


def _diagram_from_tree(T: Tree) -> ChordDiagram:
    if is_leaf(T):
        return ChordDiagram(((1, 2),), (1,))
    h, rest, r = tree_decompose(T)
    return insert(_diagram_from_tree(normalize_labels(h)), _diagram_from_tree(normalize_labels(rest)), r)


# -- shuffles and the LABEL procedure ----------------------------------------


def shuffles(left: list, right: list) -> Iterator[tuple]:
    """All interleavings of two sequences keeping each one's internal order."""
    n = len(left) + len(right)
    for pos in itertools.combinations(range(n), len(left)):
        out = []
        li = ri = 0
        chosen = set(pos)
        for i in range(n):
            if i in chosen:
                out.append(left[li])
                li += 1
            else:
                out.append(right[ri])
                ri += 1
        yield tuple(out)


def label_tree(T: Tree, counter: int) -> Tree:
    """Complete a pre-labelled tree (the LABEL procedure).

    Labels below ``counter`` are already placed.  When the pending
    pre-labels of the current subtree come from one alphabet they take the
    next labels in their own order; otherwise the subtree is split by its
    smallest removable subtree and the remainder is labelled before it.
    """
    ids = {}

    def tag(t: Tree) -> Tree:
        if is_leaf(t):
            i = len(ids)
            ids[i] = t
            return i
        return (tag(t[0]), tag(t[1]))

    shape = tag(T)
    sigma = dict(ids)

    def view(sub: Tree) -> Tree:
        return relabel(sub, sigma)

    def run(sub: Tree, nxt: int) -> int:
        own = leaves(sub)
        pending = [i for i in own if not _is_final(sigma[i])]
        if not pending:
            return nxt
        if len({sigma[i].side for i in pending}) == 1:
            for i in sorted(pending, key=lambda i: sigma[i].index):
                sigma[i] = nxt
                nxt += 1
            return nxt
        labelled = view(sub)
        path = smallest_removable_subtree(labelled)
        h = subtree_at(sub, path)
        rest = remove_subtree(sub, path)
        nxt = run(rest, nxt)
        return run(h, nxt)

    run(shape, counter)
    return view(shape)


def admissible_labelings(H1: Tree, H2: Tree, b2: int | None = None) -> list[Tree]:
    """Admissible labelings of the tree with children H1 and H2.

    For each k, the first k labels of H1 are shuffled with the labels of H2
    up to its fully-right leaf ``b2`` (which must come last, receiving label
    ``b2 + k``); LABEL fills in the rest.  The base chord of the result is
    ``b2 + k``, so by the triangle inequality k stops at b(D1), the fully
    right leaf of H1.  The result is sorted.
    """
    if not (is_admissible(H1) and is_admissible(H2)):
        raise TreeError("inputs must be admissible insertion trees")
    m = fully_right_leaf(H2)
    if b2 is not None and b2 != m:
        raise TreeError(f"b(D2)={b2} does not match the fully right leaf {m}")
    b1 = fully_right_leaf(H1)
    pre1 = relabel(H1, lambda v: PreLabel("under", v))
    pre2 = relabel(H2, lambda v: PreLabel("over", v))
    found = []
    for k in range(1, b1 + 1):
        unders = [PreLabel("under", i) for i in range(1, k + 1)]
        overs = [PreLabel("over", i) for i in range(1, m)]
        for w in shuffles(unders, overs):
            assign = {v: i + 1 for i, v in enumerate(w)}
            assign[PreLabel("over", m)] = m + k
            start = relabel((pre1, pre2), lambda v: assign.get(v, v))
            done = label_tree(start, m + k + 1)
            if not is_admissible(done):
                raise TreeError(f"LABEL produced an inadmissible tree {tree_str(done)}")
            found.append(done)
    return sorted(found, key=_tree_key)


def _tree_key(t: Tree) -> str:
    return json.dumps(tree_to_json(t))


# -- diamond decomposition ----------------------------------------------------


def _subtree_diagram(C: ChordDiagram, sub: Tree) -> ChordDiagram:
    # The chords under a subtree need not form a connected diagram on their
    # own, so the subtree is inverted as a tree rather than restricted.
    labels = sorted(leaves(sub))
    decos = {i + 1: C.decorations[lab - 1] for i, lab in enumerate(labels)}
    return diagram_from_tree(normalize_labels(sub), decos)


def diamond_split(C: ChordDiagram) -> tuple[ChordDiagram, ChordDiagram]:
    """Split T(C) at its root into the diagrams of the two subtrees."""
    if C.size < 2:
        raise DiagramError("diamond split needs at least two chords")
    t = insertion_tree(C)
    return _subtree_diagram(C, t[0]), _subtree_diagram(C, t[1])


def diamond_products(D1: ChordDiagram, D2: ChordDiagram) -> list[ChordDiagram]:
    """Every (undecorated) C whose diamond split is (D1, D2).

    Built by reading the three-way associativity backwards: C's root share
    decomposition either inserts at the root edge, into the left subtree
    (then D1 itself decomposes) or into the right subtree (then D2 does).
    """
    D1, D2 = D1.undecorated(), D2.undecorated()
    out = [insert(D1, D2, 1)]
    if D1.size > 1:
        cp, cpp, r = root_share_decompose(D1)
        out += [insert(cp, X, r + 1) for X in diamond_products(cpp, D2)]
    if D2.size > 1:
        cp, cppp, r = root_share_decompose(D2)
        out += [insert(cp, X, r + 2 * D1.size) for X in diamond_products(D1, cppp)]
    return out


def threeway_cases(Cp: ChordDiagram, C2: ChordDiagram, k: int) -> tuple[str, ChordDiagram, ChordDiagram]:
    """Diamond split of ``Cp o_k C2`` from the split of C2.

    Returns ``(case, D1, D2)`` with case ``"root"`` (k = 1), ``"left"`` (edge
    k lies in the left subtree of T(C2)) or ``"right"``.
    """
    if Cp.size + C2.size < 3:
        raise DiagramError("three-way associativity needs at least three chords")
    if C2.size < 2:
        if k != 1:
            raise DiagramError("a single chord only has insertion index 1")
        return "root", Cp, C2
    c2, c3 = diamond_split(C2)
    left_edges = 2 * c2.size - 1
    if k == 1:
        return "root", Cp, C2
    if k <= 1 + left_edges:
        return "left", insert(Cp, c2, k - 1), c3
    return "right", c2, insert(Cp, c3, k - 1 - left_edges)


def binomial_count(j: int, l: int) -> int:
    return comb(j, l)


# -- serialisation -------------------------------------------------------------


def tree_to_json(t: Tree) -> Any:
    if is_leaf(t):
        if t is MARK:
            return "*"
        if isinstance(t, PreLabel):
            return repr(t)
        return t
    return [tree_to_json(t[0]), tree_to_json(t[1])]


def tree_from_json(data: Any) -> Tree:
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, list):
        if len(data) != 2:
            raise TreeError("internal nodes need exactly two children")
        return (tree_from_json(data[0]), tree_from_json(data[1]))
    if isinstance(data, int):
        return data
    raise TreeError(f"bad leaf {data!r}")


def tree_str(t: Tree) -> str:
    if is_leaf(t):
        return repr(t) if not isinstance(t, int) else str(t)
    return f"({tree_str(t[0])},{tree_str(t[1])})"


def tree_to_dot(t: Tree, name: str = "T") -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    counter = itertools.count()

    def walk(node: Tree) -> str:
        nid = f"n{next(counter)}"
        if is_leaf(node):
            text = "" if node is MARK else tree_str(node)
            lines.append(f'  {nid} [label="{text}"];')
        else:
            lines.append(f'  {nid} [label="", shape=point];')
            a = walk(node[0])
            b = walk(node[1])
            lines.append(f"  {nid} -> {a};")
            lines.append(f"  {nid} -> {b};")
        return nid

    walk(t)
    lines.append("}")
    return "\n".join(lines) + "\n"

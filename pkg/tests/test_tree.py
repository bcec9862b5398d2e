import itertools
from collections import defaultdict
from math import comb

import pytest

from chorddse.compose import insert
from chorddse.diagram import DiagramError, enumerate_connected, validate_diagram
from chorddse.tree import (
    MARK,
    PreLabel,
    TreeError,
    Undecidable,
    admissible_labelings,
    branch_left,
    branch_left_plane,
    branch_left_vector,
    diagram_from_tree,
    diamond_products,
    diamond_split,
    edge_count,
    fully_right_leaf,
    insertion_tree,
    is_admissible,
    label_less,
    leaves,
    nodes_preorder,
    remove_subtree,
    shuffles,
    smallest_removable_subtree,
    threeway_cases,
    tree_from_json,
    tree_insert,
    tree_str,
    tree_to_dot,
    tree_to_json,
    virtual_insert,
)

TWO = validate_diagram([(1, 3), (2, 4)])
WHEEL = validate_diagram([(1, 4), (2, 5), (3, 6)])
FOUR = validate_diagram([(1, 6), (2, 4), (3, 8), (5, 7)])


def shapes(n):
    if n == 1:
        yield 0
        return
    for a in range(1, n):
        for left in shapes(a):
            for right in shapes(n - a):
                yield (left, right)


def fill(shape, labels):
    it = iter(labels)

    def go(t):
        if t == 0:
            return next(it)
        return (go(t[0]), go(t[1]))

    return go(shape)


def all_labelled_trees(n):
    for sh in shapes(n):
        for perm in itertools.permutations(range(1, n + 1)):
            yield fill(sh, perm)


def test_small_trees():
    assert insertion_tree(validate_diagram([(1, 2)])) == 1
    assert insertion_tree(TWO) == (1, 2)
    assert insertion_tree(WHEEL) == ((1, 2), 3)
    assert insertion_tree(FOUR) == (2, ((1, 4), 3))


def test_four_chord_plane_order():
    assert leaves(insertion_tree(FOUR)) == [2, 1, 4, 3]


def test_tree_insertion_edges():
    # edge 1 is the virtual root edge, the rest follow pre-order
    assert tree_insert("T", (1, 2), 1) == ("T", (1, 2))
    assert tree_insert("T", (1, 2), 2) == (("T", 1), 2)
    assert tree_insert("T", (1, 2), 3) == (1, ("T", 2))
    assert edge_count((1, 2)) == 3
    with pytest.raises(TreeError):
        tree_insert("T", (1, 2), 4)


def test_branch_left_vectors():
    assert branch_left_vector(TWO) == (0, 1)
    assert branch_left_plane(insert(TWO, TWO, 1)) == (0, 1, 0, 2)
    assert branch_left_plane(insert(TWO, TWO, 2)) == (0, 1, 1, 1)
    assert branch_left_vector(insert(TWO, TWO, 2)) == (0, 1, 1, 1)
    # the k = 1 and k = 3 insertions share the multiset of values
    assert sorted(branch_left_vector(insert(TWO, TWO, 3))) == [0, 0, 1, 2]
    assert sorted(branch_left_vector(insert(TWO, TWO, 1))) == [0, 0, 1, 2]


def test_branch_left_counts_right_edges():
    t = ((1, 2), (3, 4))
    assert branch_left(t) == {1: 0, 2: 1, 3: 0, 4: 2}


@pytest.mark.parametrize("n", range(1, 6))
def test_admissible_trees_are_exactly_insertion_trees(n):
    trees = {insertion_tree(C) for C in enumerate_connected(n)}
    admissible = {t for t in all_labelled_trees(n) if is_admissible(t)}
    assert admissible == trees


@pytest.mark.parametrize("n", range(1, 7))
def test_tree_properties(n):
    seen = set()
    for C in enumerate_connected(n):
        t = insertion_tree(C)
        assert is_admissible(t)
        assert fully_right_leaf(t) == C.base
        assert diagram_from_tree(t) == C
        seen.add(t)
    assert len(seen) == sum(1 for _ in enumerate_connected(n))


def test_admissibility_rejects_bad_labels():
    assert not is_admissible((1, 1))
    assert not is_admissible((2, 3))
    assert not is_admissible((2, 1))
    with pytest.raises(TreeError):
        diagram_from_tree((2, 1))


def test_diagram_from_tree_decorations():
    C = diagram_from_tree(((1, 2), 3), {1: 1, 2: 1, 3: 2})
    assert C == validate_diagram([(1, 4), (2, 5), (3, 6)], [1, 1, 2])


def test_shuffle_example():
    u1, u2 = PreLabel("under", 1), PreLabel("under", 2)
    o1, o2 = PreLabel("over", 1), PreLabel("over", 2)
    got = set(shuffles([u1, u2], [o1, o2]))
    assert got == {
        (u1, u2, o1, o2),
        (u1, o1, u2, o2),
        (u1, o1, o2, u2),
        (o1, u1, u2, o2),
        (o1, u1, o2, u2),
        (o1, o2, u1, u2),
    }
    assert len(list(shuffles([u1, u2], [o1, o2]))) == 6


def test_label_order():
    u, o = PreLabel("under", 1), PreLabel("over", 1)
    assert label_less(3, u)
    assert not label_less(u, 3)
    assert label_less(PreLabel("under", 1), PreLabel("under", 2))
    with pytest.raises(Undecidable):
        label_less(u, o)
    assert repr(u) == "_1" and repr(o) == "^1"


def test_smallest_removable_subtree_and_removal():
    t = insertion_tree(WHEEL)
    path = smallest_removable_subtree(t)
    assert path == (0, 0)
    assert remove_subtree(t, path) == (2, 3)
    with pytest.raises(TreeError):
        remove_subtree(t, ())
    with pytest.raises(TreeError):
        smallest_removable_subtree(1)


def test_virtual_insertion():
    assert virtual_insert((1, 2), 1) == (MARK, (1, 2))
    assert len(list(nodes_preorder(virtual_insert((1, 2), 3)))) == 5


def _splits(max_total):
    groups = defaultdict(list)
    for n in range(2, max_total + 1):
        for C in enumerate_connected(n):
            D1, D2 = diamond_split(C)
            groups[(D1, D2)].append(C)
    return groups


SPLITS_5 = _splits(5)


def test_diamond_products_match_brute_force():
    for (D1, D2), cs in SPLITS_5.items():
        assert sorted(c.pairs for c in diamond_products(D1, D2)) == sorted(c.pairs for c in cs)


def test_labelings_match_brute_force_and_binomial_counts():
    for (D1, D2), cs in SPLITS_5.items():
        H1, H2 = insertion_tree(D1), insertion_tree(D2)
        labs = admissible_labelings(H1, H2, D2.base)
        assert len(labs) == len(set(labs))
        assert set(labs) == {insertion_tree(C) for C in cs}
        by_base = defaultdict(int)
        for C in cs:
            by_base[C.base - D2.base] += 1
        for l, count in by_base.items():
            assert 1 <= l <= D1.base
            assert count == comb(D2.base + l - 1, l)


def test_labelings_reject_mismatched_base():
    with pytest.raises(TreeError):
        admissible_labelings((1, 2), (1, 2), b2=1)


def test_diamond_split_example():
    D1, D2 = diamond_split(FOUR)
    assert D1.pairs == ((1, 2),)
    assert insertion_tree(D2) == ((1, 3), 2)
    assert D2.base == 2
    with pytest.raises(DiagramError):
        diamond_split(validate_diagram([(1, 2)]))


@pytest.mark.parametrize("total", range(3, 6))
def test_threeway_cases(total):
    for a in range(1, total):
        for Cp in enumerate_connected(a):
            for C2 in enumerate_connected(total - a):
                for k in range(1, 2 * C2.size):
                    case, D1, D2 = threeway_cases(Cp, C2, k)
                    assert diamond_split(insert(Cp, C2, k)) == (D1, D2)
                    if C2.size > 1:
                        left = diamond_split(C2)[0]
                        assert case == ("root" if k == 1 else "left" if k <= 2 * left.size else "right")


def test_json_and_dot():
    t = insertion_tree(FOUR)
    assert tree_to_json(t) == [2, [[1, 4], 3]]
    assert tree_from_json(tree_to_json(t)) == t
    assert tree_from_json("[1, 2]") == (1, 2)
    with pytest.raises(TreeError):
        tree_from_json([1, 2, 3])
    assert tree_str(t) == "(2,((1,4),3))"
    dot = tree_to_dot(insertion_tree(WHEEL))
    assert dot.count('[label="1"]') == 1 and dot.count("shape=point") == 2
    assert tree_to_dot(1).count("label=") == 1

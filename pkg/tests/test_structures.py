import pytest
from hypothesis import given, strategies as st

from homorder.structures import (
    InvalidStructureError,
    OrientedPath,
    OrientedTree,
    arc_level,
    format_tree,
    height,
    is_zigzag,
    iter_paths,
    level_map,
    parse_structure,
    path_to_tree,
    to_dot,
    tree_is_path,
    zigzag,
)

paths = st.text(alphabet="FB", max_size=12).map(OrientedPath)


def test_path_basics():
    p = OrientedPath("FFB")
    assert p.n_arcs == 3 and p.n_vertices == 4
    assert p.reverse().directions == "FBB"
    assert p.concat(OrientedPath("F")).directions == "FFBF"


def test_path_rejects_bad_characters():
    with pytest.raises((InvalidStructureError, ValueError)):
        OrientedPath("FX")


def test_tree_validation():
    OrientedTree(3, ((0, 1), (1, 2)))
    with pytest.raises(InvalidStructureError):
        OrientedTree(3, ((0, 1),))  # disconnected
    with pytest.raises(InvalidStructureError):
        OrientedTree(2, ((0, 1), (1, 0)))  # anti-parallel pair
    with pytest.raises(InvalidStructureError):
        OrientedTree(3, ((0, 1), (0, 1), (1, 2)))  # duplicate arc


def test_level_map_known_values():
    # the smallest height-3 core beyond the directed path
    assert list(level_map(OrientedPath("FFBFF")).levels) == [0, 1, 2, 1, 2, 3]
    assert height(OrientedPath("FFBFF")) == 3
    assert height(OrientedPath("")) == 0
    assert height(OrientedPath("FFFF")) == 4


def test_arc_level():
    p = OrientedPath("FFBFF")
    assert [arc_level(p, i) for i in range(5)] == [1, 2, 2, 2, 3]


def test_zigzag():
    assert zigzag(4).directions == "FBFB"
    assert zigzag(3, "B").directions == "BFB"
    assert is_zigzag(zigzag(7))
    assert not is_zigzag(OrientedPath("FFB"))
    assert height(zigzag(6)) == 1


def test_path_tree_roundtrip():
    p = OrientedPath("FBFF")
    t = path_to_tree(p)
    back = tree_is_path(t)
    assert back is not None
    assert back.directions in (p.directions, p.reverse().directions)


def test_tree_is_path_rejects_branching():
    star = OrientedTree(4, ((0, 1), (0, 2), (0, 3)))
    assert tree_is_path(star) is None


def test_parse_and_format():
    assert parse_structure("FFB").directions == "FFB"
    t = OrientedTree(4, ((0, 1), (2, 1), (1, 3)))
    assert parse_structure(format_tree(t)) == t


def test_to_dot_mentions_all_arcs():
    dot = to_dot(OrientedPath("FB"))
    assert dot.count("->") == 2


def test_iter_paths_counts():
    assert sum(1 for _ in iter_paths(4)) == 1 + 2 + 4 + 8 + 16
    lens = [p.n_arcs for p in iter_paths(3)]
    assert lens == sorted(lens)


@given(paths)
def test_reverse_is_involution(p):
    assert p.reverse().reverse() == p


@given(paths)
def test_height_invariant_under_reversal(p):
    assert height(p) == height(p.reverse())


@given(paths, paths, paths)
def test_concat_is_associative(a, b, c):
    assert a.concat(b).concat(c) == a.concat(b.concat(c))


@given(paths)
def test_level_map_spans_from_zero_to_height(p):
    lm = level_map(p)
    assert min(lm.levels) == 0
    assert max(lm.levels) == height(p)
    for i, d in enumerate(p.directions):
        delta = lm[i + 1] - lm[i]
        assert delta == (1 if d == "F" else -1)

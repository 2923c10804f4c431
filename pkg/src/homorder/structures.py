"""Oriented paths and trees, and their level/height structure.

A path is canonically a direction string over {F, B}: arc i joins vertices
i-1 and i, oriented (i-1)->i for F and i->(i-1) for B.  Trees are arc lists
over dense integer vertex labels.  Everything here is immutable and pure.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

FORWARD = "F"
BACKWARD = "B"

# lexicographic order with F < B (plain string order would put B first)
_DIR_KEY = {FORWARD: 0, BACKWARD: 1}


class InvalidStructureError(ValueError):
    """Raised when a path/tree fails its structural invariants."""


def _dir_key(directions: str) -> tuple[int, ...]:
    return tuple(_DIR_KEY[c] for c in directions)


@dataclass(frozen=True)
class OrientedPath:
    """An oriented path with n arcs over implicit vertices 0..n."""

    directions: str = ""

    def __post_init__(self) -> None:
        bad = set(self.directions) - {FORWARD, BACKWARD}
        if bad:
            raise InvalidStructureError(f"bad direction characters: {sorted(bad)}")

    @property
    def n_arcs(self) -> int:
        return len(self.directions)

    @property
    def n_vertices(self) -> int:
        return len(self.directions) + 1

    @property
    def initial(self) -> int:
        return 0

    @property
    def terminal(self) -> int:
        return self.n_arcs

    def reverse(self) -> "OrientedPath":
        flipped = "".join(
            FORWARD if c == BACKWARD else BACKWARD for c in self.directions
        )
        return OrientedPath(flipped[::-1])

    def concat(self, other: "OrientedPath") -> "OrientedPath":
        return OrientedPath(self.directions + other.directions)

    def __add__(self, other: "OrientedPath") -> "OrientedPath":
        return self.concat(other)

    def arc(self, i: int) -> tuple[int, int]:
        """The i-th arc (0-based) as an ordered (tail, head) pair."""
        if not 0 <= i < self.n_arcs:
            raise IndexError(f"arc index {i} out of range")
        if self.directions[i] == FORWARD:
            return (i, i + 1)
        return (i + 1, i)

    def __str__(self) -> str:
        return self.directions


@dataclass(frozen=True)
class OrientedTree:
    """An orientation of an undirected tree on vertices 0..vertex_count-1."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs)))
        n = self.vertex_count
        if n < 1:
            raise InvalidStructureError("a tree needs at least one vertex")
        if len(self.arcs) != n - 1:
            raise InvalidStructureError(
                f"a tree on {n} vertices needs {n - 1} arcs, got {len(self.arcs)}"
            )
        seen: set[frozenset[int]] = set()
        for (u, v) in self.arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidStructureError(f"arc ({u},{v}) out of range")
            if u == v:
                raise InvalidStructureError(f"self-loop at {u}")
            e = frozenset((u, v))
            if e in seen:
                raise InvalidStructureError(f"duplicate/anti-parallel arc on {{{u},{v}}}")
            seen.add(e)
        # arc count is right and there are no repeats, so connectivity
        # is the only thing left to check
        if n > 1 and len(_component(self, 0)) != n:
            raise InvalidStructureError("underlying graph is not connected")


def _component(tree: OrientedTree, start: int) -> set[int]:
    adj = undirected_adjacency(tree)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


@lru_cache(maxsize=None)
def undirected_adjacency(tree: OrientedTree) -> tuple[tuple[int, ...], ...]:
    adj: list[list[int]] = [[] for _ in range(tree.vertex_count)]
    for (u, v) in tree.arcs:
        adj[u].append(v)
        adj[v].append(u)
    return tuple(tuple(sorted(a)) for a in adj)


@dataclass(frozen=True)
class LevelMap:
    """The unique min-0 vertex leveling: level(head) = level(tail) + 1."""

    levels: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.levels[v]

    @property
    def max_level(self) -> int:
        return max(self.levels)


@lru_cache(maxsize=None)
def path_to_tree(path: OrientedPath) -> OrientedTree:
    arcs = tuple(path.arc(i) for i in range(path.n_arcs))
    return OrientedTree(path.n_vertices, arcs)


def tree_is_path(tree: OrientedTree) -> Optional[OrientedPath]:
    """Recover a direction string if every vertex has degree <= 2.

    Of the two traversal directions, returns the lexicographically smaller
    string under F < B.  Returns None for genuine (branching) trees.
    """
    adj = undirected_adjacency(tree)
    if any(len(a) > 2 for a in adj):
        return None
    if tree.vertex_count == 1:
        return OrientedPath("")
    ends = [v for v in range(tree.vertex_count) if len(adj[v]) == 1]
    arc_set = set(tree.arcs)
    candidates = []
    for start in ends:
        dirs = []
        prev, cur = -1, start
        while True:
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                break
            (nxt,) = nxts
            dirs.append(FORWARD if (cur, nxt) in arc_set else BACKWARD)
            prev, cur = cur, nxt
        candidates.append("".join(dirs))
    return OrientedPath(min(candidates, key=_dir_key))


def _as_tree(g: OrientedPath | OrientedTree) -> OrientedTree:
    if isinstance(g, OrientedPath):
        return path_to_tree(g)
    return g


@lru_cache(maxsize=None)
def level_map(g: OrientedPath | OrientedTree) -> LevelMap:
    """Propagate levels along arcs, then shift so the minimum is 0."""
    tree = _as_tree(g)
    heads = {(u, v): True for (u, v) in tree.arcs}
    adj = undirected_adjacency(tree)
    levels = [0] * tree.vertex_count
    seen = [False] * tree.vertex_count
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                levels[v] = levels[u] + (1 if (u, v) in heads else -1)
                queue.append(v)
    lo = min(levels)
    return LevelMap(tuple(l - lo for l in levels))


def height(g: OrientedPath | OrientedTree) -> int:
    """Minimum k with g -> P_k, i.e. the maximum level."""
    return level_map(g).max_level


def arc_level(path: OrientedPath, i: int) -> int:
    """Level of arc i: the greater level of its two endpoints."""
    if not 0 <= i < path.n_arcs:
        raise IndexError(f"arc index {i} out of range for {path.n_arcs}-arc path")
    lm = level_map(path)
    return max(lm[i], lm[i + 1])


def is_zigzag(path: OrientedPath) -> bool:
    d = path.directions
    return len(d) >= 1 and all(d[i] != d[i + 1] for i in range(len(d) - 1))


def zigzag(n: int, start: str = FORWARD) -> OrientedPath:
    """The n-arc path with strictly alternating directions."""
    if n < 1:
        raise InvalidStructureError("a zig-zag must have at least one arc")
    if start not in (FORWARD, BACKWARD):
        raise InvalidStructureError(f"bad start direction {start!r}")
    other = BACKWARD if start == FORWARD else FORWARD
    return OrientedPath((start + other) * (n // 2) + (start if n % 2 else ""))


# --- text formats ----------------------------------------------------------

def parse_path(text: str) -> OrientedPath:
    line = text.strip()
    return OrientedPath(line)


def parse_tree(text: str) -> OrientedTree:
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines or not lines[0].startswith("tree"):
        raise InvalidStructureError('tree files start with a "tree <n>" line')
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise InvalidStructureError(f"bad tree header: {lines[0]!r}") from exc
    arcs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidStructureError(f"bad arc line: {ln!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    return OrientedTree(n, tuple(arcs))


def parse_structure(text: str) -> OrientedPath | OrientedTree:
    stripped = text.strip()
    if stripped.startswith("tree"):
        return parse_tree(text)
    return parse_path(text)


def format_tree(tree: OrientedTree) -> str:
    lines = [f"tree {tree.vertex_count}"]
    lines.extend(f"{u} {v}" for (u, v) in tree.arcs)
    return "\n".join(lines) + "\n"


def to_dot(g: OrientedPath | OrientedTree, name: str = "g") -> str:
    """Graphviz DOT with same-rank hints for vertices at equal level."""
    tree = _as_tree(g)
    lm = level_map(tree)
    by_level: dict[int, list[int]] = {}
    for v in range(tree.vertex_count):
        by_level.setdefault(lm[v], []).append(v)
    out = [f"digraph {name} {{", "  rankdir=BT;"]
    for lvl in sorted(by_level):
        members = " ".join(f"v{v};" for v in by_level[lvl])
        out.append(f"  {{ rank=same; {members} }}")
    for v in range(tree.vertex_count):
        out.append(f'  v{v} [label="{v} (l={lm[v]})"];')
    for (u, v) in tree.arcs:
        out.append(f"  v{u} -> v{v};")
    out.append("}")
    return "\n".join(out) + "\n"


def iter_paths(max_arcs: int, min_arcs: int = 0) -> Iterator[OrientedPath]:
    """All direction strings, shortest first, lexicographic with F < B."""
    for n in range(min_arcs, max_arcs + 1):
        frontier = [""]
        for _ in range(n):
            frontier = [s + c for s in frontier for c in (FORWARD, BACKWARD)]
        for s in frontier:
            yield OrientedPath(s)

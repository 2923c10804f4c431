"""Homomorphism engine for oriented trees and paths.

Two independent deciders: a naive exhaustive backtracker (`find_hom_brute`,
the reference oracle) and a polynomial tree-DP solver (`find_hom_dp`).  The
DP also powers backtrack-free enumeration: after a leaf-to-root consistency
pass, assigning images root-down never dead-ends, so enumeration cost is
proportional to the number of homomorphisms.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from .structures import (
    OrientedPath,
    OrientedTree,
    _as_tree,
    level_map,
    undirected_adjacency,
)

Graphish = OrientedPath | OrientedTree

DEFAULT_ENUM_CAP = 10**6
DEFAULT_NODE_BUDGET = 10**7


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search ran past its configured node budget."""


@dataclass(frozen=True)
class Homomorphism:
    """An arc-preserving vertex map between two oriented trees."""

    source: OrientedTree
    target: OrientedTree
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mapping) != self.source.vertex_count:
            raise ValueError("mapping length != source vertex count")

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def is_valid(self) -> bool:
        target_arcs = set(self.target.arcs)
        return all(
            (self.mapping[u], self.mapping[v]) in target_arcs
            for (u, v) in self.source.arcs
        )

    def validate(self) -> "Homomorphism":
        target_arcs = set(self.target.arcs)
        for (u, v) in self.source.arcs:
            if (self.mapping[u], self.mapping[v]) not in target_arcs:
                raise ValueError(
                    f"arc ({u},{v}) maps to non-arc ({self.mapping[u]},{self.mapping[v]})"
                )
        return self

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.mapping)

    def is_surjective(self) -> bool:
        return len(self.image) == self.target.vertex_count

    def is_injective(self) -> bool:
        return len(self.image) == len(self.mapping)

    def compose(self, outer: "Homomorphism") -> "Homomorphism":
        """outer o self, a homomorphism source -> outer.target."""
        if outer.source != self.target:
            raise ValueError("composition mismatch: outer.source != self.target")
        return Homomorphism(
            self.source, outer.target, tuple(outer.mapping[t] for t in self.mapping)
        )

    def to_json_dict(self) -> dict:
        return {"map": list(self.mapping)}


def hom_from_json(source: Graphish, target: Graphish, data: dict) -> Homomorphism:
    h = Homomorphism(_as_tree(source), _as_tree(target), tuple(data["map"]))
    return h.validate()


def identity_hom(g: Graphish) -> Homomorphism:
    tree = _as_tree(g)
    return Homomorphism(tree, tree, tuple(range(tree.vertex_count)))


# --- rooted view and adjacency caches --------------------------------------

@lru_cache(maxsize=None)
def _rooted(tree: OrientedTree):
    """BFS order from vertex 0, parents, and arc orientation toward parent.

    up_arc[v] is True when the tree holds the arc (parent[v], v).
    """
    adj = undirected_adjacency(tree)
    arc_set = set(tree.arcs)
    order = [0]
    parent = [-1] * tree.vertex_count
    up_arc = [False] * tree.vertex_count
    seen = [False] * tree.vertex_count
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                up_arc[v] = (u, v) in arc_set
                order.append(v)
                queue.append(v)
    return tuple(order), tuple(parent), tuple(up_arc)


@lru_cache(maxsize=None)
def _out_adj(tree: OrientedTree) -> tuple[frozenset[int], ...]:
    out: list[set[int]] = [set() for _ in range(tree.vertex_count)]
    for (u, v) in tree.arcs:
        out[u].add(v)
    return tuple(frozenset(s) for s in out)


@lru_cache(maxsize=None)
def _in_adj(tree: OrientedTree) -> tuple[frozenset[int], ...]:
    inn: list[set[int]] = [set() for _ in range(tree.vertex_count)]
    for (u, v) in tree.arcs:
        inn[v].add(u)
    return tuple(frozenset(s) for s in inn)


def _consistent_domains(
    src: OrientedTree,
    tgt: OrientedTree,
    forced: Optional[dict[int, int]] = None,
) -> Optional[list[tuple[int, ...]]]:
    """Leaf-to-root arc consistency.  None when some domain empties.

    After this pass, any root-down assignment that respects the parent
    constraint extends to a full homomorphism.
    """
    order, parent, up_arc = _rooted(src)
    out, inn = _out_adj(tgt), _in_adj(tgt)
    all_targets = range(tgt.vertex_count)
    dom: list[set[int]] = [set(all_targets) for _ in range(src.vertex_count)]
    if forced:
        for v, img in forced.items():
            if not 0 <= img < tgt.vertex_count:
                raise ValueError(f"forced image {img} out of range")
            dom[v] &= {img}
    for v in reversed(order):
        if not dom[v]:
            return None
        p = parent[v]
        if p < 0:
            continue
        # keep parent values that have a support in v's domain
        child_dom = dom[v]
        if up_arc[v]:
            dom[p] = {t for t in dom[p] if out[t] & child_dom}
        else:
            dom[p] = {t for t in dom[p] if inn[t] & child_dom}
    if not dom[order[0]]:
        return None
    return [tuple(sorted(d)) for d in dom]


def find_hom_dp(
    src: Graphish, tgt: Graphish, forced: Optional[dict[int, int]] = None
) -> Optional[Homomorphism]:
    """Tree-DP decision with witness; smallest target index wins ties."""
    s, t = _as_tree(src), _as_tree(tgt)
    dom = _consistent_domains(s, t, forced)
    if dom is None:
        return None
    order, parent, up_arc = _rooted(s)
    out, inn = _out_adj(t), _in_adj(t)
    mapping = [-1] * s.vertex_count
    for v in order:
        p = parent[v]
        if p < 0:
            mapping[v] = dom[v][0]
            continue
        allowed = out[mapping[p]] if up_arc[v] else inn[mapping[p]]
        mapping[v] = next(x for x in dom[v] if x in allowed)
    return Homomorphism(s, t, tuple(mapping))


def find_hom_brute(
    src: Graphish,
    tgt: Graphish,
    budget: int = DEFAULT_NODE_BUDGET,
    forced: Optional[dict[int, int]] = None,
) -> Optional[Homomorphism]:
    """Reference oracle: exhaustive backtracking in vertex-index order.

    Independent of the DP solver on purpose; no consistency preprocessing.
    Raises SearchBudgetExceeded past `budget` assignment attempts.
    """
    s, t = _as_tree(src), _as_tree(tgt)
    n, m = s.vertex_count, t.vertex_count
    arc_set = set(t.arcs)
    # arcs of s incident to v whose other endpoint has a smaller index
    earlier: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for (u, v) in s.arcs:
        earlier[max(u, v)].append((u, v))
    mapping = [-1] * n
    nodes = 0

    def extend(v: int) -> bool:
        nonlocal nodes
        if v == n:
            return True
        choices = (
            (forced[v],) if forced and v in forced else range(m)
        )
        for img in choices:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"brute search exceeded {budget} nodes")
            mapping[v] = img
            ok = all(
                (mapping[a], mapping[b]) in arc_set for (a, b) in earlier[v]
            )
            if ok and extend(v + 1):
                return True
        mapping[v] = -1
        return False

    if extend(0):
        return Homomorphism(s, t, tuple(mapping))
    return None


def iter_homs(
    src: Graphish,
    tgt: Graphish,
    forced: Optional[dict[int, int]] = None,
    injective: bool = False,
) -> Iterator[Homomorphism]:
    """Stream all homomorphisms in deterministic order.

    Without the injectivity constraint this is backtrack-free (consistency
    pass first), so the cost is proportional to the number of results.
    """
    s, t = _as_tree(src), _as_tree(tgt)
    dom = _consistent_domains(s, t, forced)
    if dom is None:
        return
    order, parent, up_arc = _rooted(s)
    out, inn = _out_adj(t), _in_adj(t)
    n = s.vertex_count
    mapping = [-1] * n
    used = [0] * t.vertex_count

    def rec(i: int) -> Iterator[Homomorphism]:
        if i == n:
            yield Homomorphism(s, t, tuple(mapping))
            return
        v = order[i]
        p = parent[v]
        if p < 0:
            choices = dom[v]
        else:
            allowed = out[mapping[p]] if up_arc[v] else inn[mapping[p]]
            choices = [x for x in dom[v] if x in allowed]
        for img in choices:
            if injective and used[img]:
                continue
            mapping[v] = img
            used[img] += 1
            yield from rec(i + 1)
            used[img] -= 1
        mapping[v] = -1

    yield from rec(0)


@dataclass(frozen=True)
class HomEnumeration:
    homs: tuple[Homomorphism, ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.homs)

    def __iter__(self):
        return iter(self.homs)


def enumerate_homs(
    src: Graphish,
    tgt: Graphish,
    cap: int = DEFAULT_ENUM_CAP,
    forced: Optional[dict[int, int]] = None,
) -> HomEnumeration:
    """All homomorphisms src -> tgt, truncated loudly at `cap`."""
    homs: list[Homomorphism] = []
    truncated = False
    for h in iter_homs(src, tgt, forced):
        if len(homs) >= cap:
            truncated = True
            break
        homs.append(h)
    return HomEnumeration(tuple(homs), truncated)


def count_homs_dp(src: Graphish, tgt: Graphish) -> int:
    """Number of homomorphisms, by product-sum DP (no enumeration)."""
    s, t = _as_tree(src), _as_tree(tgt)
    order, parent, up_arc = _rooted(s)
    out, inn = _out_adj(t), _in_adj(t)
    m = t.vertex_count
    # counts[v][x] = homs of v's subtree with v -> x
    counts: list[list[int]] = [[1] * m for _ in range(s.vertex_count)]
    children: list[list[int]] = [[] for _ in range(s.vertex_count)]
    for v in order[1:]:
        children[parent[v]].append(v)
    for v in reversed(order):
        for c in children[v]:
            for x in range(m):
                nbrs = out[x] if up_arc[c] else inn[x]
                counts[v][x] *= sum(counts[c][y] for y in nbrs)
    return sum(counts[order[0]])


def exists_surjective_hom(src: Graphish, tgt: Graphish) -> Optional[Homomorphism]:
    """First vertex-surjective homomorphism, or None.

    DP feasibility filter first, then backtracking with a still-coverable
    pruning bound: every uncovered target vertex must remain in the domain
    of some unassigned source vertex.
    """
    s, t = _as_tree(src), _as_tree(tgt)
    if s.vertex_count < t.vertex_count:
        return None
    dom = _consistent_domains(s, t)
    if dom is None:
        return None
    order, parent, up_arc = _rooted(s)
    out, inn = _out_adj(t), _in_adj(t)
    n, m = s.vertex_count, t.vertex_count
    covered = [0] * m
    uncovered = m
    # how many unassigned source vertices could still hit each target
    avail = [0] * m
    for d in dom:
        for x in d:
            avail[x] += 1
    mapping = [-1] * n

    def rec(i: int) -> bool:
        nonlocal uncovered
        if uncovered > n - i:
            return False
        if i == n:
            return uncovered == 0
        v = order[i]
        p = parent[v]
        if p < 0:
            choices = dom[v]
        else:
            allowed = out[mapping[p]] if up_arc[v] else inn[mapping[p]]
            choices = [x for x in dom[v] if x in allowed]
        for x in dom[v]:
            avail[x] -= 1
        for img in choices:
            mapping[v] = img
            if not covered[img]:
                uncovered -= 1
            covered[img] += 1
            # every still-uncovered target must stay reachable from the
            # unassigned suffix
            if all(covered[x] or avail[x] for x in range(m)) and rec(i + 1):
                return True
            covered[img] -= 1
            if not covered[img]:
                uncovered += 1
        mapping[v] = -1
        for x in dom[v]:
            avail[x] += 1
        return False

    if rec(0):
        return Homomorphism(s, t, tuple(mapping))
    return None


def iter_surjective_homs(src: Graphish, tgt: Graphish) -> Iterator[Homomorphism]:
    """All vertex-surjective homomorphisms, in enumeration order."""
    s, t = _as_tree(src), _as_tree(tgt)
    if s.vertex_count < t.vertex_count:
        return
    for h in iter_homs(s, t):
        if h.is_surjective():
            yield h


def is_rigid(g: Graphish) -> bool:
    """True iff the only bijective endomorphism is the identity."""
    tree = _as_tree(g)
    ident = tuple(range(tree.vertex_count))
    for h in iter_homs(tree, tree, injective=True):
        if h.mapping != ident:
            return False
    return True


def first_noninjective_endo(g: Graphish) -> Optional[Homomorphism]:
    """First endomorphism that merges two vertices, or None (g is a core)."""
    tree = _as_tree(g)
    for h in iter_homs(tree, tree):
        if not h.is_injective():
            return h
    return None


def find_injective_hom(src: Graphish, tgt: Graphish) -> Optional[Homomorphism]:
    for h in iter_homs(src, tgt, injective=True):
        return h
    return None


def is_isomorphic(g1: Graphish, g2: Graphish) -> bool:
    """Tree isomorphism: equal size plus an injective homomorphism.

    With equal vertex and arc counts an injective homomorphism is an
    arc bijection, hence an isomorphism.
    """
    t1, t2 = _as_tree(g1), _as_tree(g2)
    if t1.vertex_count != t2.vertex_count:
        return False
    return find_injective_hom(t1, t2) is not None


# --- theorem-backed self-check properties ----------------------------------

@lru_cache(maxsize=None)
def _distances(tree: OrientedTree) -> tuple[tuple[int, ...], ...]:
    adj = undirected_adjacency(tree)
    n = tree.vertex_count
    rows = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        rows.append(tuple(dist))
    return tuple(rows)


def check_distance_property(f: Homomorphism) -> bool:
    """No pair of vertices moves farther apart under f (undirected metric)."""
    ds = _distances(f.source)
    dt = _distances(f.target)
    n = f.source.vertex_count
    return all(
        ds[u][v] >= dt[f.mapping[u]][f.mapping[v]]
        for u in range(n)
        for v in range(u + 1, n)
    )


def preserves_level_differences(f: Homomorphism) -> bool:
    """l(f(u)) - l(f(v)) == l(u) - l(v) for all vertex pairs."""
    ls = level_map(f.source)
    lt = level_map(f.target)
    n = f.source.vertex_count
    if n == 0:
        return True
    shift = lt[f.mapping[0]] - ls[0]
    return all(lt[f.mapping[v]] - ls[v] == shift for v in range(n))


# --- query object ----------------------------------------------------------

@dataclass(frozen=True)
class HomQuery:
    """A declarative homomorphism question."""

    source: OrientedTree
    target: OrientedTree
    mode: str = "exists"  # exists | enumerate | count
    constraints: dict[int, int] = field(default_factory=dict)
    surjective_only: bool = False
    cap: int = DEFAULT_ENUM_CAP

    def __post_init__(self) -> None:
        for v, img in self.constraints.items():
            if not 0 <= img < self.target.vertex_count:
                raise ValueError(f"forced image {v}->{img} out of target range")


def run_query(q: HomQuery):
    if q.mode == "exists":
        if q.surjective_only:
            if q.constraints:
                for h in iter_homs(q.source, q.target, forced=q.constraints):
                    if h.is_surjective():
                        return h
                return None
            return exists_surjective_hom(q.source, q.target)
        return find_hom_dp(q.source, q.target, forced=q.constraints or None)
    if q.mode == "enumerate":
        result = enumerate_homs(q.source, q.target, q.cap, q.constraints or None)
        if q.surjective_only:
            return HomEnumeration(
                tuple(h for h in result if h.is_surjective()), result.truncated
            )
        return result
    if q.mode == "count":
        if q.surjective_only or q.constraints:
            result = enumerate_homs(q.source, q.target, q.cap, q.constraints or None)
            homs = [h for h in result if not q.surjective_only or h.is_surjective()]
            return len(homs)
        return count_homs_dp(q.source, q.target)
    raise ValueError(f"unknown query mode {q.mode!r}")

"""The homomorphism order: comparability, cores, intervals, density search."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .structures import (
    OrientedPath,
    OrientedTree,
    _as_tree,
    height,
    iter_paths,
    tree_is_path,
)
from .homs import (
    Homomorphism,
    find_hom_dp,
    first_noninjective_endo,
    identity_hom,
)
from . import catalog


class CoreBudgetExceeded(RuntimeError):
    """Input too large for the configured core-search budget."""


Graphish = OrientedPath | OrientedTree

DEFAULT_CORE_VERTEX_BUDGET = 200
DEFAULT_BETWEEN_MAX_ARCS = 20


def leq(g1: Graphish, g2: Graphish) -> bool:
    """g1 <= g2 in the homomorphism order."""
    return find_hom_dp(g1, g2) is not None


def hom_equivalent(g1: Graphish, g2: Graphish) -> bool:
    return leq(g1, g2) and leq(g2, g1)


def incomparable(g1: Graphish, g2: Graphish) -> bool:
    return not leq(g1, g2) and not leq(g2, g1)


def strictly_less(g1: Graphish, g2: Graphish) -> bool:
    return leq(g1, g2) and not leq(g2, g1)


@dataclass(frozen=True)
class CoreResult:
    core: OrientedTree
    retraction: Homomorphism  # input -> core

    def core_as_path(self) -> Optional[OrientedPath]:
        return tree_is_path(self.core)

    def to_json_dict(self) -> dict:
        p = self.core_as_path()
        return {
            "core": p.directions if p is not None else {
                "vertex_count": self.core.vertex_count,
                "arcs": [list(a) for a in self.core.arcs],
            },
            "retraction": self.retraction.to_json_dict(),
        }


def core(g: Graphish, vertex_budget: int = DEFAULT_CORE_VERTEX_BUDGET) -> CoreResult:
    """Shrink by proper retractions until no endomorphism merges vertices.

    Each round finds a vertex-merging endomorphism, restricts to the induced
    substructure on its image (a subtree), and composes the maps.
    """
    tree = _as_tree(g)
    if tree.vertex_count > vertex_budget:
        raise CoreBudgetExceeded(
            f"{tree.vertex_count} vertices exceeds budget {vertex_budget}"
        )
    retraction = identity_hom(tree)
    current = tree
    while True:
        f = first_noninjective_endo(current)
        if f is None:
            break
        image = sorted(set(f.mapping))
        relabel = {old: new for new, old in enumerate(image)}
        keep = set(image)
        sub = OrientedTree(
            len(image),
            tuple(
                (relabel[u], relabel[v])
                for (u, v) in current.arcs
                if u in keep and v in keep
            ),
        )
        step = Homomorphism(
            current, sub, tuple(relabel[x] for x in f.mapping)
        ).validate()
        retraction = retraction.compose(step)
        current = sub
    return CoreResult(core=current, retraction=retraction)


def core_is_path(g: Graphish, vertex_budget: int = DEFAULT_CORE_VERTEX_BUDGET) -> bool:
    return tree_is_path(core(g, vertex_budget).core) is not None


def paths_equal_up_to_reversal(p: OrientedPath, q: OrientedPath) -> bool:
    return p.directions in (q.directions, q.reverse().directions)


class Classification(str, Enum):
    UNIVERSAL = "Universal"
    CHAIN = "Chain"
    GAP = "Gap"
    NOT_STRICTLY_ORDERED = "NotStrictlyOrdered"


_CERTIFIED_GAPS = {("P0", "P1"), ("P1", "P2")}


@dataclass(frozen=True)
class IntervalReport:
    lower: OrientedTree
    upper: OrientedTree
    classification: Classification
    witnesses: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "witnesses": self.witnesses,
        }


def _bottom_label(g: Graphish) -> Optional[str]:
    if height(g) > 3:
        return None
    try:
        p = core(g).core_as_path()
    except CoreBudgetExceeded:
        return None
    if p is None:
        return None
    return catalog.identify_bottom_element(p)


def classify_interval(g1: Graphish, g2: Graphish) -> IntervalReport:
    """Universal when height >= 4; otherwise the interval sits in the
    bottom chain (Chain), with Gap for the two certified consecutive pairs."""
    t1, t2 = _as_tree(g1), _as_tree(g2)
    if not strictly_less(t1, t2):
        return IntervalReport(
            t1,
            t2,
            Classification.NOT_STRICTLY_ORDERED,
            {"leq_lower_upper": leq(t1, t2), "leq_upper_lower": leq(t2, t1)},
        )
    h2 = height(t2)
    if h2 >= 4:
        return IntervalReport(
            t1, t2, Classification.UNIVERSAL, {"upper_height": h2}
        )
    lab1, lab2 = _bottom_label(t1), _bottom_label(t2)
    witnesses = {
        "upper_height": h2,
        "lower_chain_position": lab1,
        "upper_chain_position": lab2,
    }
    if (lab1, lab2) in _CERTIFIED_GAPS:
        return IntervalReport(t1, t2, Classification.GAP, witnesses)
    return IntervalReport(t1, t2, Classification.CHAIN, witnesses)


class BetweenStatus(str, Enum):
    FOUND = "found"
    NONE_WITHIN_BOUND = "none-within-bound"
    CERTIFIED_GAP = "certified-gap"


@dataclass(frozen=True)
class BetweenResult:
    status: BetweenStatus
    witness: Optional[Graphish] = None

    def to_json_dict(self) -> dict:
        w = self.witness
        if isinstance(w, OrientedTree):
            w = tree_is_path(w) or w
        if isinstance(w, OrientedPath):
            w = w.directions
        elif isinstance(w, OrientedTree):
            w = {"vertex_count": w.vertex_count, "arcs": [list(a) for a in w.arcs]}
        return {"status": self.status.value, "witness": w}


def iter_small_trees(max_vertices: int, min_vertices: int = 2) -> Iterator[OrientedTree]:
    """All oriented trees up to max_vertices (with labeled duplicates)."""
    for n in range(min_vertices, max_vertices + 1):
        parents = [[]]
        for i in range(1, n):
            parents = [ps + [p] for ps in parents for p in range(i)]
        for ps in parents:
            edges = list(enumerate(ps, start=1))
            for bits in range(1 << len(edges)):
                arcs = tuple(
                    (p, i) if (bits >> k) & 1 == 0 else (i, p)
                    for k, (i, p) in enumerate(edges)
                )
                yield OrientedTree(n, arcs)


def find_between(
    g1: Graphish,
    g2: Graphish,
    max_arcs: int = DEFAULT_BETWEEN_MAX_ARCS,
    include_trees: bool = False,
    tree_vertex_bound: int = 7,
) -> BetweenResult:
    """Bounded exhaustive search for a structure strictly between g1 and g2.

    Paths first (by length, then lexicographic with F < B), then optionally
    small trees.  A miss is reported as none-within-bound except for the
    two paper-certified gaps, which a bounded search cannot refute anyway.
    """
    t1, t2 = _as_tree(g1), _as_tree(g2)
    if not strictly_less(t1, t2):
        raise ValueError("find_between requires strictly ordered endpoints")
    lab1, lab2 = _bottom_label(t1), _bottom_label(t2)
    if (lab1, lab2) in _CERTIFIED_GAPS:
        return BetweenResult(BetweenStatus.CERTIFIED_GAP)
    for cand in iter_paths(max_arcs, min_arcs=1):
        if strictly_less(t1, cand) and strictly_less(cand, t2):
            return BetweenResult(BetweenStatus.FOUND, cand)
    if include_trees:
        for tree in iter_small_trees(tree_vertex_bound):
            if strictly_less(t1, tree) and strictly_less(tree, t2):
                return BetweenResult(BetweenStatus.FOUND, tree)
    return BetweenResult(BetweenStatus.NONE_WITHIN_BOUND)

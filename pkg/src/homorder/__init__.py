"""Homomorphism order of oriented paths and trees.

Deciding and enumerating homomorphisms, computing cores, heights and
levels, classifying intervals, and building/verifying the indicator gadget
that embeds the path order into an interval.
"""
from .structures import (
    BACKWARD,
    FORWARD,
    InvalidStructureError,
    LevelMap,
    OrientedPath,
    OrientedTree,
    arc_level,
    height,
    iter_paths,
    level_map,
    path_to_tree,
    to_dot,
    tree_is_path,
    zigzag,
)
from .homs import (
    Homomorphism,
    HomQuery,
    check_distance_property,
    count_homs_dp,
    enumerate_homs,
    exists_surjective_hom,
    find_hom_brute,
    find_hom_dp,
    is_isomorphic,
    is_rigid,
    preserves_level_differences,
    run_query,
)
from .order import (
    BetweenResult,
    BetweenStatus,
    Classification,
    CoreResult,
    IntervalReport,
    classify_interval,
    core,
    core_is_path,
    find_between,
    hom_equivalent,
    incomparable,
    leq,
)
from .catalog import bottom_chain, directed_path, l_path
from .gadget import (
    GadgetConfig,
    IndicatorGadget,
    build_indicator,
    check_lemma1,
    phi,
    split_at_identified_pair,
    verify_embedding,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

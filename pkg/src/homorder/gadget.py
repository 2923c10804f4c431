"""Indicator gadget: split a core on a surjection collision, wrap it in
zig-zags, substitute it for every arc of a template path, and verify the
embedding conditions by exhaustive search at desk scale.

The gadget path is I = Z1 A^-1 A B C C^-1 Z2, where P = ABC is split at two
vertices identified by a surjective homomorphism onto the upper endpoint,
and Z1, Z2 are even-length zig-zags sitting at the levels of the last arc
of A and the first arc of C.  "Long enough" is unquantified upstream, so
lengths are found by verify-and-grow.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from itertools import islice
from typing import Iterator, Optional, Sequence

from .structures import (
    BACKWARD,
    FORWARD,
    OrientedPath,
    arc_level,
    height,
    is_zigzag,
    iter_paths,
    level_map,
    path_to_tree,
    tree_is_path,
)
from .homs import (
    Homomorphism,
    _in_adj,
    _out_adj,
    count_homs_dp,
    exists_surjective_hom,
    first_noninjective_endo,
    iter_surjective_homs,
)
from .order import core, leq, strictly_less


class GadgetConstructionError(RuntimeError):
    """The construction cannot proceed; surfaced for human inspection."""


class SplitError(GadgetConstructionError):
    """No usable surjection collision split exists."""


@dataclass(frozen=True)
class GadgetConfig:
    """Knobs for gadget construction and Lemma-style verification."""

    zigzag_floor: Optional[int] = None  # default: max(4, 2*arcs(base)), even
    zigzag_ceiling_factor: int = 8
    q_arc_bound: int = 3
    enum_cap: int = 10**6
    split_scan_limit: int = 64
    surjective_replacement_max_arcs: int = 16


@dataclass(frozen=True)
class SplitDecomposition:
    """P = ABC split at a collision pair of a surjection h: P -> P2."""

    p: OrientedPath
    p2: OrientedPath
    v1: int
    v2: int
    h: Homomorphism  # path_to_tree(p) -> path_to_tree(p2), surjective

    def __post_init__(self) -> None:
        n = self.p.n_arcs
        if not 1 <= self.v1 < self.v2 <= n - 1:
            raise SplitError(
                f"collision pair ({self.v1},{self.v2}) leaves an empty segment"
            )
        if self.h.mapping[self.v1] != self.h.mapping[self.v2]:
            raise SplitError("h does not identify the collision pair")
        if not self.h.is_surjective():
            raise SplitError("h is not surjective")
        lm = level_map(self.p)
        if lm[self.v1] != lm[self.v2]:
            raise SplitError("collision vertices at different levels (engine bug)")

    @property
    def a(self) -> OrientedPath:
        return OrientedPath(self.p.directions[: self.v1])

    @property
    def b(self) -> OrientedPath:
        return OrientedPath(self.p.directions[self.v1 : self.v2])

    @property
    def c(self) -> OrientedPath:
        return OrientedPath(self.p.directions[self.v2 :])

    @property
    def a1_dir(self) -> str:
        """Direction of the last arc of A."""
        return self.p.directions[self.v1 - 1]

    @property
    def a2_dir(self) -> str:
        """Direction of the first arc of C."""
        return self.p.directions[self.v2]

    @property
    def a1_level(self) -> int:
        return arc_level(self.p, self.v1 - 1)

    @property
    def a2_level(self) -> int:
        return arc_level(self.p, self.v2)


class BClass(str, Enum):
    NON_DEGENERATE = "NonDegenerate"
    B_EQUALS_Z1 = "B=Z1"
    B_EQUALS_Z2 = "B=Z2"
    B_EQUALS_Z1Z2 = "B=Z1Z2"


def classify_b(dec: SplitDecomposition) -> BClass:
    """Is B a zig-zag at level l(a1), at level l(a2), or one of each?"""
    dirs = dec.p.directions
    b_arcs = list(range(dec.v1, dec.v2))
    # adjacent path vertices differ in level, so v2 > v1 + 1 and B has arcs
    assert b_arcs, "empty B contradicts the level-parity of collision pairs"

    def zig_at(indices: Sequence[int], lvl: int) -> bool:
        seg = "".join(dirs[i] for i in indices)
        return is_zigzag(OrientedPath(seg)) and all(
            arc_level(dec.p, i) == lvl for i in indices
        )

    if zig_at(b_arcs, dec.a1_level):
        return BClass.B_EQUALS_Z1
    if zig_at(b_arcs, dec.a2_level):
        return BClass.B_EQUALS_Z2
    for cut in range(1, len(b_arcs)):
        if zig_at(b_arcs[:cut], dec.a1_level) and zig_at(b_arcs[cut:], dec.a2_level):
            return BClass.B_EQUALS_Z1Z2
    return BClass.NON_DEGENERATE


def iter_split_decompositions(
    p: OrientedPath, p2: OrientedPath, hom_limit: int = 10**4
) -> Iterator[SplitDecomposition]:
    """Surjective homomorphisms in enumeration order, collision pairs in
    lexicographic vertex order; pairs touching either endpoint are skipped
    (they would leave A or C without its anchor arc)."""
    n = p.n_arcs
    for h in islice(iter_surjective_homs(p, p2), hom_limit):
        for v1 in range(1, n - 1):
            for v2 in range(v1 + 1, n):
                if h.mapping[v1] == h.mapping[v2]:
                    yield SplitDecomposition(p, p2, v1, v2, h)


def split_at_identified_pair(p: OrientedPath, p2: OrientedPath) -> SplitDecomposition:
    """First split in deterministic order; raises SplitError if none."""
    for dec in iter_split_decompositions(p, p2):
        return dec
    if exists_surjective_hom(p, p2) is None:
        raise SplitError("no surjective homomorphism onto the upper endpoint")
    raise SplitError("every collision pair touches an endpoint of the path")


class Variant(str, Enum):
    STANDARD = "Standard"
    FALLBACK_B_NE_Z1 = "FallbackBNotZ1"
    FALLBACK_B_EQ_Z1 = "FallbackBEqualsZ1"


def _zigzag_str(arcs_above_glue: bool, length: int) -> str:
    """Even-length alternating run whose arcs sit one level above the glue
    vertex (True) or at the glue vertex's level (False)."""
    if length < 2 or length % 2:
        raise ValueError("zig-zag length must be even and >= 2")
    return ((FORWARD + BACKWARD) if arcs_above_glue else (BACKWARD + FORWARD)) * (
        length // 2
    )


def _z1_string(dec: SplitDecomposition, length: int) -> str:
    # l(a1) equals l(v1) when a1 is forward, l(v1)+1 when backward
    return _zigzag_str(dec.a1_dir == BACKWARD, length)


def _z2_string(dec: SplitDecomposition, length: int) -> str:
    # l(a2) equals l(v2)+1 when a2 is forward, l(v2) when backward
    return _zigzag_str(dec.a2_dir == FORWARD, length)


@dataclass(frozen=True)
class IndicatorGadget:
    path: OrientedPath  # I
    base: OrientedPath  # the path ABC wrapped inside I (P, or a fallback P')
    decomposition: SplitDecomposition  # split of `base` against p2
    z1_len: int
    z2_len: int
    variant: Variant
    p1: OrientedPath
    p2: OrientedPath
    verification: Optional["Lemma1Report"] = None

    @property
    def n_arcs(self) -> int:
        return self.path.n_arcs

    def abc_offset(self) -> int:
        """Vertex index in I where the embedded copy of `base` starts."""
        return self.z1_len + self.decomposition.v1


def assemble_indicator(
    dec: SplitDecomposition,
    z1_len: int,
    z2_len: int,
    p1: OrientedPath,
    variant: Variant = Variant.STANDARD,
) -> IndicatorGadget:
    """I = Z1 A^-1 A B C C^-1 Z2 over the split's base path."""
    a, c = dec.a, dec.c
    dirs = (
        _z1_string(dec, z1_len)
        + a.reverse().directions
        + dec.p.directions
        + c.reverse().directions
        + _z2_string(dec, z2_len)
    )
    gadget = IndicatorGadget(
        path=OrientedPath(dirs),
        base=dec.p,
        decomposition=dec,
        z1_len=z1_len,
        z2_len=z2_len,
        variant=variant,
        p1=p1,
        p2=dec.p2,
    )
    _audit_assembly(gadget)
    return gadget


def _audit_assembly(g: IndicatorGadget) -> None:
    """Recover ABC from I by stripping, and confirm the zig-zag arcs sit at
    the levels of a1 and a2 inside I (computed, not assumed)."""
    dec = g.decomposition
    off = g.z1_len + dec.a.n_arcs
    n = dec.p.n_arcs
    embedded = g.path.directions[off : off + n]
    if embedded != dec.p.directions:
        raise GadgetConstructionError("stripping I does not recover ABC")
    lm = level_map(g.path)
    shift = lm[off] - level_map(dec.p)[0]
    want_z1 = dec.a1_level + shift
    want_z2 = dec.a2_level + shift
    for i in range(g.z1_len):
        if arc_level(g.path, i) != want_z1:
            raise GadgetConstructionError("Z1 arcs are not at level l(a1) in I")
    for i in range(g.path.n_arcs - g.z2_len, g.path.n_arcs):
        if arc_level(g.path, i) != want_z2:
            raise GadgetConstructionError("Z2 arcs are not at level l(a2) in I")


def collapse_map(g: IndicatorGadget) -> Homomorphism:
    """The homomorphism I -> base that folds Z1/Z2 onto a1/a2 and the
    reversed wings back onto A and C."""
    dec = g.decomposition
    n = dec.p.n_arcs
    v1, v2 = dec.v1, dec.v2
    na, nc = dec.a.n_arcs, dec.c.n_arcs
    mid0 = g.z1_len + na
    mapping = [0] * (g.path.n_arcs + 1)
    for j in range(g.z1_len + 1):
        mapping[j] = v1 if (g.z1_len - j) % 2 == 0 else v1 - 1
    for t in range(na + 1):
        mapping[g.z1_len + t] = v1 - t
    for s in range(n + 1):
        mapping[mid0 + s] = s
    for t in range(nc + 1):
        mapping[mid0 + n + t] = n - t
    for j in range(g.z2_len + 1):
        mapping[mid0 + n + nc + j] = v2 if j % 2 == 0 else v2 + 1
    return Homomorphism(
        path_to_tree(g.path), path_to_tree(dec.p), tuple(mapping)
    ).validate()


def fallback_base(
    dec: SplitDecomposition, z1_len: int, z2_len: int, b_class: BClass
) -> tuple[OrientedPath, Variant]:
    """The replacement path P' used when B degenerates into zig-zags.

    Requires l(a1) != l(a2).  Layout follows the two prescribed shapes:
    ABC C^-1 Z2 C C^-1 Z1 A^-1 ABC when B is not a zig-zag at l(a1), and
    ABC C^-1 Z2 A^-1 A Z1 A^-1 ABC when it is.
    """
    if b_class is BClass.NON_DEGENERATE:
        raise ValueError("fallback is only for degenerate B")
    if dec.a1_level == dec.a2_level:
        raise GadgetConstructionError(
            "fallback construction needs a split with l(a1) != l(a2)"
        )
    a, b, c = dec.a, dec.b, dec.c
    abc = dec.p
    z1 = OrientedPath(_z1_string(dec, z1_len))
    z2 = OrientedPath(_z2_string(dec, z2_len))
    if b_class is BClass.B_EQUALS_Z1:
        p_prime = abc + c.reverse() + z2 + a.reverse() + a + z1 + a.reverse() + a + b + c
        variant = Variant.FALLBACK_B_EQ_Z1
    else:
        p_prime = abc + c.reverse() + z2 + c + c.reverse() + z1 + a.reverse() + a + b + c
        variant = Variant.FALLBACK_B_NE_Z1
    return p_prime, variant


# --- arc substitution ------------------------------------------------------

@dataclass(frozen=True)
class PhiImage:
    """Phi_I(Q): one copy of I per arc of Q, reversed copies for backward
    arcs, glued end to end.  Copy j spans vertices j*m .. (j+1)*m."""

    path: OrientedPath
    q: OrientedPath
    copy_arcs: int  # m = arcs of I
    signs: tuple[int, ...]

    @property
    def n_copies(self) -> int:
        return len(self.signs)

    def copy_range(self, j: int) -> tuple[int, int]:
        return (j * self.copy_arcs, (j + 1) * self.copy_arcs)

    def copy_initial_vertex(self, j: int) -> int:
        lo, hi = self.copy_range(j)
        return lo if self.signs[j] > 0 else hi

    def copy_terminal_vertex(self, j: int) -> int:
        lo, hi = self.copy_range(j)
        return hi if self.signs[j] > 0 else lo

    def copies_containing(self, vertices: Sequence[int]) -> list[int]:
        lo, hi = min(vertices), max(vertices)
        return [
            j
            for j in range(self.n_copies)
            if j * self.copy_arcs <= lo and hi <= (j + 1) * self.copy_arcs
        ]


def phi(g: IndicatorGadget, q: OrientedPath) -> PhiImage:
    """Substitute a copy of I for every arc of Q."""
    i_dirs = g.path.directions
    rev_dirs = g.path.reverse().directions
    parts = []
    signs = []
    for ch in q.directions:
        if ch == FORWARD:
            parts.append(i_dirs)
            signs.append(1)
        else:
            parts.append(rev_dirs)
            signs.append(-1)
    return PhiImage(
        path=OrientedPath("".join(parts)),
        q=q,
        copy_arcs=g.path.n_arcs,
        signs=tuple(signs),
    )


def quotient_map(g: IndicatorGadget, image: PhiImage) -> Homomorphism:
    """rho': Phi_I(Q) -> P2, acting as h o rho on every copy.  Well defined
    at copy boundaries because h identifies the split vertices."""
    rho = collapse_map(g)
    h = g.decomposition.h
    m = image.copy_arcs
    total = image.path.n_arcs
    mapping = []
    for pos in range(total + 1):
        j = min(pos // m, image.n_copies - 1)
        inner = pos - j * m if image.signs[j] > 0 else (j + 1) * m - pos
        mapping.append(h.mapping[rho.mapping[inner]])
    return Homomorphism(
        path_to_tree(image.path), path_to_tree(g.p2), tuple(mapping)
    ).validate()


# --- exhaustive verification ----------------------------------------------

class ConditionStatus(str, Enum):
    VERIFIED = "Verified"
    FAILED = "FailedWithWitness"
    TRUNCATED = "Truncated"


@dataclass(frozen=True)
class ConditionReport:
    status: ConditionStatus
    homs_checked: int = 0
    witness: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "status": self.status.value,
            "homs_checked": self.homs_checked,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class Lemma1Report:
    condition_i: ConditionReport
    condition_ii: ConditionReport
    condition_iii: ConditionReport
    q_arc_bound: int
    enum_cap: int

    def all_verified(self) -> bool:
        return all(
            c.status is ConditionStatus.VERIFIED
            for c in (self.condition_i, self.condition_ii, self.condition_iii)
        )

    def any_truncated(self) -> bool:
        return any(
            c.status is ConditionStatus.TRUNCATED
            for c in (self.condition_i, self.condition_ii, self.condition_iii)
        )

    def to_json_dict(self) -> dict:
        return {
            "condition_i": self.condition_i.to_json_dict(),
            "condition_ii": self.condition_ii.to_json_dict(),
            "condition_iii": self.condition_iii.to_json_dict(),
            "q_arc_bound": self.q_arc_bound,
            "enum_cap": self.enum_cap,
        }


# which endpoints of the two copies get identified when I^e1 I^e2 is glued
_IDENTIFIED_ENDPOINTS = {
    (1, 1): ("t", "i"),
    (1, -1): ("t", "t"),
    (-1, 1): ("i", "i"),
    (-1, -1): ("i", "t"),
}


def _check_condition_i(g: IndicatorGadget, qs: list[OrientedPath]) -> ConditionReport:
    checked = 0
    for q in qs:
        img = phi(g, q).path
        checked += 1
        facts = {
            "p1_leq_phi": leq(g.p1, img),
            "phi_leq_p1": leq(img, g.p1),
            "phi_leq_p2": leq(img, g.p2),
            "p2_leq_phi": leq(g.p2, img),
        }
        ok = (
            facts["p1_leq_phi"]
            and not facts["phi_leq_p1"]
            and facts["phi_leq_p2"]
            and not facts["p2_leq_phi"]
        )
        if not ok:
            return ConditionReport(
                ConditionStatus.FAILED,
                checked,
                {"q": q.directions, "relations": facts},
            )
    return ConditionReport(ConditionStatus.VERIFIED, checked)


def _walk_hom_search(
    dirs: str,
    tgt,
    ranges: Optional[Sequence[Optional[tuple[int, int]]]] = None,
    boundary: Optional[int] = None,
    flag_span: Optional[tuple[int, int]] = None,
) -> Optional[tuple[int, ...]]:
    """Layered DP over all homomorphisms from a path into `tgt`.

    The source is the path with direction string `dirs`; position i is its
    i-th vertex.  `ranges`, when given, restricts position i to a closed
    vertex interval.  With `boundary` set, only homomorphisms that visit a
    vertex below AND above the boundary within flag_span count as hits.
    Returns one witness mapping, or None when no homomorphism qualifies.
    Deterministic; exact over the full (possibly astronomically large)
    homomorphism space.
    """
    out = [tuple(sorted(s)) for s in _out_adj(tgt)]
    inn = [tuple(sorted(s)) for s in _in_adj(tgt)]
    n_tgt = tgt.vertex_count
    lo_pos, hi_pos = flag_span if flag_span is not None else (0, len(dirs))

    def flags(pos: int, w: int, fa: bool, fb: bool) -> tuple[bool, bool]:
        if boundary is not None and lo_pos <= pos <= hi_pos:
            fa = fa or w < boundary
            fb = fb or w > boundary
        return fa, fb

    def in_range(pos: int, w: int) -> bool:
        if ranges is None or ranges[pos] is None:
            return True
        lo, hi = ranges[pos]
        return lo <= w <= hi

    layer: dict[tuple[int, bool, bool], Optional[tuple]] = {}
    for w in range(n_tgt):
        if in_range(0, w):
            layer[(w, *flags(0, w, False, False))] = None
    layers = [layer]
    for i, ch in enumerate(dirs):
        nxt: dict[tuple[int, bool, bool], tuple] = {}
        for state in sorted(layers[-1]):
            w, fa, fb = state
            for w2 in (out[w] if ch == FORWARD else inn[w]):
                if not in_range(i + 1, w2):
                    continue
                key = (w2, *flags(i + 1, w2, fa, fb))
                if key not in nxt:
                    nxt[key] = state
        if not nxt:
            return None
        layers.append(nxt)
    accepting = sorted(
        s for s in layers[-1] if boundary is None or (s[1] and s[2])
    )
    if not accepting:
        return None
    state = accepting[0]
    mapping = [state[0]]
    for depth in range(len(layers) - 1, 0, -1):
        state = layers[depth][state]
        mapping.append(state[0])
    return tuple(reversed(mapping))


def _as_witness_hom(
    src_dirs: str, image: PhiImage, mapping: tuple[int, ...]
) -> Homomorphism:
    return Homomorphism(
        path_to_tree(OrientedPath(src_dirs)), path_to_tree(image.path), mapping
    ).validate()


def _check_condition_ii(
    g: IndicatorGadget, qs: list[OrientedPath], enum_cap: int
) -> ConditionReport:
    """No homomorphism I -> Phi(Q) may straddle a copy boundary.

    A homomorphic image of a path is a vertex interval, so straddling means
    some copy boundary lies strictly inside it; that is decided exactly by
    a boundary-crossing DP over the whole homomorphism space.
    """
    covered = 0
    for q in qs:
        image = phi(g, q)
        covered += count_homs_dp(g.path, image.path)
        for j in range(1, image.n_copies):
            hit = _walk_hom_search(
                g.path.directions, path_to_tree(image.path),
                boundary=j * image.copy_arcs,
            )
            if hit is not None:
                witness_hom = _as_witness_hom(g.path.directions, image, hit)
                return ConditionReport(
                    ConditionStatus.FAILED,
                    covered,
                    {
                        "q": q.directions,
                        "boundary_copy": j,
                        "map": list(witness_hom.mapping),
                    },
                )
    return ConditionReport(ConditionStatus.VERIFIED, covered)


def _check_condition_iii(
    g: IndicatorGadget, qs: list[OrientedPath], enum_cap: int
) -> ConditionReport:
    """Endpoint identifications must transfer to the containing copies.

    For each sign case the two-copy gadget path is checked two ways, both
    exact over all homomorphisms: (a) neither half may straddle a copy
    boundary; (b) for every pair of copies whose relevant endpoints differ,
    no homomorphism may place the halves into exactly those copies.
    """
    m = g.path.n_arcs
    i_dirs = g.path.directions
    rev_dirs = g.path.reverse().directions
    covered = 0
    for q in qs:
        image = phi(g, q)
        tgt = path_to_tree(image.path)
        nc = image.n_copies
        mc = image.copy_arcs
        for eps in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            dirs = (i_dirs if eps[0] > 0 else rev_dirs) + (
                i_dirs if eps[1] > 0 else rev_dirs
            )
            covered += count_homs_dp(OrientedPath(dirs), image.path)
            z, z_prime = _IDENTIFIED_ENDPOINTS[eps]
            witness_base = {"q": q.directions, "epsilons": list(eps)}
            for half, span in ((1, (0, m)), (2, (m, 2 * m))):
                for j in range(1, nc):
                    hit = _walk_hom_search(
                        dirs, tgt, boundary=j * mc, flag_span=span
                    )
                    if hit is not None:
                        witness_hom = _as_witness_hom(dirs, image, hit)
                        return ConditionReport(
                            ConditionStatus.FAILED,
                            covered,
                            {
                                **witness_base,
                                "reason": f"copy {half} straddles a boundary",
                                "map": list(witness_hom.mapping),
                            },
                        )
            npos = 2 * m + 1
            for j1 in range(nc):
                for j2 in range(nc):
                    end1 = (
                        image.copy_initial_vertex(j1)
                        if z == "i"
                        else image.copy_terminal_vertex(j1)
                    )
                    end2 = (
                        image.copy_initial_vertex(j2)
                        if z_prime == "i"
                        else image.copy_terminal_vertex(j2)
                    )
                    if end1 == end2:
                        continue
                    r1 = (j1 * mc, (j1 + 1) * mc)
                    r2 = (j2 * mc, (j2 + 1) * mc)
                    mid = (max(r1[0], r2[0]), min(r1[1], r2[1]))
                    if mid[0] > mid[1]:
                        continue
                    ranges: list[Optional[tuple[int, int]]] = []
                    for pos in range(npos):
                        if pos < m:
                            ranges.append(r1)
                        elif pos == m:
                            ranges.append(mid)
                        else:
                            ranges.append(r2)
                    hit = _walk_hom_search(dirs, tgt, ranges=ranges)
                    if hit is not None:
                        witness_hom = _as_witness_hom(dirs, image, hit)
                        return ConditionReport(
                            ConditionStatus.FAILED,
                            covered,
                            {
                                **witness_base,
                                "reason": f"{z}(copy {j1}) != {z_prime}(copy {j2})",
                                "copies": [j1, j2],
                                "map": list(witness_hom.mapping),
                            },
                        )
    return ConditionReport(ConditionStatus.VERIFIED, covered)


def check_lemma1(g: IndicatorGadget, config: GadgetConfig = GadgetConfig()) -> Lemma1Report:
    """Exhaustively check the three embedding conditions for every template
    path with at most q_arc_bound arcs, all four sign cases included."""
    qs = list(iter_paths(config.q_arc_bound, min_arcs=1))
    return Lemma1Report(
        condition_i=_check_condition_i(g, qs),
        condition_ii=_check_condition_ii(g, qs, config.enum_cap),
        condition_iii=_check_condition_iii(g, qs, config.enum_cap),
        q_arc_bound=config.q_arc_bound,
        enum_cap=config.enum_cap,
    )


# --- top-level construction ------------------------------------------------

def _is_path_core(p: OrientedPath) -> bool:
    return first_noninjective_endo(p) is None


def _core_path(p: OrientedPath) -> OrientedPath:
    cp = tree_is_path(core(p).core)
    assert cp is not None, "the core of a path is always a path"
    return cp


def _choose_split(
    base: OrientedPath, p2: OrientedPath, scan_limit: int
) -> tuple[SplitDecomposition, BClass]:
    """First non-degenerate split if any; otherwise the first degenerate one
    with l(a1) != l(a2), which the fallback construction requires."""
    fallback: Optional[tuple[SplitDecomposition, BClass]] = None
    for dec in islice(iter_split_decompositions(base, p2), scan_limit):
        bc = classify_b(dec)
        if bc is BClass.NON_DEGENERATE:
            return dec, bc
        if fallback is None and dec.a1_level != dec.a2_level:
            fallback = (dec, bc)
    if fallback is not None:
        return fallback
    raise SplitError(
        "no usable split: every collision is degenerate with l(a1) == l(a2)"
    )


def _find_surjective_base(
    p: OrientedPath, p2: OrientedPath, max_arcs: int
) -> OrientedPath:
    """A core path p' with p < p' < p2 admitting a surjection onto p2."""
    for cand in iter_paths(max_arcs, min_arcs=p2.n_arcs + 1):
        if not (strictly_less(p, cand) and strictly_less(cand, p2)):
            continue
        cand_core = _core_path(cand)
        if exists_surjective_hom(cand_core, p2) is None:
            continue
        return cand_core
    raise GadgetConstructionError(
        f"no replacement path with a surjection onto the upper endpoint "
        f"within {max_arcs} arcs"
    )


def _even_at_least(x: int) -> int:
    return x + (x % 2)


def build_indicator(
    p1: OrientedPath,
    p2: OrientedPath,
    p: OrientedPath,
    config: GadgetConfig = GadgetConfig(),
) -> IndicatorGadget:
    """Build and verify a gadget for the interval [p1, p2] around p.

    Verify-and-grow: zig-zag lengths start at the floor and increase by 2
    until the exhaustive checks pass or the ceiling is hit.  Degenerate
    splits route through the prescribed fallback path, which is re-split.
    """
    if height(p2) < 4:
        raise GadgetConstructionError("the upper endpoint must have height >= 4")
    if not (strictly_less(p1, p) and strictly_less(p, p2)):
        raise GadgetConstructionError("need p1 < p < p2 strictly")
    base = _core_path(p)
    if exists_surjective_hom(base, p2) is None:
        base = _find_surjective_base(
            base, p2, config.surjective_replacement_max_arcs
        )
    dec, b_class = _choose_split(base, p2, config.split_scan_limit)

    floor = config.zigzag_floor
    if floor is None:
        floor = max(4, 2 * base.n_arcs)
    floor = _even_at_least(floor)
    ceiling = max(floor, config.zigzag_ceiling_factor * base.n_arcs)

    last_report: Optional[Lemma1Report] = None
    for z in range(floor, ceiling + 1, 2):
        if b_class is BClass.NON_DEGENERATE:
            gadget = assemble_indicator(dec, z, z, p1, Variant.STANDARD)
        else:
            p_prime, variant = fallback_base(dec, z, z, b_class)
            prime_dec, prime_class = _choose_split(
                p_prime, p2, config.split_scan_limit
            )
            if prime_class is not BClass.NON_DEGENERATE:
                raise GadgetConstructionError(
                    "fallback path still splits degenerately"
                )
            gadget = assemble_indicator(prime_dec, z, z, p1, variant)
        report = check_lemma1(gadget, config)
        if report.any_truncated():
            raise GadgetConstructionError(
                "enumeration cap hit during verification; raise enum_cap"
            )
        if report.all_verified():
            return replace(gadget, verification=report)
        last_report = report
    raise GadgetConstructionError(
        f"no zig-zag length up to {ceiling} verified; last report: "
        f"{last_report.to_json_dict() if last_report else None}"
    )


# --- embedding audit -------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    pairs_checked: int
    counterexamples: tuple[dict, ...]
    sandwich_failures: tuple[dict, ...]

    @property
    def all_ok(self) -> bool:
        return not self.counterexamples and not self.sandwich_failures

    def to_json_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "counterexamples": list(self.counterexamples),
            "sandwich_failures": list(self.sandwich_failures),
            "all_ok": self.all_ok,
        }


def verify_embedding(
    g: IndicatorGadget,
    sample: Optional[Sequence[OrientedPath]] = None,
    max_arcs: int = 3,
) -> EmbeddingReport:
    """Check leq(Q, Q') <=> leq(Phi(Q), Phi(Q')) over a sample of template
    pairs, and P1 < Phi(Q) < P2 for each non-trivial template."""
    if sample is None:
        sample = list(iter_paths(max_arcs))
    images = {q.directions: phi(g, q).path for q in sample}
    counterexamples = []
    sandwich_failures = []
    for q in sample:
        img = images[q.directions]
        if q.n_arcs >= 1:
            if not (strictly_less(g.p1, img) and strictly_less(img, g.p2)):
                sandwich_failures.append({"q": q.directions})
    for q in sample:
        for q2 in sample:
            lhs = leq(q, q2)
            rhs = leq(images[q.directions], images[q2.directions])
            if lhs != rhs:
                counterexamples.append(
                    {"q": q.directions, "q2": q2.directions, "leq_templates": lhs}
                )
    return EmbeddingReport(
        pairs_checked=len(sample) ** 2,
        counterexamples=tuple(counterexamples),
        sandwich_failures=tuple(sandwich_failures),
    )


# --- derived demo triple ---------------------------------------------------

def find_demo_triple(
    p1: Optional[OrientedPath] = None,
    max_p2_arcs: int = 8,
    max_p_arcs: int = 12,
    split_scan_limit: int = 64,
    require_negative_control: bool = False,
    negctrl_q_bound: int = 3,
) -> tuple[OrientedPath, OrientedPath, OrientedPath]:
    """Bounded search for a triple p1 < p < p2 with height(p2) = 4 where the
    standard (non-degenerate) construction applies.  Deterministic.

    With require_negative_control, only accept triples whose gadget breaks
    when the zig-zags are cut down to length 2, so the "long enough"
    requirement is demonstrably doing work for this gadget.
    """
    if p1 is None:
        p1 = OrientedPath(FORWARD)
    for p2 in iter_paths(max_p2_arcs, min_arcs=4):
        if height(p2) != 4 or not _is_path_core(p2):
            continue
        if not strictly_less(p1, p2):
            continue
        for p in iter_paths(max_p_arcs, min_arcs=p2.n_arcs + 1):
            if not _is_path_core(p):
                continue
            if not (strictly_less(p1, p) and strictly_less(p, p2)):
                continue
            if exists_surjective_hom(p, p2) is None:
                continue
            try:
                dec, bc = _choose_split(p, p2, split_scan_limit)
            except SplitError:
                continue
            if bc is not BClass.NON_DEGENERATE:
                continue
            if require_negative_control:
                stunted = assemble_indicator(dec, 2, 2, p1)
                report = check_lemma1(
                    stunted, GadgetConfig(q_arc_bound=negctrl_q_bound)
                )
                failed = any(
                    c.status is ConditionStatus.FAILED
                    for c in (
                        report.condition_i,
                        report.condition_ii,
                        report.condition_iii,
                    )
                )
                if not failed:
                    continue
            return p1, p, p2
    raise GadgetConstructionError("no demo triple within the search bounds")


# --- bundle serialization --------------------------------------------------

def gadget_to_json_dict(g: IndicatorGadget) -> dict:
    dec = g.decomposition
    return {
        "p1": g.p1.directions,
        "p2": g.p2.directions,
        "base": g.base.directions,
        "i": g.path.directions,
        "a": dec.a.directions,
        "b": dec.b.directions,
        "c": dec.c.directions,
        "v1": dec.v1,
        "v2": dec.v2,
        "h": list(dec.h.mapping),
        "z1_len": g.z1_len,
        "z2_len": g.z2_len,
        "variant": g.variant.value,
        "verification": g.verification.to_json_dict() if g.verification else None,
    }


def gadget_from_json_dict(data: dict) -> IndicatorGadget:
    base = OrientedPath(data["base"])
    p2 = OrientedPath(data["p2"])
    h = Homomorphism(
        path_to_tree(base), path_to_tree(p2), tuple(data["h"])
    ).validate()
    dec = SplitDecomposition(base, p2, data["v1"], data["v2"], h)
    gadget = assemble_indicator(
        dec,
        data["z1_len"],
        data["z2_len"],
        OrientedPath(data["p1"]),
        Variant(data["variant"]),
    )
    if gadget.path.directions != data["i"]:
        raise GadgetConstructionError("bundle gadget path does not re-assemble")
    return gadget

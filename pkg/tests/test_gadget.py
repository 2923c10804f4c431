import json
import math

import pytest

from homorder import gadget
from homorder.gadget import (
    BClass,
    ConditionStatus,
    GadgetConfig,
    SplitError,
    Variant,
    assemble_indicator,
    build_indicator,
    check_lemma1,
    classify_b,
    collapse_map,
    fallback_base,
    find_demo_triple,
    gadget_from_json_dict,
    gadget_to_json_dict,
    phi,
    quotient_map,
    split_at_identified_pair,
    verify_embedding,
)
from homorder.homs import count_homs_dp
from homorder.order import leq, strictly_less
from homorder.structures import OrientedPath, height, iter_paths

P1 = OrientedPath("F")
P = OrientedPath("FFBFFBBFFF")
P2 = OrientedPath("FFFF")


@pytest.fixture(scope="module")
def built():
    g = build_indicator(P1, P2, P, GadgetConfig(q_arc_bound=2))
    assert g.verification is not None and g.verification.all_verified()
    return g


def test_split_known_example():
    # FFBFF maps onto FFF as (0,1,2,1,2,3): first identified non-endpoint
    # pair in lexicographic order is (1, 3)
    dec = split_at_identified_pair(OrientedPath("FFBFF"), OrientedPath("FFF"))
    assert (dec.v1, dec.v2) == (1, 3)
    assert dec.a.directions == "F"
    assert dec.b.directions == "FB"
    assert dec.c.directions == "FF"
    assert classify_b(dec) is BClass.B_EQUALS_Z2


def test_split_requires_surjection_with_collision():
    with pytest.raises(SplitError):
        split_at_identified_pair(OrientedPath("FF"), OrientedPath("FF"))


def test_assembly_shape(built):
    dec = built.decomposition
    expected = (
        built.z1_len
        + dec.a.n_arcs
        + built.base.n_arcs
        + dec.c.n_arcs
        + built.z2_len
    )
    assert built.path.n_arcs == expected
    assert built.variant is Variant.STANDARD
    # the gadget sits strictly inside the interval
    assert strictly_less(built.p1, built.path)
    assert strictly_less(built.path, built.p2)


def test_collapse_and_quotient_maps_validate(built):
    rho = collapse_map(built)
    rho.validate()
    q = OrientedPath("FB")
    image = phi(built, q)
    quotient_map(built, image).validate()


def test_phi_shape(built):
    q = OrientedPath("FBF")
    image = phi(built, q)
    assert image.n_copies == 3
    assert image.copy_arcs == built.path.n_arcs
    assert image.path.n_arcs == 3 * built.path.n_arcs
    # empty template collapses to a single vertex
    assert phi(built, OrientedPath("")).path.n_arcs == 0


def test_phi_is_order_monotone_on_a_sample(built):
    sample = list(iter_paths(2))
    for qa in sample:
        for qb in sample:
            assert leq(qa, qb) == leq(phi(built, qa).path, phi(built, qb).path)


def test_verify_embedding_report(built):
    report = verify_embedding(built, max_arcs=2)
    assert report.all_ok
    assert report.pairs_checked == 7 * 7
    assert not report.counterexamples and not report.sandwich_failures


def test_negative_control_short_zigzags_fail(built):
    stunted = assemble_indicator(built.decomposition, 2, 2, built.p1)
    report = check_lemma1(stunted, GadgetConfig(q_arc_bound=2))
    failed = [
        c
        for c in (report.condition_i, report.condition_ii, report.condition_iii)
        if c.status is ConditionStatus.FAILED
    ]
    assert failed
    assert all(c.witness is not None for c in failed)


def test_growth_is_monotone_spot_check(built):
    bigger = assemble_indicator(
        built.decomposition, built.z1_len + 2, built.z2_len + 2, built.p1
    )
    report = check_lemma1(bigger, GadgetConfig(q_arc_bound=2))
    assert report.all_verified()


def test_fallback_base_rejects_nondegenerate_and_handles_degenerate(built):
    with pytest.raises(ValueError):
        fallback_base(built.decomposition, 4, 4, BClass.NON_DEGENERATE)
    # FFBFF onto FFF degenerates (B is a zig-zag at l(a2)) and the anchor
    # arcs sit at different levels, so the replacement path exists
    dec = split_at_identified_pair(OrientedPath("FFBFF"), OrientedPath("FFF"))
    assert dec.a1_level != dec.a2_level
    p_prime, variant = fallback_base(dec, 4, 4, classify_b(dec))
    assert isinstance(p_prime, OrientedPath)
    assert variant in (Variant.FALLBACK_B_NE_Z1, Variant.FALLBACK_B_EQ_Z1)


def test_bundle_roundtrip(built, tmp_path):
    bundle = gadget_to_json_dict(built)
    text = json.dumps(bundle, sort_keys=True)
    restored = gadget_from_json_dict(json.loads(text))
    assert restored.path == built.path
    assert restored.z1_len == built.z1_len
    assert restored.decomposition == built.decomposition


def test_bundle_tamper_detected(built):
    bundle = gadget_to_json_dict(built)
    bundle["i"] = bundle["i"][:-1] + ("F" if bundle["i"][-1] == "B" else "B")
    with pytest.raises((ValueError, gadget.GadgetConstructionError)):
        gadget_from_json_dict(bundle)


def test_find_demo_triple_is_deterministic():
    t1 = find_demo_triple()
    t2 = find_demo_triple()
    assert t1 == t2
    p1, p, p2 = t1
    assert strictly_less(p1, p) and strictly_less(p, p2)
    assert height(p2) == 4


def test_build_rejects_unordered_input():
    with pytest.raises(gadget.GadgetConstructionError):
        build_indicator(P2, P1, P)


def test_condition_counts_are_astronomical(built):
    # the verified report covers hom spaces far beyond enumeration reach
    q = OrientedPath("FFF")
    image = phi(built, q)
    assert count_homs_dp(built.path, image.path) > 10**6
    assert built.verification.condition_ii.homs_checked > 10**6

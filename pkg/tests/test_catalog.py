import pytest

from homorder.catalog import (
    ChainVerificationError,
    bottom_chain,
    directed_path,
    identify_bottom_element,
    l_path,
)
from homorder.homs import is_isomorphic
from homorder.order import leq, strictly_less
from homorder.structures import OrientedPath, height


def test_directed_path_and_l_path_shapes():
    assert directed_path(3).directions == "FFF"
    assert l_path(0).directions == "FFF"
    assert l_path(1).directions == "FFBFF"
    assert l_path(2).directions == "FFBFBFF"
    for k in range(6):
        assert height(l_path(k)) == 3


def test_l_path_chain_is_reverse_ordered():
    # L_k <= L_m exactly when k >= m
    for k in range(5):
        for m in range(5):
            assert leq(l_path(k), l_path(m)) == (k >= m)


def test_bottom_chain_structure():
    chain = bottom_chain(4)
    elems = list(chain.elements)
    # P0 < P1 < P2 < L_4 < L_3 < L_2 < L_1 < L_0
    for a, b in zip(elems, elems[1:]):
        assert strictly_less(a, b)
    assert chain.labels[0] == "P0"
    assert chain.labels[-1] == "L0"
    assert is_isomorphic(elems[-1], directed_path(3))


def test_bottom_chain_input_validation():
    with pytest.raises(ValueError):
        bottom_chain(-1)
    assert bottom_chain(0).labels == ("P0", "P1", "P2", "L0")


def test_chain_verification_error_is_importable():
    assert issubclass(ChainVerificationError, RuntimeError)


def test_identify_bottom_element():
    assert identify_bottom_element(directed_path(2)) == "P2"
    assert identify_bottom_element(l_path(3)) == "L3"
    assert identify_bottom_element(l_path(3).reverse()) == "L3"
    assert identify_bottom_element(OrientedPath("FFFF")) is None

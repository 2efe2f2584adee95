from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelim.errors import HolomorphyViolation, NotNilpotent, ZeroRank, ZeroScalar
from conelim.forms import ZERO, BinaryForm, X, Y
from conelim.model import (
    BundleModel,
    HitchinPair,
    hitchin_map,
    higgs_power,
    nilpotency_order,
    scale,
    slope,
    validate,
)
from conelim.testkit import GenParams, random_non_nilpotent, random_pair


def test_zero_field_is_valid():
    pair = HitchinPair.from_entries((2, 0, -3), 1, [[0] * 3] * 3)
    assert validate(pair) is pair


def test_fixture_a_is_valid(fixture_a):
    validate(fixture_a)


def test_negative_degree_slot_must_vanish():
    pair = HitchinPair.from_entries((1, 0), 0, [[0, X], [X, 0]])
    with pytest.raises(HolomorphyViolation) as info:
        validate(pair)
    assert info.value.violations == [(1, 0, -1, 1)]


def test_wrong_degree_entry():
    pair = HitchinPair.from_entries((0, 0), 1, [[0, X * X], [0, 0]])
    with pytest.raises(HolomorphyViolation):
        validate(pair)


def test_l_degree_bound_is_configurable():
    pair = HitchinPair.from_entries((0, -1), 0, [[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        validate(pair)
    assert validate(pair, min_l_degree=0) is pair


def test_twists_must_be_sorted():
    with pytest.raises(ValueError):
        BundleModel((0, 1))


def test_bundle_invariants():
    b = BundleModel((1, 0, -2))
    assert (b.rank, b.degree, b.slope, b.coprime) == (3, -1, Fraction(-1, 3), True)
    assert not BundleModel((1, 0, -1)).coprime


def test_hitchin_map_zero_and_fixture(fixture_a):
    assert hitchin_map(HitchinPair.from_entries((0, 0), 1, [[0, 0], [0, 0]])).is_zero()
    assert hitchin_map(fixture_a).coefficients == (ZERO, ZERO, ZERO)


def test_hitchin_map_rank2():
    pair = HitchinPair.from_entries((0, 0), 1, [[0, X], [Y, 0]])
    tr, det = hitchin_map(pair).coefficients
    assert tr == ZERO
    assert det == -(X * Y)


def test_hitchin_map_trace_and_determinant():
    a = BinaryForm([1, 2])
    d = BinaryForm([3, -1])
    pair = HitchinPair.from_entries((0, 0), 1, [[a, X], [Y, d]])
    tr, det = hitchin_map(pair).coefficients
    assert tr == a + d
    assert det == a * d - X * Y


def test_nilpotency_orders(fixture_a, fixture_b):
    assert nilpotency_order(HitchinPair.from_entries((0, 0), 1, [[0, 0], [0, 0]])) == 1
    assert nilpotency_order(fixture_a) == 3
    assert nilpotency_order(fixture_b) == 2
    with pytest.raises(NotNilpotent):
        nilpotency_order(HitchinPair.from_entries((0, 0), 1, [[0, X], [Y, 0]]))


def test_slope_examples():
    assert slope(0, 3) == 0
    assert slope(-1, 3) == Fraction(-1, 3)
    assert slope(-2, 2) == -1
    with pytest.raises(ZeroRank):
        slope(1, 0)


def test_scale_examples(fixture_b):
    assert scale(fixture_b, 1) == fixture_b
    doubled = scale(fixture_b, 2)
    assert doubled.higgs.entries[2][:2] == (X * 2, Y * 2)
    with pytest.raises(ZeroScalar):
        scale(fixture_b, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000), st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_hitchin_map_scales_homogeneously(seed, lam):
    if lam == 0:
        return
    pair = random_non_nilpotent(seed, 2 + seed % 2)
    base = hitchin_map(pair).coefficients
    scaled = hitchin_map(scale(pair, lam)).coefficients
    for k, (a, b) in enumerate(zip(base, scaled), start=1):
        assert b == a * lam ** k


@pytest.mark.parametrize("seed", range(50))
def test_nilpotency_iff_vanishing_hitchin_map(seed):
    if seed % 2:
        pair = random_non_nilpotent(seed, 2 + seed % 3)
    else:
        pair = random_pair(GenParams(seed, rank=2 + seed % 3, shape="Any"))
    nil = hitchin_map(pair).is_zero()
    try:
        p = nilpotency_order(pair)
        assert nil
        assert 1 <= p <= pair.rank
        assert (p == pair.rank) == (not higgs_power(pair, pair.rank - 1).is_zero())
    except NotNilpotent:
        assert not nil

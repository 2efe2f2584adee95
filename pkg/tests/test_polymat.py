import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelim.errors import NotFactorable, NotSaturated, RankDeficient, TwistError
from conelim.forms import ZERO, BinaryForm, X, Y
from conelim.polymat import (
    SubbundleBasis,
    TwistedMatrix,
    degree_from_minors,
    factor_through,
    is_saturated,
    kernel_basis,
    max_line,
    quotient_map,
    saturate,
    splitting_type,
    subbundle_degree,
)
from conelim.testkit import attempt_rng, random_subbundle

ONE = BinaryForm.const(1)


def coord(twists, cols):
    ident = TwistedMatrix.identity(twists)
    return SubbundleBasis(ident.select_columns(cols), saturated=True)


def test_kernel_of_zero_map_is_everything():
    M = TwistedMatrix.zeros((2, 1, 0), (0, -1, -2))
    K = kernel_basis(M)
    assert K.twists == (0, -1, -2)
    assert K.basis == TwistedMatrix.identity((0, -1, -2))


def test_kernel_fixture_b_row(fixture_b):
    K = kernel_basis(fixture_b.higgs)
    assert K.twists == (-1, -1)
    cols = {K.basis.column(0), K.basis.column(1)}
    assert (ZERO, ZERO, ONE) in cols
    other = (cols - {(ZERO, ZERO, ONE)}).pop()
    # (Y, -X, 0) up to a nonzero scalar
    c = other[0].coeffs[0]
    assert other == (Y * c, X * (-c), ZERO)


def test_kernel_fixture_a(fixture_a):
    K = kernel_basis(fixture_a.higgs)
    assert K.rank == 1
    assert K.twists == (-1,)
    assert K.basis.column(0) == (ZERO, ZERO, ONE)


def test_kernel_of_injective_map_is_none():
    assert kernel_basis(TwistedMatrix.identity((0, 1))) is None


def test_saturation_is_idempotent():
    B = coord((1, 0, -1), [1, 2])
    S = saturate(B)
    assert S.saturated
    assert sorted(S.twists) == sorted(B.twists)
    assert saturate(S) == S


def test_saturation_of_coordinate_plane():
    # columns (0, X, 1) and (0, 0, Y) in twists (1, 0, -1) (x) O(2)
    amb = (3, 2, 1)
    B = TwistedMatrix(amb, (1, 0), ((ZERO, ZERO), (X, ZERO), (ONE, Y)))
    S = saturate(B)
    assert splitting_type(S) == (2, 1)
    assert all(S.basis.entries[0][j] == ZERO for j in range(2))
    assert degree_from_minors(B) == 3


def test_saturation_strips_common_factor():
    B = TwistedMatrix((1, 1, 0), (-1,), ((X * Y,), (X * X,), (ZERO,)))
    S = saturate(B)
    assert S.twists == (0,)
    col = S.basis.column(0)
    assert col[2] == ZERO and col[0].degree == 1
    assert col[0] * X == col[1] * Y


def test_splitting_type_examples(fixture_b, fixture_a_prime):
    whole = SubbundleBasis(TwistedMatrix.identity((1, 0, -1)), saturated=True)
    assert splitting_type(whole) == (1, 0, -1)
    assert splitting_type(kernel_basis(fixture_b.higgs)) == (-1, -1)
    phi2 = fixture_a_prime.higgs @ fixture_a_prime.higgs
    assert splitting_type(kernel_basis(phi2)) == (0, -1)


def test_subbundle_degree_examples(fixture_b):
    assert subbundle_degree(SubbundleBasis(TwistedMatrix.identity((0, 0, -1)), True)) == -1
    assert subbundle_degree(kernel_basis(fixture_b.higgs)) == -2
    assert subbundle_degree(coord((1, 0, -1), [2])) == -1


def test_splitting_type_requires_saturation():
    B = SubbundleBasis(TwistedMatrix((1,), (0,), ((X,),)))
    with pytest.raises(NotSaturated):
        splitting_type(B)
    with pytest.raises(NotSaturated):
        B.degree


def test_factor_through_identity():
    B = coord((0, -1, -1), [0, 2])
    C = factor_through(B.basis, B)
    assert C == TwistedMatrix.identity(B.twists)


def test_factor_through_fixture_a(fixture_a):
    e2 = coord(fixture_a.twists, [1])
    e3 = coord(fixture_a.twists, [2])
    C = factor_through(fixture_a.higgs @ e2.basis, e3.twist(fixture_a.l_degree))
    assert C.entries == ((Y,),)


def test_factor_through_rejects_outside_span():
    e3 = coord((1, 0, -1), [2])
    with pytest.raises(NotFactorable):
        factor_through(coord((1, 0, -1), [1]).basis, e3)


def test_zero_column_rejected():
    with pytest.raises(ValueError):
        SubbundleBasis(TwistedMatrix((0, 0), (0,), ((ZERO,), (ZERO,))))


def test_twist_check():
    M = TwistedMatrix((0,), (0,), ((X,),))
    with pytest.raises(TwistError):
        M.check()


def test_quotient_map_kernel_is_the_subbundle(fixture_b):
    K = kernel_basis(fixture_b.higgs)
    pi = quotient_map(K, fixture_b.twists)
    assert pi.nrows == 1
    assert (pi @ K.basis).is_zero()
    # quotient degree is d - deg K
    assert sum(pi.row_twists) == fixture_b.degree - K.degree


def test_max_line(fixture_b):
    K = kernel_basis(fixture_b.higgs)
    assert max_line(K).twists == (-1,)
    assert max_line(coord((2, 0, -1), [0, 2])).twists == (2,)


def _random_maps(seed, count):
    from conelim.testkit import _form
    rng = attempt_rng(seed, 0)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, 3))
        rows = tuple(sorted((int(rng.integers(-2, 3)) for _ in range(m)), reverse=True))
        cols = tuple(sorted((int(rng.integers(-2, 3)) for _ in range(n)), reverse=True))
        entries = tuple(tuple(_form(rng, r - c) if rng.random() < 0.7 else ZERO for c in cols)
                        for r in rows)
        out.append(TwistedMatrix(rows, cols, entries))
    return out


@pytest.mark.parametrize("M", _random_maps(11, 40))
def test_kernel_is_saturated_and_killed(M):
    K = kernel_basis(M)
    if K is None:
        return
    assert (M @ K.basis).is_zero()
    assert is_saturated(K.basis)
    assert splitting_type(K) == tuple(sorted(K.twists, reverse=True))


def _saturated_image(M):
    pivots = []
    for j in range(M.ncols):
        if not any(M.column(j)):
            continue
        try:
            saturate(M.select_columns(pivots + [j]))
        except RankDeficient:
            continue
        pivots.append(j)
    return saturate(M.select_columns(pivots)) if pivots else None


@pytest.mark.parametrize("M", _random_maps(12, 40))
def test_kernel_and_image_degrees(M):
    """deg ker + deg(saturated image) >= deg of the source, equality iff the image is saturated."""
    K = kernel_basis(M)
    image = _saturated_image(M)
    deg_k = 0 if K is None else K.degree
    deg_im = 0 if image is None else image.degree
    assert deg_k + deg_im >= sum(M.col_twists)


def test_kernel_and_image_degrees_saturated_image(fixture_b):
    M = fixture_b.higgs
    image = _saturated_image(M)
    # the image of (X, Y) is the whole third summand of E (x) L, so equality holds
    assert kernel_basis(M).degree + image.degree == fixture_b.degree


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_subbundle_minimal_basis(seed):
    rng = attempt_rng(seed, 1)
    twists = (2, 0, -1)
    B = random_subbundle(rng, twists, int(rng.integers(1, 3)))
    assert is_saturated(B.basis)
    assert B.basis.violations() == []
    assert sum(B.twists) == degree_from_minors(B)
    assert saturate(B) == saturate(saturate(B))

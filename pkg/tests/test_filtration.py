import pytest

from conelim.errors import BoundaryCase, WrongShape
from conelim.filtration import (
    KERNEL_CHAIN,
    RANK3_INTERMEDIATE,
    ZERO_KIND,
    graded,
    kernel_filtration,
    mixed_slope,
    preferred_split,
    rank3_filtration,
)
from conelim.forms import ZERO, BinaryForm, X, Y
from conelim.model import HitchinPair
from conelim.polymat import factor_through, is_saturated, splitting_type
from conelim.testkit import GenParams, random_pair

ONE = BinaryForm.const(1)


def test_zero_field_single_step():
    pair = HitchinPair.from_entries((1, -1), 1, [[0, 0], [0, 0]])
    f = kernel_filtration(pair)
    assert f.kind == ZERO_KIND
    assert f.ranks == (2,)
    g = graded(pair, f)
    assert g.piece_twists == ((1, -1),)
    assert g.induced_maps == ()


def test_fixture_a_kernel_chain(fixture_a):
    f = kernel_filtration(fixture_a)
    assert f.kind == KERNEL_CHAIN
    assert f.ranks == (3, 2, 1)
    assert splitting_type(f.steps[1]) == (0, -1)
    assert splitting_type(f.steps[2]) == (-1,)
    assert f.steps[2].basis.column(0) == (ZERO, ZERO, ONE)


def test_fixture_a_prime_same_filtration(fixture_a, fixture_a_prime):
    assert kernel_filtration(fixture_a_prime).steps == kernel_filtration(fixture_a).steps


def test_fixture_b_rank3_filtration(fixture_b):
    f = rank3_filtration(fixture_b)
    assert f.kind == RANK3_INTERMEDIATE
    _, e2, e3 = f.steps
    assert e2.degree == -2 and splitting_type(e2) == (-1, -1)
    assert e3.degree == -1
    assert e3.basis.column(0) == (ZERO, ZERO, ONE)


def test_image_saturation_gains_degree():
    # image of Phi is X * e3, so its saturation is the whole third summand
    pair = HitchinPair.from_entries((0, 0, 0), 1, [[0, 0, 0], [0, 0, 0], [X, 0, 0]])
    _, _, e3 = rank3_filtration(pair).steps
    image_degree = pair.higgs.col_twists[0] - pair.l_degree
    assert e3.degree == 0
    assert e3.degree == image_degree + 1


def test_regular_input_is_wrong_shape(fixture_a):
    with pytest.raises(WrongShape):
        rank3_filtration(fixture_a)


def test_graded_fixture_a(fixture_a):
    g = graded(fixture_a, kernel_filtration(fixture_a))
    assert g.piece_twists == ((1,), (0,), (-1,))
    assert [m.entries for m in g.induced_maps] == [((X,),), ((Y,),)]


def test_graded_fixture_b(fixture_b):
    f = rank3_filtration(fixture_b)
    assert preferred_split(fixture_b, f) == "image"
    g = graded(fixture_b, f)
    assert g.piece_twists == ((0, 0), (-1,))
    assert g.induced_maps[0].entries == ((X, Y),)
    kernel_side = graded(fixture_b, f, "kernel")
    assert kernel_side.piece_twists == ((1,), (-1, -1))


def test_boundary_case():
    pair = HitchinPair.from_entries((0, 0, 0), 1, [[0, 0, 0], [0, 0, 0], [X, 0, 0]])
    f = rank3_filtration(pair)
    assert mixed_slope(pair, f) == 0
    with pytest.raises(BoundaryCase):
        preferred_split(pair, f)


def _instances():
    out = []
    for seed in range(30):
        shape = ("Regular", "Rank3Intermediate", "Zero")[seed % 3]
        rank = 3 if shape == "Rank3Intermediate" else 2 + seed % 3
        out.append(random_pair(GenParams(seed, rank=rank, shape=shape)))
    return out


@pytest.mark.parametrize("pair", _instances())
def test_filtration_invariants(pair):
    f = kernel_filtration(pair)
    for j, step in enumerate(f.steps):
        assert is_saturated(step.basis)
        if j + 1 < len(f.steps):
            factor_through(pair.higgs @ step.basis, f.steps[j + 1].twist(pair.l_degree))
    g = graded(pair, f)
    assert sum(g.piece_degrees) == pair.degree
    assert sum(g.type_vector) == pair.rank
    if f.kind == KERNEL_CHAIN and f.ranks[0] == 3 and len(f) == 2:
        e = rank3_filtration(pair)
        factor_through(e.steps[2].basis, e.steps[1])

from fractions import Fraction

import pytest

from conelim.errors import Unsupported, UnsupportedType
from conelim.filtration import kernel_filtration, rank3_filtration
from conelim.forms import BinaryForm, X, Y
from conelim.limits import HodgeBundle, limit
from conelim.model import HitchinPair
from conelim.polymat import TwistedMatrix, kernel_basis, saturate
from conelim.stability import invariant_candidates, is_stable, is_stable_hodge
from conelim.testkit import GenParams, _form, attempt_rng, random_pair


def test_candidates_fixture_a(fixture_a):
    cands = invariant_candidates(fixture_a)
    assert [(B.degree, B.rank) for B, _ in cands] == [(-1, 2), (-1, 1)]


def test_candidates_fixture_b(fixture_b):
    cands = invariant_candidates(fixture_b)
    assert [(B.degree, B.rank) for B, _ in cands] == [(-1, 1), (-2, 2), (-1, 2)]


def test_rank4_square_zero_unsupported():
    z = [[0] * 4 for _ in range(4)]
    z[3][0] = X
    pair = HitchinPair.from_entries((0, 0, 0, 0), 1, z)
    with pytest.raises(Unsupported):
        invariant_candidates(pair)


def test_fixture_a_stable(fixture_a):
    v = is_stable(fixture_a)
    assert v.stable and v.witness is None
    assert [(c.slope, c.bound) for c in v.checks] == [(Fraction(-1, 2), 0), (-1, 0)]


def test_equal_twists_unstable():
    X2, XY, Y2 = X * X, X * Y, Y * Y
    pair = HitchinPair.from_entries((0, 0, 0), 2, [[0, 0, 0], [X2, 0, 0], [XY, Y2, 0]])
    v = is_stable(pair)
    assert not v.stable
    assert v.semistable
    assert v.witness.rank == 2 and v.witness.slope == 0


def test_fixture_b_stable(fixture_b):
    v = is_stable(fixture_b)
    assert v.stable
    third = Fraction(-1, 3)
    assert [(c.slope, c.bound) for c in v.checks] == [(-1, third), (-1, third),
                                                        (Fraction(-1, 2), third)]


def test_zero_field_uses_top_summands():
    pair = HitchinPair.from_entries((1, -1), 1, [[0, 0], [0, 0]])
    v = is_stable(pair)
    assert not v.stable
    assert v.witness.degree == 1


def test_hodge_limit_fixture_a(fixture_a):
    v = is_stable_hodge(limit(fixture_a))
    assert v.stable
    assert [c.degree for c in v.checks] == [-1, -1]


def test_hodge_limit_fixture_b(fixture_b):
    v = is_stable_hodge(limit(fixture_b))
    assert v.stable
    by_name = {c.description: c for c in v.checks}
    assert by_name["ker phi"].degree == -1
    assert by_name["max line of W_1 + W_2"].slope == Fraction(-1, 2)
    assert by_name["W_2"].slope == -1


def test_hodge_rank2():
    phi = TwistedMatrix((1,), (0,), ((X,),))
    h = HodgeBundle((1, 1), ((0,), (-1,)), (phi,), 2)
    v = is_stable_hodge(h)
    assert v.stable
    assert [(c.slope, c.bound) for c in v.checks] == [(-1, Fraction(-1, 2))]


def test_hodge_unsupported_type():
    phi = TwistedMatrix((1, 1), (0, 0), ((X, Y), (Y, X)))
    h = HodgeBundle((2, 2), ((0, 0), (-1, -1)), (phi,), 2)
    with pytest.raises(UnsupportedType):
        is_stable_hodge(h)


def _stable_intermediate(count):
    out, seed = [], 0
    while len(out) < count:
        out.append(random_pair(GenParams(seed, rank=3, shape="Rank3Intermediate",
                                         require_stable=True)))
        seed += 1
    return out


@pytest.mark.parametrize("pair", _stable_intermediate(12))
def test_sampled_invariant_subbundles_never_beat_candidates(pair):
    """Random lines in ker Phi and random planes through the image stay below the candidates."""
    best = max(c.slope for c in is_stable(pair).checks)
    _, e2, e3 = rank3_filtration(pair).steps
    rng = attempt_rng(hash(pair) % 2**32, 7)
    amb = pair.twists
    for _ in range(40):
        # a random section of E_2 (m) for small m spans an invariant line
        m = int(rng.integers(0, 3))
        coeffs = [_form(rng, t + m) for t in e2.twists]
        col = [sum((e2.basis.entries[i][j] * coeffs[j] for j in range(2) if coeffs[j]),
                   start=BinaryForm()) for i in range(3)]
        if any(col):
            line = saturate(TwistedMatrix(amb, (-m,), tuple((c,) for c in col)))
            assert line.degree <= best
            assert (pair.higgs @ line.basis).is_zero()
        # a random section of E together with E_3 spans an invariant plane
        v = tuple(_form(rng, t + m) for t in amb)
        plane = TwistedMatrix(amb, (e3.twists[0], -m),
                              tuple((e3.basis.entries[i][0], v[i]) for i in range(3)))
        try:
            P = saturate(plane)
        except Exception:
            continue
        assert Fraction(P.degree, 2) <= best


@pytest.mark.parametrize("seed", range(10))
def test_regular_invariant_subbundles_are_kernel_steps(seed):
    pair = random_pair(GenParams(seed, rank=3, shape="Regular"))
    steps = kernel_filtration(pair).steps
    # ker Phi^k is invariant of rank k and equals E_{r-k+1}
    for k in (1, 2):
        M = pair.higgs
        for _ in range(k - 1):
            M = pair.higgs @ M
        assert kernel_basis(M).basis == steps[3 - k].basis

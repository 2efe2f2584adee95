"""Seeded instance generation and independent oracles.

Streams: attempt ``k`` of seed ``s`` draws from
``Generator(PCG64(SeedSequence(s, spawn_key=(k,))))``, so each attempt is
reproducible on its own and attempts never share state.

Nilpotent pairs are built strictly lower-triangular with respect to a random
ordering of the summands and then conjugated by a random automorphism
``G = U D`` of ``E``: ``D`` is a determinant-one integer matrix (entries in
[-3, 3]) on each block of equal twists and ``U`` is unipotent with random forms
wherever ``a_i > a_j``.  The conjugate has the same nilpotent shape but its
filtration is no longer spanned by coordinate vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, groupby

import numpy as np

from . import _linalg
from .errors import ConelimError, ExhaustedAttempts, NotSaturated
from .forms import ZERO, BinaryForm
from .model import HitchinPair, hitchin_map, nilpotency_order
from .polymat import SubbundleBasis, TwistedMatrix, form_det, is_saturated, saturate
from .stability import is_stable

__all__ = [
    "SHAPES",
    "GenParams",
    "attempt_rng",
    "random_pair",
    "random_non_nilpotent",
    "random_subbundle",
    "h0",
    "h0_profile",
    "splitting_from_h0",
    "pointwise_nilpotency_oracle",
]

SHAPES = ("Regular", "Rank3Intermediate", "Zero", "Any")
COEFF_BOUND = 3


@dataclass(frozen=True)
class GenParams:
    seed: int
    rank: int = 3
    twist_range: tuple[int, int] = (-3, 3)
    l_range: tuple[int, int] = (1, 6)
    shape: str = "Any"
    require_stable: bool = False
    max_attempts: int = 200
    extra_density: float = 0.5

    def __post_init__(self):
        if not 1 <= self.rank <= 4:
            raise ValueError("rank must be in 1..4")
        lo, hi = self.twist_range
        if lo > hi:
            raise ValueError("empty twist range")
        llo, lhi = self.l_range
        if llo > lhi or llo < 1:
            raise ValueError("l range must be nonempty and >= 1")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}")
        if self.shape == "Rank3Intermediate" and self.rank != 3:
            raise ValueError("Rank3Intermediate needs rank 3")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def attempt_rng(seed: int, attempt: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(attempt,))))


def _int(rng, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _form(rng, degree: int, nonzero: bool = False) -> BinaryForm:
    if degree < 0:
        return ZERO
    while True:
        coeffs = [_int(rng, -COEFF_BOUND, COEFF_BOUND) for _ in range(degree + 1)]
        f = BinaryForm(coeffs, degree)
        if f or not nonzero:
            return f


def _twists(rng, params: GenParams) -> tuple[int, ...]:
    lo, hi = params.twist_range
    return tuple(sorted((_int(rng, lo, hi) for _ in range(params.rank)), reverse=True))


def _unimodular_block(rng, n: int) -> list[list[Fraction]]:
    for _ in range(500):
        M = [[Fraction(_int(rng, -COEFF_BOUND, COEFF_BOUND)) for _ in range(n)] for _ in range(n)]
        d = _linalg.det(M)
        if d == 1:
            return M
        if d == -1:
            for row in M:
                row[0] = -row[0]
            return M
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _automorphism(rng, twists) -> tuple[TwistedMatrix, TwistedMatrix]:
    """A random automorphism ``G`` of ``E`` and its inverse."""
    n = len(twists)
    D = [[Fraction(0)] * n for _ in range(n)]
    start = 0
    for _, grp in groupby(twists):
        size = len(list(grp))
        blk = _unimodular_block(rng, size)
        for i in range(size):
            for j in range(size):
                D[start + i][start + j] = blk[i][j]
        start += size
    Dinv = _linalg.inverse(D)

    def const_matrix(M):
        return TwistedMatrix(twists, twists, tuple(
            tuple(BinaryForm.const(M[i][j]) if M[i][j] and twists[i] == twists[j] else ZERO
                  for j in range(n)) for i in range(n)))

    ident = TwistedMatrix.identity(twists)
    nil = TwistedMatrix(twists, twists, tuple(
        tuple(_form(rng, twists[i] - twists[j]) if i < j and twists[i] > twists[j] else ZERO
              for j in range(n)) for i in range(n)))
    U = ident + nil
    # U = I + N with N strictly upper triangular, so U^-1 = sum (-N)^k
    Uinv, term = ident, ident
    neg = nil.scale(-1)
    for _ in range(n - 1):
        term = term @ neg
        Uinv = Uinv + term
    return U @ const_matrix(D), const_matrix(Dinv) @ Uinv


def _conjugate(rng, twists, l: int, N: TwistedMatrix) -> HitchinPair:
    G, Ginv = _automorphism(rng, twists)
    phi = Ginv @ (N @ G)
    return HitchinPair(tuple(twists), l, phi)


def _lower_in_order(twists, l, entries: dict) -> TwistedMatrix:
    n = len(twists)
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), f in entries.items():
        rows[i][j] = f
    return TwistedMatrix(tuple(t + l for t in twists), tuple(twists), tuple(map(tuple, rows)))


def _regular(rng, twists, l, density) -> TwistedMatrix | None:
    n = len(twists)
    sigma = [int(s) for s in rng.permutation(n)]
    entries = {}
    for k in range(n - 1):
        i, j = sigma[k + 1], sigma[k]
        deg = twists[i] + l - twists[j]
        if deg < 0:
            return None
        entries[(i, j)] = _form(rng, deg, nonzero=True)
    for a in range(n):
        for b in range(a - 1):
            i, j = sigma[a], sigma[b]
            if rng.random() < density:
                entries[(i, j)] = _form(rng, twists[i] + l - twists[j])
    return _lower_in_order(twists, l, entries)


def _intermediate(rng, twists, l) -> TwistedMatrix | None:
    sigma = [int(s) for s in rng.permutation(3)]
    if rng.random() < 0.5:
        cells = [(sigma[2], sigma[0]), (sigma[2], sigma[1])]
    else:
        cells = [(sigma[1], sigma[0]), (sigma[2], sigma[0])]
    entries = {}
    for idx, (i, j) in enumerate(cells):
        f = _form(rng, twists[i] + l - twists[j], nonzero=(idx == 0))
        entries[(i, j)] = f
    if not any(entries.values()):
        return None
    return _lower_in_order(twists, l, entries)


def _attempt(rng, params: GenParams) -> HitchinPair | None:
    twists = _twists(rng, params)
    l = _int(rng, *params.l_range)
    shape = params.shape
    if shape == "Any":
        options = ["Zero", "Regular"] + (["Rank3Intermediate"] if params.rank == 3 else [])
        shape = options[int(rng.integers(len(options)))]
    n = len(twists)
    if shape == "Zero":
        pair = HitchinPair(twists, l, TwistedMatrix.zeros(tuple(t + l for t in twists), twists))
        return pair if not params.require_stable or is_stable(pair).stable else None
    N = _regular(rng, twists, l, params.extra_density) if shape == "Regular" \
        else _intermediate(rng, twists, l)
    if N is None:
        return None
    # conjugation is an isomorphism of pairs, so stability can be decided first
    if params.require_stable and not is_stable(HitchinPair(twists, l, N)).stable:
        return None
    pair = _conjugate(rng, twists, l, N)
    p = nilpotency_order(pair)
    want = n if shape == "Regular" else 2
    if p != want:
        raise AssertionError(f"generator produced nilpotency order {p}, wanted {want}")
    return pair


def random_pair(params: GenParams) -> HitchinPair:
    for attempt in range(params.max_attempts):
        pair = _attempt(attempt_rng(params.seed, attempt), params)
        if pair is None:
            continue
        if params.require_stable and not is_stable(pair).stable:
            raise AssertionError("conjugation changed the stability verdict")
        return pair
    raise ExhaustedAttempts(f"no instance after {params.max_attempts} attempts (seed {params.seed})")


def random_non_nilpotent(seed: int, rank: int, twist_range=(-2, 2), l_range=(1, 4)) -> HitchinPair:
    """A pair whose Higgs field has nonzero characteristic coefficients."""
    params = GenParams(seed, rank, twist_range, l_range)
    for attempt in range(1000):
        rng = attempt_rng(seed, attempt)
        twists = _twists(rng, params)
        l = _int(rng, *l_range)
        rows = tuple(tuple(_form(rng, twists[i] + l - twists[j]) for j in range(rank))
                     for i in range(rank))
        pair = HitchinPair(twists, l, TwistedMatrix(tuple(t + l for t in twists), twists, rows))
        if not hitchin_map(pair).is_zero():
            return pair
    raise ExhaustedAttempts("no non-nilpotent pair found")


def random_subbundle(rng, twists, k: int, spread: int = 2,
                     max_attempts: int = 200) -> SubbundleBasis:
    """Saturation of ``k`` random sections of ``E(m_c)``.

    Column twists start at the ``k``-th largest ambient twist, so at least
    ``k`` rows carry forms of nonnegative degree and rank ``k`` is reachable.
    """
    twists = tuple(twists)
    if not 1 <= k <= len(twists):
        raise ValueError(f"cannot draw rank {k} inside rank {len(twists)}")
    base = min(0, sorted(twists, reverse=True)[k - 1])
    for _ in range(max_attempts):
        cols = tuple(base - _int(rng, 0, spread) for _ in range(k))
        rows = tuple(tuple(_form(rng, twists[i] - c) for c in cols) for i in range(len(twists)))
        M = TwistedMatrix(twists, cols, rows)
        try:
            return saturate(M)
        except ConelimError:
            continue
    raise ExhaustedAttempts(f"no rank {k} subbundle after {max_attempts} attempts")


# --------------------------------------------------------------------------
# oracles


def _cofactor_rows(B: TwistedMatrix, rows: tuple[int, ...]):
    """Signed k-minors of ``B`` obtained by deleting each row of ``rows``."""
    out = []
    for pos, i in enumerate(rows):
        keep = [r for r in rows if r != i]
        minor = form_det([[B.entries[r][c] for c in range(B.ncols)] for r in keep])
        out.append((i, minor if pos % 2 == 0 else -minor))
    return out


def h0(B: SubbundleBasis, m: int) -> int:
    """Dimension of global sections of ``B(m)``, computed inside ``E(m)``."""
    amb = B.ambient
    n, k = len(amb), B.rank
    layout, pos = [], 0
    for a in amb:
        d = a + m
        layout.append((pos, d))
        pos += max(d + 1, 0)
    nvars = pos
    if nvars == 0:
        return 0
    if k == n:
        return nvars
    equations: dict = {}
    for rows in combinations(range(n), k + 1):
        for i, minor in _cofactor_rows(B.basis, rows):
            start, d = layout[i]
            if d < 0 or not minor:
                continue
            # v_i = sum_s c_s X^s Y^(d-s); minor * X^s has X^(s+t) coefficient minor[t]
            for t, coef in enumerate(minor.coeffs):
                if coef == 0:
                    continue
                for s in range(d + 1):
                    key = (rows, s + t)
                    equations.setdefault(key, [Fraction(0)] * nvars)[start + s] += coef
    return nvars - _linalg.rank(list(equations.values()), nvars)


def h0_profile(B: SubbundleBasis, m_max: int) -> list[int]:
    if not is_saturated(B.basis):
        raise NotSaturated("h0 profile needs a saturated basis")
    return [h0(B, m) for m in range(m_max + 1)]


def splitting_from_h0(B: SubbundleBasis) -> tuple[int, ...]:
    """Splitting type recovered from ``h0(B(m)) = sum max(0, b + m + 1)``."""
    if not is_saturated(B.basis):
        raise NotSaturated("h0 recovery needs a saturated basis")
    k = B.rank
    m = -max(B.ambient) - 1
    prev_h, prev_diff = h0(B, m - 1), 0
    found: list[int] = []
    while len(found) < k:
        h = h0(B, m)
        diff = h - prev_h  # number of summands with b >= -m
        found.extend([-m] * (diff - prev_diff))
        prev_h, prev_diff = h, diff
        m += 1
    return tuple(sorted(found, reverse=True))


def pointwise_nilpotency_oracle(pair: HitchinPair, samples: int = 8, seed: int = 0) -> bool:
    r = pair.rank
    if samples < r + 1:
        raise ValueError("need at least rank + 1 sample points")
    rng = attempt_rng(seed, 0)
    for _ in range(samples):
        x = Fraction(_int(rng, -50, 50), _int(rng, 1, 50))
        M = [[e(x, 1) if e else Fraction(0) for e in row] for row in pair.higgs.entries]
        P = M
        for _ in range(r - 1):
            P = [[sum(P[i][t] * M[t][j] for t in range(r)) for j in range(r)] for i in range(r)]
        if any(v != 0 for row in P for v in row):
            return False
    return True

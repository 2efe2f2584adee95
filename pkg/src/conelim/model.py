"""Hitchin pairs on a split bundle over the projective line.

The bundle is ``E = O(a_1) + ... + O(a_r)`` with ``a_1 >= ... >= a_r`` and the
twisting line bundle is ``L = O(l)``.  The Higgs field ``Phi: E -> E (x) L`` is a
twisted matrix with row twists ``a_i + l`` and column twists ``a_j``; the degree
law on its entries is exactly holomorphy of ``Phi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import HolomorphyViolation, NotNilpotent, ZeroRank, ZeroScalar
from .forms import ZERO, BinaryForm, as_fraction
from .polymat import TwistedMatrix

__all__ = [
    "BundleModel",
    "HitchinPair",
    "HitchinImage",
    "validate",
    "hitchin_map",
    "nilpotency_order",
    "slope",
    "scale",
    "higgs_power",
]

MIN_L_DEGREE = 1


@dataclass(frozen=True)
class BundleModel:
    twists: tuple[int, ...]

    def __post_init__(self):
        t = tuple(int(a) for a in self.twists)
        if not t:
            raise ValueError("a bundle needs rank >= 1")
        if list(t) != sorted(t, reverse=True):
            raise ValueError(f"twists must be sorted descending, got {t}")
        object.__setattr__(self, "twists", t)

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    @property
    def slope(self) -> Fraction:
        return slope(self.degree, self.rank)

    @property
    def coprime(self) -> bool:
        return gcd(self.rank, self.degree) == 1


@dataclass(frozen=True)
class HitchinPair:
    bundle: BundleModel
    l_degree: int
    higgs: TwistedMatrix

    def __post_init__(self):
        if not isinstance(self.bundle, BundleModel):
            object.__setattr__(self, "bundle", BundleModel(tuple(self.bundle)))
        a, l = self.bundle.twists, self.l_degree
        if self.higgs.col_twists != a or self.higgs.row_twists != tuple(t + l for t in a):
            raise ValueError("Higgs field twists do not match the bundle and l_degree")

    @classmethod
    def from_entries(cls, twists: Sequence[int], l_degree: int, entries) -> "HitchinPair":
        """Build from a square array of forms (None or 0 for the zero form)."""
        a = tuple(int(t) for t in twists)
        rows = tuple(
            tuple(ZERO if (e is None or (not isinstance(e, BinaryForm) and e == 0))
                  else (e if isinstance(e, BinaryForm) else BinaryForm.const(e))
                  for e in row)
            for row in entries
        )
        M = TwistedMatrix(tuple(t + l_degree for t in a), a, rows)
        return cls(BundleModel(a), int(l_degree), M)

    @property
    def rank(self) -> int:
        return self.bundle.rank

    @property
    def degree(self) -> int:
        return self.bundle.degree

    @property
    def twists(self) -> tuple[int, ...]:
        return self.bundle.twists

    def is_zero(self) -> bool:
        return self.higgs.is_zero()


@dataclass(frozen=True)
class HitchinImage:
    """Characteristic coefficients (trace, ..., determinant); the k-th has degree k*l."""

    coefficients: tuple[BinaryForm, ...]
    l_degree: int = field(default=0)

    def is_zero(self) -> bool:
        return not any(self.coefficients)


def validate(pair: HitchinPair, min_l_degree: int = MIN_L_DEGREE) -> HitchinPair:
    """Check holomorphy of the Higgs field; return the pair unchanged."""
    bad = pair.higgs.violations()
    if bad:
        raise HolomorphyViolation(bad)
    if pair.l_degree < min_l_degree:
        raise ValueError(f"l_degree {pair.l_degree} is below the minimum {min_l_degree}")
    return pair


def higgs_power(pair: HitchinPair, k: int) -> TwistedMatrix:
    """``Phi^k: E -> E (x) L^k`` (the identity for ``k = 0``)."""
    out = TwistedMatrix.identity(pair.twists)
    for _ in range(k):
        out = pair.higgs @ out
    return out


@lru_cache(maxsize=1024)
def hitchin_map(pair: HitchinPair) -> HitchinImage:
    """Coefficients of the characteristic polynomial via the Faddeev-LeVerrier recursion.

    With ``det(t - Phi) = t^r + c_1 t^(r-1) + ... + c_r`` the k-th output is
    ``(-1)^k c_k``, i.e. the k-th elementary symmetric function of the
    eigenvalues: the trace first and the determinant last.
    """
    validate(pair, min_l_degree=-10**9)
    r, l = pair.rank, pair.l_degree
    phi = pair.higgs
    coeffs: list[BinaryForm] = []
    # M_k has entries of degree a_i - a_j + (k-1)l: a map E -> E (x) L^(k-1)
    M = TwistedMatrix.identity(pair.twists)
    c_prev = None
    for k in range(1, r + 1):
        if k > 1:
            M = phi @ M
            M = M + _scalar_identity(c_prev, pair.twists, (k - 1) * l)
        AM = phi @ M
        tr = ZERO
        for i in range(r):
            tr = tr + AM.entries[i][i]
        c_k = tr * Fraction(-1, k)
        coeffs.append(c_k * ((-1) ** k))
        c_prev = c_k
    return HitchinImage(tuple(coeffs), l)


def _scalar_identity(c: BinaryForm, twists, shift: int) -> TwistedMatrix:
    n = len(twists)
    return TwistedMatrix(tuple(t + shift for t in twists), tuple(twists),
                         tuple(tuple(c if i == j else ZERO for j in range(n)) for i in range(n)))


@lru_cache(maxsize=1024)
def nilpotency_order(pair: HitchinPair) -> int:
    """Least ``p >= 1`` with ``Phi^p = 0``; cross-checked against the Hitchin map."""
    validate(pair, min_l_degree=-10**9)
    r = pair.rank
    power = pair.higgs
    p = None
    for k in range(1, r + 1):
        if power.is_zero():
            p = k
            break
        power = pair.higgs @ power
    char_zero = hitchin_map(pair).is_zero()
    if (p is not None) != char_zero:
        raise AssertionError("nilpotency and vanishing Hitchin map disagree")
    if p is None:
        raise NotNilpotent(f"Phi^{r} != 0")
    return p


def slope(degree: int, rank: int) -> Fraction:
    if rank == 0:
        raise ZeroRank("slope of a rank-zero bundle")
    return Fraction(degree, rank)


def scale(pair: HitchinPair, lam) -> HitchinPair:
    """The C*-action ``(E, Phi) -> (E, lam * Phi)``."""
    lam = as_fraction(lam)
    if lam == 0:
        raise ZeroScalar("the C*-action needs a nonzero scalar")
    return HitchinPair(pair.bundle, pair.l_degree, pair.higgs.scale(lam))

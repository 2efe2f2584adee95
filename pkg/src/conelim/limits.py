"""Classification of nilpotent pairs and their limit Hodge bundles.

The limit of ``(E, z Phi)`` as ``z -> oo`` is graded by a filtration chosen from
the shape of ``Phi``:

* ``Phi = 0``: the pair is already fixed;
* regular ``Phi``: the kernel chain, giving a Hodge bundle of type (1, ..., 1);
* rank 3 with ``Phi^2 = 0``: either ``(E/E_2, E_2)`` of type (1, 2) or
  ``(E/E_3, E_3)`` of type (2, 1), whichever keeps the limit stable.  The
  choice compares ``(d - deg E_2 + deg E_3) / 2``, the slope of the extension
  of ``E/E_2`` by ``E_3``, with ``mu(E)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundaryCase, Unsupported, WrongShape
from .filtration import (
    GradedData,
    graded,
    kernel_filtration,
    mixed_slope,
    rank3_filtration,
)
from .forms import ZERO
from .model import HitchinPair, nilpotency_order, slope
from .polymat import TwistedMatrix
from .stability import is_stable, is_stable_hodge

__all__ = [
    "Case",
    "Slopes",
    "Classification",
    "HodgeBundle",
    "ConstraintReport",
    "classify",
    "limit",
    "candidate_limits",
    "check_slope_constraints",
]


class Case(str, enum.Enum):
    ZERO = "Zero"
    REGULAR = "Regular"
    INTERMEDIATE_C1 = "IntermediateC1"
    INTERMEDIATE_C2 = "IntermediateC2"
    UNSUPPORTED = "Unsupported"


@dataclass(frozen=True)
class Slopes:
    total: Fraction
    e2: Fraction | None = None
    e3: Fraction | None = None
    mixed: Fraction | None = None


@dataclass(frozen=True)
class Classification:
    case: Case
    slopes: Slopes
    coprime: bool
    reason: str = ""


@dataclass(frozen=True)
class HodgeBundle:
    """Pieces ``V_1, ..., V_k`` with weight-one maps ``V_j -> V_{j+1} (x) L``."""

    type_vector: tuple[int, ...]
    piece_twists: tuple[tuple[int, ...], ...]
    maps: tuple[TwistedMatrix, ...]
    l_degree: int
    graded: GradedData | None = field(default=None, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return sum(self.type_vector)

    @property
    def degree(self) -> int:
        return sum(map(sum, self.piece_twists))

    def as_pair(self) -> HitchinPair:
        """The Hodge bundle as a Hitchin pair on the direct sum of its pieces."""
        flat = [t for piece in self.piece_twists for t in piece]
        offsets = [0]
        for n in self.type_vector:
            offsets.append(offsets[-1] + n)
        n = len(flat)
        rows = [[ZERO] * n for _ in range(n)]
        for j, phi in enumerate(self.maps):
            for a in range(phi.nrows):
                for b in range(phi.ncols):
                    rows[offsets[j + 1] + a][offsets[j] + b] = phi.entries[a][b]
        order = sorted(range(n), key=lambda i: -flat[i])
        entries = [[rows[i][j] for j in order] for i in order]
        return HitchinPair.from_entries([flat[i] for i in order], self.l_degree, entries)


def _slopes(pair: HitchinPair, steps) -> Slopes:
    mu = slope(pair.degree, pair.rank)
    e2 = slope(steps[1].degree, steps[1].rank) if len(steps) > 1 else None
    e3 = slope(steps[2].degree, steps[2].rank) if len(steps) > 2 else None
    return Slopes(mu, e2, e3)


def classify(pair: HitchinPair) -> Classification:
    p = nilpotency_order(pair)
    r = pair.rank
    coprime = pair.bundle.coprime
    mu = slope(pair.degree, r)
    if p == 1:
        return Classification(Case.ZERO, Slopes(mu), coprime)
    if p == r:
        return Classification(Case.REGULAR, _slopes(pair, kernel_filtration(pair).steps), coprime)
    if r == 3 and p == 2:
        filt = rank3_filtration(pair)
        m = mixed_slope(pair, filt)
        s = _slopes(pair, filt.steps)
        s = Slopes(s.total, s.e2, s.e3, m)
        if m == mu:
            raise BoundaryCase(f"extension slope {m} equals mu(E)")
        case = Case.INTERMEDIATE_C1 if m < mu else Case.INTERMEDIATE_C2
        return Classification(case, s, coprime)
    return Classification(
        Case.UNSUPPORTED, Slopes(mu), coprime,
        reason=f"rank {r} nilpotent of order {p} is neither zero, regular nor rank-3",
    )


def _hodge(pair: HitchinPair, g: GradedData) -> HodgeBundle:
    return HodgeBundle(g.type_vector, g.piece_twists, g.induced_maps, pair.l_degree, g)


def candidate_limits(pair: HitchinPair) -> dict[str, HodgeBundle]:
    """Both graded candidates of a rank-3 intermediate pair, keyed by split."""
    filt = rank3_filtration(pair)
    return {split: _hodge(pair, graded(pair, filt, split)) for split in ("kernel", "image")}


def limit(pair: HitchinPair) -> HodgeBundle:
    cls = classify(pair)
    if cls.case is Case.UNSUPPORTED:
        raise Unsupported(cls.reason)
    if cls.case is Case.ZERO:
        filt = kernel_filtration(pair)
        out = HodgeBundle((pair.rank,), (pair.twists,), (), pair.l_degree,
                          graded(pair, filt))
    elif cls.case is Case.REGULAR:
        out = _hodge(pair, graded(pair, kernel_filtration(pair)))
    else:
        split = "kernel" if cls.case is Case.INTERMEDIATE_C1 else "image"
        out = _hodge(pair, graded(pair, rank3_filtration(pair), split))
    if out.rank != pair.rank or out.degree != pair.degree:
        raise AssertionError("limit does not conserve rank and degree")
    if pair.rank > 1 and is_stable(pair).stable and not is_stable_hodge(out).stable:
        raise AssertionError("stable pair with an unstable limit")
    return out


@dataclass(frozen=True)
class ConstraintReport:
    """Slope relations satisfied by a stable rank-3 intermediate pair.

    ``window``: ``mu - l/2 < m < mu + l/2`` for the extension slope ``m``.
    ``image_bound``: ``3 deg E_3 < d``.  ``kernel_bound``: ``3 deg E_2 < 2d``.
    ``induced_map``: ``deg E_3 + l >= d - deg E_2``.
    """

    mu: Fraction
    mixed: Fraction
    l_degree: int
    degree: int
    deg_e2: int
    deg_e3: int

    @property
    def window(self) -> bool:
        half = Fraction(self.l_degree, 2)
        return self.mu - half < self.mixed < self.mu + half

    @property
    def image_bound(self) -> bool:
        return 3 * self.deg_e3 < self.degree

    @property
    def kernel_bound(self) -> bool:
        return 3 * self.deg_e2 < 2 * self.degree

    @property
    def induced_map(self) -> bool:
        return self.deg_e3 + self.l_degree >= self.degree - self.deg_e2

    def as_dict(self) -> dict[str, bool]:
        return {
            "window": self.window,
            "image_bound": self.image_bound,
            "kernel_bound": self.kernel_bound,
            "induced_map": self.induced_map,
        }

    @property
    def violated(self) -> tuple[str, ...]:
        return tuple(k for k, ok in self.as_dict().items() if not ok)

    def window_text(self) -> str:
        half = Fraction(self.l_degree, 2)
        return f"{self.mu - half} < {self.mixed} < {self.mu + half}"


def check_slope_constraints(pair: HitchinPair) -> ConstraintReport:
    try:
        filt = rank3_filtration(pair)
    except WrongShape:
        raise
    _, e2, e3 = filt.steps
    return ConstraintReport(
        mu=slope(pair.degree, 3),
        mixed=mixed_slope(pair, filt),
        l_degree=pair.l_degree,
        degree=pair.degree,
        deg_e2=e2.degree,
        deg_e3=e3.degree,
    )

"""Filtrations of a nilpotent Hitchin pair and their graded pieces.

Two chains are built:

* the kernel chain ``E = E_1 > E_2 > ... > E_p > 0`` with ``E_j`` the saturated
  kernel of ``Phi^(p-j+1)``, so that ``Phi(E_j) <= E_{j+1} (x) L``;
* for rank 3 with ``Phi^2 = 0``, the chain ``E > ker(Phi) > im(Phi)~ (x) L^-1``
  where the tilde is saturation, so that ``Phi(E_j) <= E_{j+2} (x) L``.

Quotients ``E_j / E_{j+1}`` are not subbundles, so each graded piece is
presented by an explicit surjection ``pi_j`` from ``E_j`` (in the coordinates
of ``E_j``'s own basis) onto a split bundle with the quotient's splitting type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .errors import BoundaryCase, NotFactorable, WrongShape
from .model import HitchinPair, higgs_power, nilpotency_order
from .polymat import (
    SubbundleBasis,
    TwistedMatrix,
    factor_through,
    is_saturated,
    kernel_basis,
    quotient_map,
    saturate,
)

__all__ = [
    "ZERO_KIND",
    "KERNEL_CHAIN",
    "RANK3_INTERMEDIATE",
    "Filtration",
    "GradedData",
    "kernel_filtration",
    "rank3_filtration",
    "graded",
    "preferred_split",
    "mixed_slope",
]

ZERO_KIND = "Zero"
KERNEL_CHAIN = "KernelChain"
RANK3_INTERMEDIATE = "Rank3Intermediate"


@dataclass(frozen=True)
class Filtration:
    steps: tuple[SubbundleBasis, ...]
    kind: str

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(s.rank for s in self.steps)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s.degree for s in self.steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class GradedData:
    """Graded pieces of a chain of subbundles with the maps induced by Phi.

    ``projections[j]`` maps ``tops[j]`` (in its basis coordinates) onto piece
    ``j``; ``coords[j]`` expresses ``tops[j+1]`` in the basis of ``tops[j]``.
    """

    piece_twists: tuple[tuple[int, ...], ...]
    induced_maps: tuple[TwistedMatrix, ...]
    tops: tuple[SubbundleBasis, ...] = field(repr=False)
    projections: tuple[TwistedMatrix, ...] = field(repr=False)
    coords: tuple[TwistedMatrix, ...] = field(repr=False)

    @property
    def piece_degrees(self) -> tuple[int, ...]:
        return tuple(sum(t) for t in self.piece_twists)

    @property
    def type_vector(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.piece_twists)


def _whole(pair: HitchinPair) -> SubbundleBasis:
    return SubbundleBasis(TwistedMatrix.identity(pair.twists), saturated=True)


def _check_invariance(pair: HitchinPair, source: SubbundleBasis, target: SubbundleBasis | None):
    image = pair.higgs @ source.basis
    if target is None:
        if not image.is_zero():
            raise AssertionError("Phi does not kill the last step")
        return
    factor_through(image, target.twist(pair.l_degree))


@lru_cache(maxsize=1024)
def kernel_filtration(pair: HitchinPair) -> Filtration:
    p = nilpotency_order(pair)
    if p == 1:
        return Filtration((_whole(pair),), ZERO_KIND)
    steps = []
    for j in range(1, p + 1):
        B = kernel_basis(higgs_power(pair, p - j + 1))
        # kernels are saturated: the minors of the basis have no common zero
        assert is_saturated(B.basis), "kernel basis is not saturated"
        steps.append(B)
    ranks = [s.rank for s in steps]
    if any(a <= b for a, b in zip(ranks, ranks[1:])):
        raise AssertionError(f"kernel chain ranks {ranks} are not strictly decreasing")
    for j, step in enumerate(steps):
        _check_invariance(pair, step, steps[j + 1] if j + 1 < len(steps) else None)
    return Filtration(tuple(steps), KERNEL_CHAIN)


@lru_cache(maxsize=1024)
def rank3_filtration(pair: HitchinPair) -> Filtration:
    if pair.rank != 3:
        raise WrongShape(f"rank {pair.rank} pair has no rank-3 intermediate filtration")
    p = nilpotency_order(pair)
    if p != 2:
        raise WrongShape(f"nilpotency order {p}, expected Phi != 0 with Phi^2 = 0")
    e2 = kernel_basis(pair.higgs)
    j = next(j for j in range(3) if any(pair.higgs.column(j)))
    e3 = saturate(pair.higgs.select_columns([j])).twist(-pair.l_degree)
    if e2.rank != 2 or e3.rank != 1:
        raise AssertionError("unexpected ranks for kernel/image of a rank-one nilpotent")
    factor_through(e3.basis, e2)
    _check_invariance(pair, _whole(pair), e3)
    _check_invariance(pair, e2, None)
    return Filtration((_whole(pair), e2, e3), RANK3_INTERMEDIATE)


def mixed_slope(pair: HitchinPair, filt: Filtration) -> Fraction:
    """Slope of ``E/E_2 + E_3`` for the rank-3 intermediate chain."""
    _, e2, e3 = filt.steps
    return Fraction(pair.degree - e2.degree + e3.degree, 2)


def preferred_split(pair: HitchinPair, filt: Filtration) -> str:
    """``"kernel"`` for pieces (E/E_2, E_2), ``"image"`` for (E/E_3, E_3)."""
    m = mixed_slope(pair, filt)
    mu = Fraction(pair.degree, 3)
    if m < mu:
        return "kernel"
    if m > mu:
        return "image"
    raise BoundaryCase(f"mu(E/E2 + E3) = mu(E) = {mu}")


def _tops(pair: HitchinPair, filt: Filtration, split: str | None) -> list[SubbundleBasis]:
    if filt.kind != RANK3_INTERMEDIATE:
        return list(filt.steps)
    if split is None:
        split = preferred_split(pair, filt)
    e1, e2, e3 = filt.steps
    if split == "kernel":
        return [e1, e2]
    if split == "image":
        return [e1, e3]
    raise ValueError(f"unknown split {split!r}")


def graded(pair: HitchinPair, filt: Filtration, split: str | None = None) -> GradedData:
    """Graded pieces and induced maps ``phi_j: piece_j -> piece_{j+1} (x) L``.

    For the rank-3 intermediate chain ``split`` picks which two-step
    sub-chain is graded; by default the slope rule decides.
    """
    tops = _tops(pair, filt, split)
    l = pair.l_degree
    coords = [factor_through(tops[j + 1].basis, tops[j]) for j in range(len(tops) - 1)]
    projections = [quotient_map(coords[j], tops[j].twists) for j in range(len(coords))]
    projections.append(TwistedMatrix.identity(tops[-1].twists))
    maps = []
    for j in range(len(tops) - 1):
        try:
            D = factor_through(pair.higgs @ tops[j].basis, tops[j + 1].twist(l))
        except NotFactorable as exc:
            raise AssertionError("Phi does not respect the filtration") from exc
        G = projections[j + 1].twist(l) @ D
        psi = factor_through(G.T, projections[j].T).T
        maps.append(psi)
    pieces = tuple(tuple(pi.row_twists) for pi in projections)
    if sum(map(sum, pieces)) != pair.degree:
        raise AssertionError("graded degrees do not add up")
    if filt.kind == KERNEL_CHAIN and any(m.is_zero() for m in maps):
        raise AssertionError("vanishing induced map in a kernel chain")
    return GradedData(pieces, tuple(maps), tuple(tops), tuple(projections), tuple(coords))

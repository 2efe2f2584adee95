"""Slope stability of nilpotent Hitchin pairs and of Hodge bundles.

Stability only quantifies over Phi-invariant subbundles.  For the shapes
handled here those fall into finitely many families, and each family has a
member of maximal degree that can be written down directly:

* ``Phi = 0``: every subbundle is invariant; the maximal-degree rank-k
  subbundle of a split bundle is the sum of its k largest summands.
* regular ``Phi``: an invariant rank-k subbundle lies in ``ker Phi^k`` and so
  equals the k-th step from the bottom of the kernel chain.
* rank 3, ``Phi^2 = 0``: invariant lines lie in ``E_2 = ker Phi``; invariant
  planes are either ``E_2`` or contain ``E_3``, i.e. are preimages of lines in
  ``E/E_3``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Unsupported, UnsupportedType
from .filtration import kernel_filtration, rank3_filtration
from .model import HitchinPair, nilpotency_order, slope
from .polymat import (
    SubbundleBasis,
    TwistedMatrix,
    kernel_basis,
    max_line,
    quotient_map,
    saturate,
)

__all__ = [
    "StabilityCheck",
    "StabilityVerdict",
    "invariant_candidates",
    "is_stable",
    "is_stable_hodge",
]


@dataclass(frozen=True)
class StabilityCheck:
    description: str
    degree: int
    rank: int
    slope: Fraction
    bound: Fraction

    @property
    def passed(self) -> bool:
        return self.slope < self.bound


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    semistable: bool
    checks: tuple[StabilityCheck, ...]
    witness: StabilityCheck | None = None


def _verdict(checks: list[StabilityCheck]) -> StabilityVerdict:
    failing = [c for c in checks if not c.passed]
    witness = max(failing, key=lambda c: c.slope) if failing else None
    return StabilityVerdict(
        stable=not failing,
        semistable=all(c.slope <= c.bound for c in checks),
        checks=tuple(checks),
        witness=witness,
    )


def _top_coordinates(twists, k) -> SubbundleBasis:
    ident = TwistedMatrix.identity(twists)
    order = sorted(range(len(twists)), key=lambda i: -twists[i])[:k]
    return SubbundleBasis(ident.select_columns(sorted(order)), saturated=True)


def invariant_candidates(pair: HitchinPair) -> list[tuple[SubbundleBasis, str]]:
    """Invariant subbundles whose slopes bound those of every invariant subbundle."""
    p = nilpotency_order(pair)
    r = pair.rank
    if r == 1:
        return []
    if p == 1:
        return [(_top_coordinates(pair.twists, k), f"top {k} summands") for k in range(1, r)]
    if p == r:
        steps = kernel_filtration(pair).steps
        return [(s, f"E_{j + 1}") for j, s in enumerate(steps) if j > 0]
    if r == 3 and p == 2:
        _, e2, e3 = rank3_filtration(pair).steps
        pi = quotient_map(e3.basis, pair.twists)
        top = max(range(pi.nrows), key=lambda i: (pi.row_twists[i], -i))
        rest = [i for i in range(pi.nrows) if i != top]
        preimage = kernel_basis(pi.select_rows(rest))
        return [
            (max_line(e2), "max line of E_2"),
            (e2, "E_2"),
            (preimage, "preimage of max line of E/E_3"),
        ]
    raise Unsupported(f"rank {r} nilpotent of order {p} is neither zero nor regular")


def is_stable(pair: HitchinPair) -> StabilityVerdict:
    mu = slope(pair.degree, pair.rank)
    checks = [
        StabilityCheck(desc, B.degree, B.rank, slope(B.degree, B.rank), mu)
        for B, desc in invariant_candidates(pair)
    ]
    return _verdict(checks)


def _check(desc, degree, rank, mu) -> StabilityCheck:
    return StabilityCheck(desc, degree, rank, slope(degree, rank), mu)


def is_stable_hodge(h) -> StabilityVerdict:
    """Stability of a Hodge bundle of type (r), (1,...,1), (1,2) or (2,1)."""
    types = tuple(h.type_vector)
    pieces = [tuple(t) for t in h.piece_twists]
    r = sum(types)
    d = sum(map(sum, pieces))
    mu = slope(d, r)
    if any(m.is_zero() for m in h.maps):
        raise UnsupportedType("Hodge bundle with a vanishing map")
    if len(types) == 1:
        tw = sorted(pieces[0], reverse=True)
        return _verdict([_check(f"top {k} summands", sum(tw[:k]), k, mu) for k in range(1, r)])
    if all(t == 1 for t in types):
        checks = []
        for l in range(1, len(pieces)):
            tail = pieces[l:]
            checks.append(_check(f"tail from piece {l + 1}", sum(map(sum, tail)), len(tail), mu))
        return _verdict(checks)
    if types == (1, 2):
        (v1,), v2 = pieces
        phi = h.maps[0]
        image = saturate(phi)
        image_degree = image.twists[0] - h.l_degree
        return _verdict([
            _check("max line of V_2", max(v2), 1, mu),
            _check("V_2", sum(v2), 2, mu),
            _check("V_1 + image line", v1 + image_degree, 2, mu),
        ])
    if types == (2, 1):
        w1, (w2,) = pieces
        phi = h.maps[0]
        ker = kernel_basis(phi)
        return _verdict([
            _check("max line of W_1 + W_2", max(w1) + w2, 2, mu),
            _check("W_2", w2, 1, mu),
            _check("ker phi", sum(ker.twists), 1, mu),
        ])
    raise UnsupportedType(f"Hodge bundle of type {types}")

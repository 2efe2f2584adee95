"""The C*-flow ``z -> (E, z Phi)`` computed in an adapted frame.

Over the affine chart every filtration splits, so there is a frame whose
trailing column blocks span the steps of the filtration.  Grading the frame
by blocks and conjugating ``z Phi`` by ``g(z) = diag(1, z, z^2, ...)`` (weight
``k - 1`` on block ``k``) multiplies block ``(i, j)`` by ``z^(1 + j - i)``.
A Higgs field that respects the filtration only has blocks with ``i > j``, so
the flow converges; the surviving ``i = j + 1`` blocks are the graded maps.
Any block on or above the diagonal gives a positive exponent and diverges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import Divergent
from .filtration import (
    RANK3_INTERMEDIATE,
    Filtration,
    kernel_filtration,
    preferred_split,
    rank3_filtration,
)
from .forms import LaurentZ, Poly
from .limits import Case, HodgeBundle, classify, limit
from .model import HitchinPair
from .polymat import (
    PolyMatrix,
    _pident,
    _pzero,
    factor_through,
    pmat_det,
    pmat_inverse,
    pmat_mul,
    unimodular_complement,
)

__all__ = [
    "AdaptedFrame",
    "FlowMatrix",
    "FlowReport",
    "adapted_frame",
    "identity_frame",
    "conjugate_flow",
    "flow_limit",
    "extension_weight_table",
    "weight_gauge",
    "run_flow",
    "forced_flow",
]


def _offsets(sizes: Sequence[int]) -> list[int]:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def _block_of(sizes: Sequence[int]) -> list[int]:
    return [k for k, s in enumerate(sizes) for _ in range(s)]


@dataclass(frozen=True)
class AdaptedFrame:
    """Affine change of basis whose trailing blocks span the filtration.

    ``top_coords[k]`` expresses the columns of block ``k`` in the basis of the
    ``k``-th graded top (the step whose quotient is piece ``k``).
    """

    change_of_basis: PolyMatrix
    block_sizes: tuple[int, ...]
    top_coords: tuple[PolyMatrix, ...] = field(default=(), repr=False)

    @property
    def determinant(self) -> Poly:
        return pmat_det(self.change_of_basis)

    def regauge(self, U: PolyMatrix) -> "AdaptedFrame":
        """Right-multiply by a block lower-triangular unimodular ``U``.

        Such ``U`` keeps every trailing group of blocks spanning the same
        step, so the result is again adapted to the filtration.
        """
        off = _offsets(self.block_sizes)
        blk = _block_of(self.block_sizes)
        n = off[-1]
        for i in range(n):
            for j in range(n):
                if blk[i] < blk[j] and U[i][j]:
                    raise ValueError("regauge matrix is not block lower-triangular")
        coords = []
        for k, Q in enumerate(self.top_coords):
            Ukk = [row[off[k]:off[k + 1]] for row in U[off[k]:off[k + 1]]]
            coords.append(pmat_mul(Q, Ukk))
        return AdaptedFrame(pmat_mul(self.change_of_basis, U), self.block_sizes, tuple(coords))


def _affine(M) -> PolyMatrix:
    return [list(row) for row in M.dehomogenize()]


def _chain_and_groups(pair: HitchinPair, filt: Filtration | None, split: str | None):
    """Full chain of steps and the step index starting each block group."""
    if filt is None:
        cls = classify(pair)
        if cls.case is Case.ZERO or cls.case is Case.REGULAR:
            filt = kernel_filtration(pair)
        else:
            filt = rank3_filtration(pair)
            if split is None:
                split = "kernel" if cls.case is Case.INTERMEDIATE_C1 else "image"
    steps = list(filt.steps)
    if filt.kind == RANK3_INTERMEDIATE:
        if split is None:
            split = preferred_split(pair, filt)
        starts = [0, 1] if split == "kernel" else [0, 2]
    else:
        starts = list(range(len(steps)))
    return steps, starts


def adapted_frame(pair: HitchinPair, filt: Filtration | None = None,
                  split: str | None = None) -> AdaptedFrame:
    steps, starts = _chain_and_groups(pair, filt, split)
    m = len(steps)
    # C[j]: affine coordinates of step j+1 in the basis of step j
    C = [_affine(factor_through(steps[j + 1].basis, steps[j])) for j in range(m - 1)]
    blocks = []  # block j columns in step-j coordinates
    for j in range(m):
        rj = steps[j].rank
        if j == m - 1:
            blocks.append(_pident(rj))
        else:
            blocks.append(unimodular_complement(C[j], rj, steps[j + 1].rank))

    def lift(j: int, i: int) -> PolyMatrix:
        """Block j columns in step-i coordinates (i <= j)."""
        M = blocks[j]
        for t in range(j - 1, i - 1, -1):
            M = pmat_mul(C[t], M)
        return M

    ambient = _affine(steps[0].basis)
    n = pair.rank
    columns = [pmat_mul(ambient, lift(j, 0)) for j in range(m)]
    F = [[entry for M in columns for entry in M[i]] for i in range(n)]
    bounds = starts + [m]
    sizes, coords = [], []
    for g in range(len(starts)):
        s, e = bounds[g], bounds[g + 1]
        parts = [lift(j, s) for j in range(s, e)]
        rows = steps[s].rank
        coords.append([[x for P in parts for x in P[i]] for i in range(rows)])
        sizes.append(sum(steps[j].rank - (steps[j + 1].rank if j + 1 < m else 0)
                         for j in range(s, e)))
    frame = AdaptedFrame(F, tuple(sizes), tuple(coords))
    if frame.determinant.degree != 0:
        raise AssertionError("adapted frame is not unimodular")
    return frame


def identity_frame(n: int) -> AdaptedFrame:
    ident = _pident(n)
    return AdaptedFrame(ident, (1,) * n, tuple([[Poly.const(1)]] for _ in range(n)))


@dataclass(frozen=True)
class FlowMatrix:
    entries: tuple[tuple[LaurentZ, ...], ...]
    block_sizes: tuple[int, ...]
    frame: AdaptedFrame | None = field(default=None, repr=False, compare=False)

    def block(self, i: int, j: int) -> list[list[LaurentZ]]:
        off = _offsets(self.block_sizes)
        return [list(row[off[j]:off[j + 1]]) for row in self.entries[off[i]:off[i + 1]]]


def conjugate_flow(pair: HitchinPair, frame: AdaptedFrame) -> FlowMatrix:
    F = frame.change_of_basis
    conj = pmat_mul(pmat_inverse(F), pmat_mul(_affine(pair.higgs), F))
    blk = _block_of(frame.block_sizes)
    n = len(F)
    entries = tuple(
        tuple(LaurentZ({1 + blk[b] - blk[a]: conj[a][b]}) for b in range(n))
        for a in range(n)
    )
    return FlowMatrix(entries, tuple(frame.block_sizes), frame)


@dataclass(frozen=True)
class FlowReport:
    limit_matrix: PolyMatrix
    exponent_table: tuple[tuple[int | None, ...], ...]
    diverges: bool
    matches_prediction: bool

    @property
    def decaying(self) -> dict[tuple[int, int], int]:
        """Blocks (1-based) whose terms vanish in the limit, with their exponent."""
        return {(i + 1, j + 1): e for i, row in enumerate(self.exponent_table)
                for j, e in enumerate(row) if e is not None and e < 0}


def _exponent_table(fm: FlowMatrix):
    k = len(fm.block_sizes)
    table = []
    for i in range(k):
        row = []
        for j in range(k):
            exps = {e for r in fm.block(i, j) for z in r for e in z.exponents}
            if len(exps) > 1:
                raise AssertionError(f"block ({i + 1},{j + 1}) mixes exponents {sorted(exps)}")
            row.append(exps.pop() if exps else None)
        table.append(tuple(row))
    return tuple(table)


def _predicted_blocks(frame: AdaptedFrame, predicted: HodgeBundle):
    g = predicted.graded
    P = [pmat_mul(_affine(pi), Q) for pi, Q in zip(g.projections, frame.top_coords)]
    out = {}
    for k, psi in enumerate(predicted.maps):
        out[(k + 1, k)] = pmat_mul(pmat_inverse(P[k + 1]), pmat_mul(_affine(psi), P[k]))
    return out


def flow_limit(fm: FlowMatrix, predicted: HodgeBundle | None = None) -> FlowReport:
    table = _exponent_table(fm)
    if any(e is not None and e > 0 for row in table for e in row):
        raise Divergent({(i + 1, j + 1): e for i, row in enumerate(table)
                         for j, e in enumerate(row) if e is not None})
    limit_matrix = [[z.coeff(0, Poly()) for z in row] for row in fm.entries]
    matches = False
    if (predicted is not None and predicted.graded is not None and fm.frame is not None
            and tuple(predicted.type_vector) == tuple(fm.block_sizes)):
        expected = _predicted_blocks(fm.frame, predicted)
        off = _offsets(fm.block_sizes)
        n = off[-1]
        want = _pzero(n, n)
        for (i, j), M in expected.items():
            for a, row in enumerate(M):
                for b, v in enumerate(row):
                    want[off[i] + a][off[j] + b] = v
        matches = want == limit_matrix
    return FlowReport(limit_matrix, table, False, matches)


def extension_weight_table(block_sizes: Sequence[int]):
    """z-exponents picked up by the extension terms of the holomorphic structure."""
    k = len(block_sizes)
    return tuple(tuple(j - i if i > j else (0 if i == j else None) for j in range(k))
                 for i in range(k))


def weight_gauge(h: HodgeBundle, lam) -> HodgeBundle:
    """Conjugate ``lam * Phi`` by the weight gauge ``diag(1, lam, lam^2, ...)``.

    For a Hodge bundle every map has weight one, so the result equals ``h``.
    """
    lam = Fraction(lam)
    maps = tuple(phi.scale(lam * lam ** k / lam ** (k + 1)) for k, phi in enumerate(h.maps))
    return HodgeBundle(h.type_vector, h.piece_twists, maps, h.l_degree, h.graded)


def run_flow(pair: HitchinPair) -> tuple[HodgeBundle, AdaptedFrame, FlowReport]:
    predicted = limit(pair)
    frame = adapted_frame(pair)
    return predicted, frame, flow_limit(conjugate_flow(pair, frame), predicted)


def forced_flow(pair: HitchinPair) -> FlowReport:
    """Run the flow in the coordinate frame with one block per summand."""
    return flow_limit(conjugate_flow(pair, identity_frame(pair.rank)))

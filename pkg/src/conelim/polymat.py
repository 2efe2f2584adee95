"""Linear algebra over the homogeneous coordinate ring of the projective line.

A split bundle ``O(a_1) + ... + O(a_n)`` on P^1 is described by its twists.
A :class:`TwistedMatrix` with row twists ``r`` and column twists ``c`` is a
bundle map ``sum O(c_j) -> sum O(r_i)``; entry ``(i, j)`` is a binary form of
degree ``r_i - c_j`` (zero when that is negative).

Subbundles are presented by a basis matrix whose rows carry the ambient twists
and whose columns carry the subbundle's own twists.  Every subbundle of a split
bundle on P^1 splits, so a *saturated* basis (maximal minors with constant gcd)
reads off the splitting type from its column twists.

Kernels and saturations are computed on the affine chart ``Y = 1`` with
Euclidean column operations over Q[x], then column-reduced with respect to the
ambient twists so that the basis is also saturated at infinity; a final
degree-by-degree pass picks a canonical basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from . import _linalg
from .errors import NotFactorable, NotSaturated, RankDeficient, TwistError
from .forms import ZERO, BinaryForm, Poly

__all__ = [
    "TwistedMatrix",
    "SubbundleBasis",
    "kernel_basis",
    "saturate",
    "splitting_type",
    "subbundle_degree",
    "degree_from_minors",
    "minors_gcd",
    "is_saturated",
    "factor_through",
    "quotient_map",
    "max_line",
    "form_det",
    "pmat_mul",
    "pmat_det",
    "pmat_inverse",
    "unimodular_complement",
    "column_echelon",
]

PolyMatrix = list  # list[list[Poly]]


@dataclass(frozen=True)
class TwistedMatrix:
    row_twists: tuple[int, ...]
    col_twists: tuple[int, ...]
    entries: tuple[tuple[BinaryForm, ...], ...]

    def __post_init__(self):
        rows = tuple(int(t) for t in self.row_twists)
        cols = tuple(int(t) for t in self.col_twists)
        entries = tuple(tuple(row) for row in self.entries)
        if len(entries) != len(rows) or any(len(row) != len(cols) for row in entries):
            raise ValueError(
                f"entries shape does not match twists {len(rows)}x{len(cols)}"
            )
        object.__setattr__(self, "row_twists", rows)
        object.__setattr__(self, "col_twists", cols)
        object.__setattr__(self, "entries", entries)

    # construction -----------------------------------------------------------
    @classmethod
    def zeros(cls, row_twists: Sequence[int], col_twists: Sequence[int]) -> "TwistedMatrix":
        return cls(tuple(row_twists), tuple(col_twists),
                   tuple(tuple(ZERO for _ in col_twists) for _ in row_twists))

    @classmethod
    def identity(cls, twists: Sequence[int]) -> "TwistedMatrix":
        n = len(twists)
        one = BinaryForm.const(1)
        return cls(tuple(twists), tuple(twists),
                   tuple(tuple(one if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def from_affine(cls, P: PolyMatrix, row_twists, col_twists) -> "TwistedMatrix":
        return cls(tuple(row_twists), tuple(col_twists), tuple(
            tuple(P[i][j].homogenize(r - c) for j, c in enumerate(col_twists))
            for i, r in enumerate(row_twists)
        ))

    # shape ------------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.row_twists)

    @property
    def ncols(self) -> int:
        return len(self.col_twists)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[BinaryForm, ...]:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        return not any(e for row in self.entries for e in row)

    def expected_degree(self, i: int, j: int) -> int:
        return self.row_twists[i] - self.col_twists[j]

    def violations(self) -> list[tuple[int, int, int, int]]:
        """Entries breaking the degree law, as (i, j, expected, found)."""
        bad = []
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if e and e.degree != self.expected_degree(i, j):
                    bad.append((i, j, self.expected_degree(i, j), e.degree))
        return bad

    def check(self) -> "TwistedMatrix":
        bad = self.violations()
        if bad:
            i, j, exp, found = bad[0]
            raise TwistError(f"entry ({i + 1},{j + 1}) has degree {found}, expected {exp}")
        return self

    # algebra ----------------------------------------------------------------
    @property
    def T(self) -> "TwistedMatrix":
        """Transpose, read as the dual map."""
        return TwistedMatrix(tuple(-c for c in self.col_twists), tuple(-r for r in self.row_twists),
                             tuple(zip(*self.entries)) if self.nrows else
                             tuple(() for _ in self.col_twists))

    def twist(self, shift: int) -> "TwistedMatrix":
        """Tensor source and target with O(shift)."""
        return TwistedMatrix(tuple(r + shift for r in self.row_twists),
                             tuple(c + shift for c in self.col_twists), self.entries)

    def __matmul__(self, other: "TwistedMatrix") -> "TwistedMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        shifts = {a - b for a, b in zip(self.col_twists, other.row_twists)}
        if len(shifts) > 1:
            raise TwistError("inner twists differ by a non-uniform shift")
        s = shifts.pop() if shifts else 0
        entries = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = ZERO
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            entries.append(tuple(row))
        return TwistedMatrix(tuple(r - s for r in self.row_twists), other.col_twists, tuple(entries))

    def __add__(self, other: "TwistedMatrix") -> "TwistedMatrix":
        if (self.row_twists, self.col_twists) != (other.row_twists, other.col_twists):
            raise TwistError("cannot add twisted matrices with different twists")
        return TwistedMatrix(self.row_twists, self.col_twists, tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        ))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, lam) -> "TwistedMatrix":
        return TwistedMatrix(self.row_twists, self.col_twists,
                             tuple(tuple(e * Fraction(lam) for e in row) for row in self.entries))

    def select_columns(self, cols: Sequence[int]) -> "TwistedMatrix":
        return TwistedMatrix(self.row_twists, tuple(self.col_twists[j] for j in cols),
                             tuple(tuple(row[j] for j in cols) for row in self.entries))

    def select_rows(self, rows: Sequence[int]) -> "TwistedMatrix":
        return TwistedMatrix(tuple(self.row_twists[i] for i in rows), self.col_twists,
                             tuple(self.entries[i] for i in rows))

    def hstack(self, other: "TwistedMatrix") -> "TwistedMatrix":
        if self.row_twists != other.row_twists:
            raise TwistError("row twists differ")
        return TwistedMatrix(self.row_twists, self.col_twists + other.col_twists,
                             tuple(a + b for a, b in zip(self.entries, other.entries)))

    def dehomogenize(self) -> PolyMatrix:
        return [[e.dehomogenize() for e in row] for row in self.entries]

    def __str__(self):
        body = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)
        return f"[{body}] rows{list(self.row_twists)} cols{list(self.col_twists)}"


@dataclass(frozen=True)
class SubbundleBasis:
    """Columns of ``basis`` span a subbundle of the bundle with twists ``basis.row_twists``."""

    basis: TwistedMatrix
    saturated: bool = False

    def __post_init__(self):
        if self.basis.ncols == 0:
            raise ValueError("a subbundle basis needs at least one column")
        if any(not any(self.basis.column(j)) for j in range(self.basis.ncols)):
            raise ValueError("a subbundle basis cannot contain a zero column")

    @property
    def rank(self) -> int:
        return self.basis.ncols

    @property
    def ambient(self) -> tuple[int, ...]:
        return self.basis.row_twists

    @property
    def twists(self) -> tuple[int, ...]:
        return self.basis.col_twists

    @property
    def degree(self) -> int:
        if not self.saturated:
            raise NotSaturated("degree of an unsaturated basis is not its bundle degree")
        return sum(self.basis.col_twists)

    def twist(self, shift: int) -> "SubbundleBasis":
        return SubbundleBasis(self.basis.twist(shift), self.saturated)


# --------------------------------------------------------------------------
# polynomial matrices over Q[x]


def _pzero(n, m):
    return [[Poly() for _ in range(m)] for _ in range(n)]


def _pident(n):
    return [[Poly.const(1) if i == j else Poly() for j in range(n)] for i in range(n)]


def pmat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    out = _pzero(len(A), ncols)
    for i in range(len(A)):
        for k in range(inner):
            a = A[i][k]
            if not a:
                continue
            for j in range(ncols):
                if B[k][j]:
                    out[i][j] = out[i][j] + a * B[k][j]
    return out


def pmat_det(A: PolyMatrix) -> Poly:
    n = len(A)
    if n == 0:
        return Poly.const(1)
    total = Poly()
    for perm in permutations(range(n)):
        term = Poly.const(_perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * A[i][j]
            if not term:
                break
        total = total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length, j = 0, start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def pmat_inverse(A: PolyMatrix) -> PolyMatrix:
    """Inverse of a square polynomial matrix with constant nonzero determinant."""
    n = len(A)
    d = pmat_det(A)
    if d.degree != 0:
        raise ValueError("matrix is not unimodular over Q[x]")
    inv = 1 / d.lead
    out = _pzero(n, n)
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = pmat_det(minor) * ((-1) ** (i + j))
            out[j][i] = cof * inv
    return out


def column_echelon(P: PolyMatrix, ncols: int):
    """Euclidean column reduction ``P @ V = [H | 0]``.

    Returns ``(rank, V, Vinv)`` with ``V`` unimodular; the trailing
    ``ncols - rank`` columns of ``V`` span the kernel of ``P`` over Q[x].
    """
    A = [list(row) for row in P]
    V = _pident(ncols)
    Vinv = _pident(ncols)
    r = 0
    for i in range(len(A)):
        if r == ncols:
            break
        while True:
            nz = [c for c in range(r, ncols) if A[i][c]]
            if not nz:
                break
            c0 = min(nz, key=lambda c: (A[i][c].degree, c))
            if c0 != r:
                for M in (A, V):
                    for row in M:
                        row[r], row[c0] = row[c0], row[r]
                Vinv[r], Vinv[c0] = Vinv[c0], Vinv[r]
            clean = True
            for c in range(r + 1, ncols):
                if not A[i][c]:
                    continue
                q = A[i][c] // A[i][r]
                for M in (A, V):
                    for row in M:
                        if row[r]:
                            row[c] = row[c] - q * row[r]
                Vinv[r] = [a + q * b for a, b in zip(Vinv[r], Vinv[c])]
                if A[i][c]:
                    clean = False
            if clean:
                break
        if r < ncols and A[i][r]:
            r += 1
    return r, V, Vinv


def _transpose(P: PolyMatrix, nrows: int, ncols: int) -> PolyMatrix:
    return [[P[i][j] for i in range(nrows)] for j in range(ncols)]


def _affine_saturation(P: PolyMatrix, n: int, k: int) -> PolyMatrix:
    """Q[x]-basis (n x k) of the saturation of the column span of ``P``."""
    PT = _transpose(P, n, k)
    rank, _, Vinv = column_echelon(PT, n)
    if rank < k:
        raise RankDeficient(f"columns have rank {rank} < {k}")
    return _transpose(Vinv[:k], k, n)


def unimodular_complement(C: PolyMatrix, n: int, k: int) -> PolyMatrix:
    """Columns ``D`` (n x (n-k)) with ``[D | C]`` unimodular.

    ``C`` must have unit maximal-minor ideal.  Coordinate vectors are tried
    first so that already-aligned subbundles keep a coordinate complement.
    """
    if k == n:
        return [[] for _ in range(n)]
    for subset in combinations(range(n), n - k):
        D = [[Poly.const(1) if i == s else Poly() for s in subset] for i in range(n)]
        full = [D[i] + list(C[i]) for i in range(n)]
        if pmat_det(full).degree == 0:
            return D
    PT = _transpose(C, n, k)
    rank, _, Vinv = column_echelon(PT, n)
    if rank < k:
        raise RankDeficient("columns are dependent")
    return _transpose(Vinv[k:], n - k, n)


def _shifted_degrees(K: PolyMatrix, shifts: Sequence[int], k: int) -> list[int]:
    degs = []
    for c in range(k):
        ds = [K[i][c].degree - shifts[i] for i in range(len(shifts)) if K[i][c]]
        if not ds:
            raise RankDeficient("zero column")
        degs.append(max(ds))
    return degs


def _column_reduce(K: PolyMatrix, shifts: Sequence[int], k: int):
    """Make the shifted leading-coefficient matrix of ``K`` full column rank.

    Returns ``(K, d)`` where column ``c`` has shifted degree ``d[c]``; the
    homogenized columns then form a basis of the saturated module with
    splitting type ``-d``.
    """
    K = [list(row) for row in K]
    n = len(shifts)
    while True:
        d = _shifted_degrees(K, shifts, k)
        L = [[K[i][c].coeff(shifts[i] + d[c]) for c in range(k)] for i in range(n)]
        null = _linalg.nullspace(L, k)
        if not null:
            return K, d
        alpha = null[0]
        cstar = max((d[c], c) for c in range(k) if alpha[c] != 0)[1]
        new = [Poly() for _ in range(n)]
        for c in range(k):
            if alpha[c] == 0:
                continue
            mono = Poly.monomial(d[cstar] - d[c], alpha[c] / alpha[cstar])
            for i in range(n):
                if K[i][c]:
                    new[i] = new[i] + mono * K[i][c]
        for i in range(n):
            K[i][cstar] = new[i]


# --------------------------------------------------------------------------
# graded pieces and canonical bases


def _layout(twists: Sequence[int], m: int):
    """Offsets of each summand's coefficient block in H^0(sum O(t_i + m))."""
    offsets, pos = [], 0
    for t in twists:
        offsets.append(pos)
        pos += max(0, t + m + 1)
    return offsets, pos


def _column_sections(col: Sequence[BinaryForm], rows: Sequence[int], b: int, m: int):
    """Coordinate vectors of monomial multiples of a column of twist ``b`` in degree ``m``."""
    e = b + m
    offsets, size = _layout(rows, m)
    out = []
    for s in range(e + 1):
        mono = BinaryForm.monomial(s, e - s)
        v = [Fraction(0)] * size
        for i, f in enumerate(col):
            if f:
                g = f * mono
                for k, c in enumerate(g.coeffs):
                    v[offsets[i] + k] = c
        out.append(v)
    return out


def _vector_to_column(v, rows: Sequence[int], m: int) -> tuple[BinaryForm, ...]:
    offsets, _ = _layout(rows, m)
    col = []
    for i, t in enumerate(rows):
        deg = t + m
        if deg < 0:
            col.append(ZERO)
        else:
            col.append(BinaryForm(v[offsets[i]:offsets[i] + deg + 1]))
    return tuple(col)


def _canonical(B: TwistedMatrix) -> TwistedMatrix:
    """Canonical minimal basis of the module generated by a minimal basis ``B``.

    Degrees ascend (twists descend); within one degree the new generators are
    the reduced echelon basis of the sections vanishing on the pivot
    coordinates of the part generated in lower degrees.
    """
    rows = B.row_twists
    order = sorted(set(-b for b in B.col_twists))
    chosen: list[tuple[int, tuple[BinaryForm, ...]]] = []
    for m in order:
        _, size = _layout(rows, m)
        span = []
        for j, b in enumerate(B.col_twists):
            if b + m >= 0:
                span += _column_sections(B.column(j), rows, b, m)
        lower = []
        for bm, col in chosen:
            lower += _column_sections(col, rows, -bm, m)
        U, upiv = _linalg.rref(lower, size) if lower else ([], [])
        residues = [_linalg.reduce_against(v, U, upiv) for v in span]
        R, _ = _linalg.rref([r for r in residues if any(r)], size) if residues else ([], [])
        want = sum(1 for b in B.col_twists if b == -m)
        if len(R) != want:
            raise RuntimeError("basis is not minimal: generator count mismatch")
        chosen += [(m, _vector_to_column(v, rows, m)) for v in R]
    cols = [c for _, c in chosen]
    twists = tuple(-m for m, _ in chosen)
    entries = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(rows)))
    return TwistedMatrix(rows, twists, entries)


def _from_reduced(K: PolyMatrix, d: Sequence[int], rows: Sequence[int]) -> SubbundleBasis:
    B = TwistedMatrix.from_affine(K, rows, [-x for x in d])
    return SubbundleBasis(_canonical(B), saturated=True)


# --------------------------------------------------------------------------
# public operations


def kernel_basis(M: TwistedMatrix) -> SubbundleBasis | None:
    """Saturated, canonical basis of the kernel subbundle of ``M``.

    Returns None when ``M`` is injective.
    """
    M.check()
    n = M.ncols
    if n == 0:
        return None
    if M.nrows == 0 or M.is_zero():
        K = _pident(n)
        rank = 0
    else:
        rank, V, _ = column_echelon(M.dehomogenize(), n)
        K = [row[rank:] for row in V]
    k = n - rank
    if k == 0:
        return None
    K, d = _column_reduce(K, M.col_twists, k)
    return _from_reduced(K, d, M.col_twists)


def saturate(B: TwistedMatrix | SubbundleBasis) -> SubbundleBasis:
    """Saturated canonical basis spanning the same subsheaf generically."""
    if isinstance(B, SubbundleBasis):
        B = B.basis
    B.check()
    n, k = B.shape
    if k == 0:
        raise ValueError("cannot saturate an empty basis")
    S = _affine_saturation(B.dehomogenize(), n, k)
    S, d = _column_reduce(S, B.row_twists, k)
    return _from_reduced(S, d, B.row_twists)


def splitting_type(B: SubbundleBasis) -> tuple[int, ...]:
    """Degrees of the line-bundle summands, largest first."""
    if not B.saturated:
        raise NotSaturated("splitting type needs a saturated basis")
    return tuple(sorted(saturate(B.basis).twists, reverse=True))


def subbundle_degree(B: SubbundleBasis) -> int:
    return sum(splitting_type(B))


def form_det(rows: Sequence[Sequence[BinaryForm]]) -> BinaryForm:
    n = len(rows)
    if n == 0:
        return BinaryForm.const(1)
    total = ZERO
    for perm in permutations(range(n)):
        term = BinaryForm.const(_perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if not term:
                break
        total = total + term
    return total


def minors_gcd(B: TwistedMatrix) -> BinaryForm:
    """Monic gcd of all maximal minors of a full-column-rank basis."""
    n, k = B.shape
    g = ZERO
    for rows in combinations(range(n), k):
        g = g.gcd(form_det([[B.entries[i][j] for j in range(k)] for i in rows]))
    return g


def is_saturated(B: TwistedMatrix) -> bool:
    g = minors_gcd(B)
    return bool(g) and g.degree == 0


def degree_from_minors(B: TwistedMatrix | SubbundleBasis) -> int:
    """Degree of the saturation of the column span, read off the minors."""
    if isinstance(B, SubbundleBasis):
        B = B.basis
    g = minors_gcd(B)
    if not g:
        raise RankDeficient("columns are dependent")
    return sum(B.col_twists) + g.degree


def factor_through(A: TwistedMatrix, B: SubbundleBasis | TwistedMatrix) -> TwistedMatrix:
    """Solve ``A = B @ C`` exactly for a polynomial matrix ``C``."""
    Bm = B.basis if isinstance(B, SubbundleBasis) else B
    if A.row_twists != Bm.row_twists:
        raise NotFactorable("A and B live in different ambient bundles")
    rows = Bm.row_twists
    k = Bm.ncols
    out_cols = []
    for j, t in enumerate(A.col_twists):
        target = A.column(j)
        # unknown c_i is a form of degree b_i - t
        unknown_blocks = []
        columns = []
        for i, b in enumerate(Bm.col_twists):
            e = b - t
            unknown_blocks.append(max(0, e + 1))
            if e >= 0:
                columns += _column_sections(Bm.column(i), rows, b, -t)
        _, size = _layout(rows, -t)
        rhs = [Fraction(0)] * size
        offsets, _ = _layout(rows, -t)
        for i, f in enumerate(target):
            if f:
                if f.degree != rows[i] - t:
                    raise NotFactorable("column degrees do not match the ambient twists")
                for kk, c in enumerate(f.coeffs):
                    rhs[offsets[i] + kk] = c
        if not columns:
            if any(rhs):
                raise NotFactorable("column outside the span")
            sol = []
        else:
            mat = [[columns[u][r] for u in range(len(columns))] for r in range(size)]
            sol = _linalg.solve(mat, rhs, len(columns))
            if sol is None:
                raise NotFactorable(f"column {j + 1} is not in the span of the basis")
        col, pos = [], 0
        for i, b in enumerate(Bm.col_twists):
            w = unknown_blocks[i]
            if w == 0:
                col.append(ZERO)
            else:
                # sections were generated for s = 0..e with monomial X^s Y^(e-s)
                col.append(BinaryForm(sol[pos:pos + w]))
            pos += w
        out_cols.append(col)
    entries = tuple(tuple(out_cols[j][i] for j in range(len(out_cols))) for i in range(k))
    return TwistedMatrix(Bm.col_twists, A.col_twists, entries)


def quotient_map(C: TwistedMatrix | SubbundleBasis | None, ambient: Sequence[int]) -> TwistedMatrix:
    """Surjection from the bundle with twists ``ambient`` onto its quotient by ``C``.

    The rows of the result carry the quotient's splitting type, largest first,
    and its kernel is exactly the subbundle spanned by ``C``.
    """
    ambient = tuple(ambient)
    if C is None:
        return TwistedMatrix.identity(ambient)
    Cm = C.basis if isinstance(C, SubbundleBasis) else C
    if Cm.row_twists != ambient:
        raise TwistError("subbundle basis does not live in the given ambient")
    W = kernel_basis(Cm.T)
    if W is None:
        return TwistedMatrix((), ambient, ())
    pi = W.basis.T
    return pi.select_rows(sorted(range(pi.nrows), key=lambda i: -pi.row_twists[i]))


def max_line(B: SubbundleBasis) -> SubbundleBasis:
    """A line subbundle of maximal degree inside a saturated subbundle."""
    canon = saturate(B.basis)
    j = max(range(canon.rank), key=lambda c: (canon.twists[c], -c))
    return SubbundleBasis(canon.basis.select_columns([j]), saturated=True)

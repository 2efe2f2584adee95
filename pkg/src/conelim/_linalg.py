"""Dense linear algebra over Q on lists of Fractions (small matrices only)."""
from __future__ import annotations

from fractions import Fraction


def rref(rows: list[list[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows, each with
    a unit pivot, and ``pivots[i]`` is the pivot column of ``R[i]``.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols=None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : rows @ v = 0}, one vector per free column, in column order."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows: list[list[Fraction]], rhs: list[Fraction], ncols: int):
    """One solution of ``rows @ v = rhs`` (free variables set to zero), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        v[p] = row[ncols]
    return v


def reduce_against(vec, echelon, pivots):
    """Reduce ``vec`` modulo the row space of an RREF basis."""
    v = list(vec)
    for row, p in zip(echelon, pivots):
        if v[p] != 0:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return v


def det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    sign = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        sign *= a[c][c]
    return sign


def inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]

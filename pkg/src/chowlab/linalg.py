"""Fraction-free (Bareiss) elimination over Q.

Rational rows are first scaled to integers; pivots are the first nonzero
entry in each column scanning rows top to bottom, so results are
deterministic.  Right-hand sides of :func:`solve` may be any values that
support ``+``, ``-`` and multiplication by rationals (e.g. GradedPoly).
"""

from fractions import Fraction
from math import lcm

from .errors import DegeneracyError, StructuralError

__all__ = ["rank", "determinant", "select_independent_rows", "solve", "kronecker"]


def _integer_rows(matrix):
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in row)) if row else 1
        rows.append(([int(x * scale) for x in row], scale))
    return rows


def _bareiss(a):
    """In-place fraction-free forward elimination; returns pivot columns."""
    n = len(a)
    m = len(a[0]) if n else 0
    prev = 1
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, n):
            f = a[i][c]
            for j in range(c + 1, m):
                a[i][j] = (piv * a[i][j] - f * a[r][j]) // prev
            a[i][c] = 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == n:
            break
    return pivots


def rank(matrix):
    a = [row for row, _ in _integer_rows(matrix)]
    return len(_bareiss(a))


def determinant(matrix):
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise StructuralError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    rows = _integer_rows(matrix)
    a = [row for row, _ in rows]
    scale = 1
    for _, s in rows:
        scale *= s
    sign = 1
    prev = 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = piv
    return Fraction(sign * a[n - 1][n - 1], scale)


def select_independent_rows(matrix):
    """Indices of the first maximal linearly independent set of rows."""
    chosen = []
    basis = []
    for idx, row in enumerate(matrix):
        trial = basis + [list(row)]
        if rank(trial) > len(basis):
            basis = trial
            chosen.append(idx)
    return chosen


def solve(matrix, rhs):
    """Solve the square system ``matrix @ x == rhs`` exactly."""
    n = len(matrix)
    if len(rhs) != n or any(len(row) != n for row in matrix):
        raise StructuralError("solve needs a square system with one right-hand side per row")
    if n == 0:
        return []
    rows = _integer_rows(matrix)
    a = [row for row, _ in rows]
    b = [v * s for v, (_, s) in zip(rhs, rows)]
    # Bareiss on the augmented system; rhs values are exact rationals/polys
    prev = 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            raise DegeneracyError("singular linear system")
        if p != c:
            a[c], a[p] = a[p], a[c]
            b[c], b[p] = b[p], b[c]
        piv = a[c][c]
        for i in range(c + 1, n):
            f = a[i][c]
            for j in range(c + 1, n):
                a[i][j] = (piv * a[i][j] - f * a[c][j]) // prev
            a[i][c] = 0
            b[i] = (b[i] * piv - b[c] * f) * Fraction(1, prev)
        prev = piv
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            if a[i][j]:
                acc = acc - x[j] * a[i][j]
        x[i] = acc * Fraction(1, a[i][i])
    return x


def kronecker(*matrices):
    out = [[Fraction(1)]]
    for M in matrices:
        out = [[x * y for x in ra for y in rb] for ra in out for rb in M]
    return out

"""Exact integer and rational linear algebra used throughout the package.

Everything here works over arbitrary-precision integers or
``fractions.Fraction``; no floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    if b == 0:
        if a < 0:
            return -a, -1, 0
        return a, 1, 0
    g, x, y = egcd(b, a % b)
    return g, y, x - (a // b) * y


def vec_gcd(coords) -> int:
    g = 0
    for c in coords:
        g = gcd(g, abs(c))
    return g


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def det2(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def det3(u, v, w) -> int:
    return (u[0] * (v[1] * w[2] - v[2] * w[1])
            - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def det(rows) -> int:
    """Determinant of a small square integer matrix (fraction-free expansion)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return det2(rows[0], rows[1])
    if n == 3:
        return det3(rows[0], rows[1], rows[2])
    total = 0
    sign = 1
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += sign * rows[0][j] * det(minor)
        sign = -sign
    return total


def int_rank(rows: list[list[int]]) -> int:
    """Rank over the rationals of an integer matrix, by Bareiss elimination.

    Fraction-free: all intermediate entries stay integral, so the result is
    exact for arbitrary input sizes.
    """
    if not rows:
        return 0
    m = [r[:] for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        for r in range(row + 1, nrows):
            factor = m[r][col]
            if factor == 0 and prev == 1:
                continue
            mr = m[r]
            mrow = m[row]
            for c in range(col, ncols):
                mr[c] = (p * mr[c] - factor * mrow[c]) // prev
        prev = p
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def solve_or_certificate(rows, rhs):
    """Solve A x = b over the rationals, or certify that no solution exists.

    Args:
      rows: matrix A as a list of rows (ints or Fractions).
      rhs: right-hand side b.

    Returns:
      ("solution", x) with A x = b, or
      ("certificate", phi) with phi . A = 0 but phi . b != 0.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    # Augment with b and an identity block that tracks row operations.
    aug = []
    for i in range(nrows):
        row = [Fraction(v) for v in rows[i]] + [Fraction(rhs[i])]
        row += [Fraction(1 if j == i else 0) for j in range(nrows)]
        aug.append(row)

    pivots = []  # (row, col)
    r = 0
    for col in range(ncols):
        piv = None
        for k in range(r, nrows):
            if aug[k][col] != 0:
                piv = k
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r]
        inv = 1 / pr[col]
        for c in range(len(pr)):
            pr[c] *= inv
        for k in range(nrows):
            if k != r and aug[k][col] != 0:
                f = aug[k][col]
                ak = aug[k]
                for c in range(len(ak)):
                    ak[c] -= f * pr[c]
        pivots.append((r, col))
        r += 1
        if r == nrows:
            break

    for k in range(r, nrows):
        if aug[k][ncols] != 0:
            phi = aug[k][ncols + 1:]
            return "certificate", phi

    x = [Fraction(0)] * ncols
    for row_i, col_i in pivots:
        x[col_i] = aug[row_i][ncols]
    return "solution", x


def unimodular_complement(r1: int, r2: int):
    """For primitive (r1, r2), a GL(2, Z) pair adapted to it.

    Returns (P, Q), both 2x2 integer matrices with det +1, such that
    Q @ (r1, r2) = (0, 1) and Q^T P = I (so the pairing <Pv, Qu> = <v, u>
    is preserved).
    """
    g, x, y = egcd(r1, r2)
    if g != 1:
        raise ValueError(f"({r1}, {r2}) is not primitive")
    q = ((r2, -r1), (x, y))
    p = ((y, -x), (r1, r2))
    return p, q


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    n = len(b)
    cols = len(b[0])
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                       for j in range(cols)) for i in range(len(a)))


def primitive(vec):
    """Scale a nonzero rational/integer vector to its primitive integer form."""
    fracs = [Fraction(c) for c in vec]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = vec_gcd(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(c // g for c in ints)

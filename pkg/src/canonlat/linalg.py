"""Exact dense linear algebra over the integers and rationals.

Matrices are tuples of row tuples. Entries are ``int`` or ``Fraction``;
nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from operator import mul
from typing import Iterable, Sequence

Number = int | Fraction
Matrix = tuple[tuple[Number, ...], ...]
Vector = tuple[Number, ...]


def as_matrix(rows: Iterable[Iterable[Number]]) -> Matrix:
    return tuple(tuple(_tidy(x) for x in row) for row in rows)


def _tidy(x: Number) -> Number:
    # Collapse integral fractions so equality and hashing are uniform.
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def tidy_vec(v: Iterable[Number]) -> Vector:
    return tuple(_tidy(x) for x in v)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def transpose(a: Sequence[Sequence[Number]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(_tidy(sum(map(mul, row, col))) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[Number]], v: Sequence[Number]) -> Vector:
    return tuple(_tidy(sum(map(mul, row, v))) for row in a)


def vecmat(v: Sequence[Number], a: Sequence[Sequence[Number]]) -> Vector:
    return matvec(transpose(a), v)


def bilinear(x: Sequence[Number], a: Sequence[Sequence[Number]], y: Sequence[Number]) -> Number:
    return _tidy(sum(xi * aij * yj for xi, row in zip(x, a) if xi
                     for aij, yj in zip(row, y) if aij and yj))


def add(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    return tuple(tuple(_tidy(x + y) for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    return tuple(tuple(_tidy(x - y) for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c: Number, a: Sequence[Sequence[Number]]) -> Matrix:
    return tuple(tuple(_tidy(c * x) for x in r) for r in a)


def vadd(x: Sequence[Number], y: Sequence[Number]) -> Vector:
    return tuple(_tidy(a + b) for a, b in zip(x, y))


def vsub(x: Sequence[Number], y: Sequence[Number]) -> Vector:
    return tuple(_tidy(a - b) for a, b in zip(x, y))


def vscale(c: Number, x: Sequence[Number]) -> Vector:
    return tuple(_tidy(c * a) for a in x)


def dot(x: Sequence[Number], y: Sequence[Number]) -> Number:
    return _tidy(sum(a * b for a, b in zip(x, y)))


def is_zero(a: Sequence[Sequence[Number]]) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_power(a: Matrix, k: int) -> Matrix:
    if k < 0:
        a, k = inverse(a), -k
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def _echelon(rows: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Sequence[Sequence[Number]]) -> int:
    return len(_echelon(a)[1])


def rref(a: Sequence[Sequence[Number]]) -> Matrix:
    return as_matrix(_echelon(a)[0])


def nullspace(a: Sequence[Sequence[Number]], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0}, primitive integer vectors when possible."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    red, pivots = _echelon(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(primitive(v))
    return basis


def primitive(v: Sequence[Number]) -> Vector:
    """Clear denominators and divide out the content."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def solve(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> Vector | None:
    """One solution of a x = b, or None when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [y] for r, y in zip(a, b)]
    red, pivots = _echelon(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tidy_vec(x)


def inverse(a: Sequence[Sequence[Number]]) -> Matrix:
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, identity(n))]
    red, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return as_matrix(row[n:] for row in red)


def det(a: Sequence[Sequence[Number]]) -> Number:
    """Bareiss fraction-free elimination (exact for int and Fraction input)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev: Number = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = m[k][k]
    return _tidy(sign * m[n - 1][n - 1])


def char_poly(a: Sequence[Sequence[Number]]) -> tuple[Number, ...]:
    """Coefficients of det(xI - a), highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs: list[Number] = [1]
    m = zeros(n, n)
    ident = identity(n)
    for k in range(1, n + 1):
        m = add(matmul(a, m), scale(coeffs[-1], ident))
        tr = sum(row[i] for i, row in enumerate(matmul(a, m)))
        ck = Fraction(-tr, k)
        coeffs.append(_tidy(ck))
    return tuple(coeffs)


def poly_mul(p: Sequence[Number], q: Sequence[Number]) -> tuple[Number, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return tuple(out)


def congruence_diagonal(a: Sequence[Sequence[Number]]) -> tuple[list[Fraction], Matrix]:
    """Return (d, P) with P a Pᵀ-congruence: P·a·Pᵀ = diag(d).

    Rows of P are the new basis vectors. A zero pivot with a nonzero
    off-diagonal partner is repaired by the substitution (u+v, u-v).
    """
    n = len(a)
    m = [[Fraction(x) for x in r] for r in a]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def row_op(i: int, j: int, c: Fraction) -> None:
        # new row i = row i + c * row j, applied as a congruence
        m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        for r in m:
            r[i] += c * r[j]
        p[i] = [x + c * y for x, y in zip(p[i], p[j])]

    def swap(i: int, j: int) -> None:
        m[i], m[j] = m[j], m[i]
        for r in m:
            r[i], r[j] = r[j], r[i]
        p[i], p[j] = p[j], p[i]

    for k in range(n):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][i] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                partner = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if partner is None:
                    continue
                # (u, v) -> (u + v, .) makes the (k, k) entry 2*m[k][j] != 0
                row_op(k, partner, Fraction(1))
        pivot = m[k][k]
        if pivot == 0:
            continue
        for i in range(k + 1, n):
            if m[i][k] != 0:
                row_op(i, k, -m[i][k] / pivot)
    return [m[i][i] for i in range(n)], as_matrix(p)


def hermite_rows(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form of the integer row span (zero rows dropped)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # Euclid down the column until one nonzero entry remains at row r
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r] if any(row))


def fmt_number(x: Number) -> str:
    x = _tidy(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)

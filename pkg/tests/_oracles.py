"""Independent exact oracles built on sympy."""

import sympy

_x = sympy.Symbol("x")


def _variations(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def inertia(sym_rows):
    """(positive, zero, negative) eigenvalue counts of a symmetric rational matrix.

    All roots of the characteristic polynomial are real, so Descartes' rule is exact.
    """
    p = sympy.Poly(sympy.Matrix(sym_rows).charpoly(_x).as_expr(), _x)
    coeffs = p.all_coeffs()
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1
    pos = _variations(coeffs)
    deg = len(coeffs) - 1
    neg = _variations([c * (-1) ** (deg - k) for k, c in enumerate(coeffs)])
    return pos, zero, neg


def charpoly(rows):
    return [int(c) for c in sympy.Matrix(rows).charpoly(_x).all_coeffs()]

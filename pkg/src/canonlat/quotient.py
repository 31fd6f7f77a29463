"""The split epimorphism W -> W_o, root decomposition and the quotient diagram."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg as la
from .errors import MixedSigns, NotBlockTriangular, NotDecomposable
from .group import MatrixElem
from .lattice import CanonicalLattice

POSITIVE = "Positive"
NEGATIVE = "Negative"


@dataclass(frozen=True)
class DiagramEdge:
    u: int
    v: int
    label: tuple[Fraction | int, Fraction | int]


@dataclass(frozen=True, eq=False)
class QuotientData:
    lat: CanonicalLattice
    m: int
    basis_map: tuple[str, ...]
    change_of_basis: la.Matrix
    change_inverse: la.Matrix
    B0: la.Matrix
    diagram: tuple[DiagramEdge, ...]

    def to_new(self, x: Sequence) -> tuple:
        return la.matvec(self.change_of_basis, x)

    def to_old(self, y: Sequence) -> tuple:
        return la.matvec(self.change_inverse, y)

    def in_new_basis(self, g: MatrixElem) -> la.Matrix:
        return la.matmul(la.matmul(self.change_of_basis, g.mat), self.change_inverse)


@dataclass(frozen=True)
class RootDecomposition:
    d: int
    beta0: tuple[int, ...]
    k: int


def diagram_edges(gram: la.Matrix) -> tuple[DiagramEdge, ...]:
    """Edges u < v with nonzero pairing, labelled (-(u | v#), -(u# | v))."""
    out = []
    n = len(gram)
    for u in range(n):
        for v in range(u + 1, n):
            if gram[u][v]:
                luv = la._tidy(Fraction(-2 * gram[u][v], gram[v][v]))
                lvu = la._tidy(Fraction(-2 * gram[u][v], gram[u][u]))
                out.append(DiagramEdge(u, v, (luv, lvu)))
    return tuple(out)


def build_quotient(lat: CanonicalLattice) -> QuotientData:
    n, eps = lat.n, lat.symbol.epsilon
    m = n - 1
    P = [list(r) for r in la.identity(n)]
    # alpha_0* = eps * alpha_0 + a, so the alpha_0 coordinate absorbs eps * x_0*
    P[lat.i0][lat.i0s] = eps
    P = la.as_matrix(P)
    Pinv = la.inverse(P)
    assert la.det(P) in (1, -1)
    B0 = tuple(row[:m] for row in lat.B[:m])
    labels = tuple(b.label for b in lat.basis[:m])
    return QuotientData(lat, m, labels, P, Pinv, B0, diagram_edges(B0))


def project(q: QuotientData, g: MatrixElem) -> la.Matrix:
    h = q.in_new_basis(g)
    m = q.m
    if any(h[r][m] != (1 if r == m else 0) for r in range(m + 1)):
        raise NotBlockTriangular("element does not fix a")
    return tuple(row[:m] for row in h[:m])


def quotient_reflection(q: QuotientData, beta0: Sequence[int]) -> la.Matrix:
    """Reflection of Gamma_o along beta0 with respect to B0 (rational in general)."""
    m = q.m
    qq = la.bilinear(beta0, q.B0, beta0)
    cols = []
    for k in range(m):
        e = [0] * m
        e[k] = 1
        c = Fraction(2 * la.bilinear(e, q.B0, beta0), qq)
        cols.append(la.vsub(e, la.vscale(c, beta0)))
    return la.transpose(cols)


def simple_norms(q: QuotientData) -> set:
    return {q.B0[k][k] for k in range(q.m)}


def is_quotient_root(q: QuotientData, beta0: Sequence[int]) -> bool:
    """Sign-coherent primitive vector whose norm is a simple-root norm.

    A necessary test only; roots of W_o are not decided exactly.
    """
    if not any(beta0):
        return False
    signs = {x > 0 for x in beta0 if x}
    if len(signs) != 1:
        return False
    g = 0
    for x in beta0:
        g = gcd(g, x)
    return abs(g) == 1 and la.bilinear(beta0, q.B0, beta0) in simple_norms(q)


def decompose_root(q: QuotientData, beta: Sequence[int]) -> RootDecomposition:
    y = q.to_new(beta)
    k = y[-1]
    v = y[:-1]
    g = 0
    for x in v:
        g = gcd(g, x)
    eps = q.lat.symbol.epsilon
    for d in sorted({1, eps}):
        if g != d:
            continue
        b0 = tuple(x // d for x in v)
        if is_quotient_root(q, b0):
            assert la.vadd(q.to_old(la.vscale(d, b0) + (0,)), la.vscale(k, q.lat.a)) == tuple(beta)
            return RootDecomposition(d, b0, k)
    raise NotDecomposable(f"{tuple(beta)} has no decomposition d*beta0 + k*a")


def quotient_root_sign(q: QuotientData, beta0: Sequence[int]) -> str:
    if all(x >= 0 for x in beta0) and any(beta0):
        return POSITIVE
    if all(x <= 0 for x in beta0) and any(beta0):
        return NEGATIVE
    raise MixedSigns(f"{tuple(beta0)} mixes signs")


def projection_formula_holds(q: QuotientData, beta: Sequence[int], gamma: Sequence[int]) -> bool:
    """s_beta(gamma) = s_{beta_o}(gamma_o) + (l - (gamma_o, beta_o#) k/d) a in new coordinates."""
    lat = q.lat
    from .group import reflect

    dec = decompose_root(q, beta)
    yg = q.to_new(gamma)
    g0, l = yg[:-1], yg[-1]
    lhs = q.to_new(reflect(lat, beta, gamma))
    b0 = dec.beta0
    norm = la.bilinear(b0, q.B0, b0)
    pair = Fraction(2 * la.bilinear(g0, q.B0, b0), norm)
    s0 = la.vsub(g0, la.vscale(pair, b0))
    rhs = s0 + (la._tidy(l - pair * Fraction(dec.k, dec.d)),)
    return la.tidy_vec(lhs) == la.tidy_vec(rhs)


def to_dot(lat: CanonicalLattice, quotient: bool = False) -> str:
    if quotient:
        q = build_quotient(lat)
        labels, edges = q.basis_map, q.diagram
        name = "quotient"
    else:
        labels = tuple(b.label for b in lat.basis)
        edges = diagram_edges(lat.B)
        name = "diagram"
    lines = [f"graph {name} {{"]
    for k, lab in enumerate(labels):
        lines.append(f'  v{k} [label="{lab}"];')
    for e in edges:
        a, b = (la.fmt_number(x) for x in e.label)
        lines.append(f'  v{e.u} -- v{e.v} [label="({a},{b})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Canonical bilinear lattices: Gram matrices, radical, signature, Coxeter element."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import linalg as la
from .errors import DimensionMismatch
from .symbol import Symbol, delta

RootVec = tuple[int, ...]

ARM = "arm"
CENTER0 = "0"
CENTER0STAR = "0*"


@dataclass(frozen=True)
class BasisIndex:
    kind: str
    ordinal: int
    i: int = 0
    j: int = 0

    @property
    def label(self) -> str:
        if self.kind == ARM:
            return f"a({self.i},{self.j})"
        return "a0" if self.kind == CENTER0 else "a0*"


class Signature(NamedTuple):
    positive: int
    zero: int
    negative: int


@dataclass(frozen=True)
class RadicalData:
    a: RootVec
    b: tuple[Fraction, ...] | None
    rank: int
    basis: tuple[RootVec, ...]


@dataclass(frozen=True, eq=False)
class CanonicalLattice:
    symbol: Symbol
    n: int
    K: la.Matrix
    B: la.Matrix
    basis: tuple[BasisIndex, ...]

    # -- index helpers --------------------------------------------------------
    def arm(self, i: int, j: int) -> int:
        """Ordinal of alpha_(i,j)."""
        p = self.symbol.p
        if not (1 <= i <= self.symbol.t and 1 <= j <= p[i - 1] - 1):
            raise IndexError(f"no basis vector alpha_({i},{j})")
        # arms t..i+1 come first, then j descends within arm i
        before = sum(pk - 1 for pk in p[i:])
        return before + (p[i - 1] - 1 - j)

    @property
    def i0(self) -> int:
        return self.n - 2

    @property
    def i0s(self) -> int:
        return self.n - 1

    def unit(self, k: int) -> RootVec:
        return tuple(1 if m == k else 0 for m in range(self.n))

    def simple_roots(self) -> list[RootVec]:
        return [self.unit(k) for k in range(self.n)]

    @property
    def a(self) -> RootVec:
        v = [0] * self.n
        v[self.i0s] = 1
        v[self.i0] = -self.symbol.epsilon
        return tuple(v)

    def arm_slots(self) -> list[tuple[int, int, int]]:
        """(i, j, ordinal) for every arm basis vector, in basis order."""
        return [(b.i, b.j, b.ordinal) for b in self.basis if b.kind == ARM]

    # -- forms ----------------------------------------------------------------
    def _check(self, *vs: Sequence) -> None:
        for v in vs:
            if len(v) != self.n:
                raise DimensionMismatch(f"expected length {self.n}, got {len(v)}")

    def euler(self, x: Sequence, y: Sequence):
        self._check(x, y)
        return la.bilinear(x, self.K, y)

    def sym(self, x: Sequence, y: Sequence):
        self._check(x, y)
        return la.bilinear(x, self.B, y)

    def is_pseudo_root(self, x: Sequence) -> bool:
        self._check(x)
        q = la.bilinear(x, self.K, x)
        if q <= 0:
            return False
        left = la.vecmat(x, self.K)   # <x, v> for each basis v
        right = la.matvec(self.K, x)  # <v, x>
        if type(q) is int and all(type(u) is int for u in left + right):
            return all(u % q == 0 for u in left + right)
        return all(Fraction(u) % q == 0 for u in left + right)

    def sharp(self, x: Sequence) -> tuple:
        """x^sharp = 2x/(x,x), exact rationals."""
        q = self.sym(x, x)
        return la.vscale(Fraction(2, 1) / q, x)

    def __repr__(self) -> str:
        return f"CanonicalLattice({self.symbol!r})"


def build_lattice(s: Symbol) -> CanonicalLattice:
    t, eps, kappa = s.t, s.epsilon, s.kappa
    n = s.n
    basis: list[BasisIndex] = []
    for i in range(t, 0, -1):
        for j in range(s.p[i - 1] - 1, 0, -1):
            basis.append(BasisIndex(ARM, len(basis), i, j))
    basis.append(BasisIndex(CENTER0, n - 2))
    basis.append(BasisIndex(CENTER0STAR, n - 1))
    K = [[0] * n for _ in range(n)]
    i0, i0s = n - 2, n - 1
    for b in basis:
        if b.kind != ARM:
            continue
        fi, ei = s.f[b.i - 1], s.e[b.i - 1]
        diag = kappa * eps * fi // ei
        K[b.ordinal][b.ordinal] = diag
        if b.j > 1:
            # the next vector in basis order is alpha_(i, j-1)
            K[b.ordinal][b.ordinal + 1] = -diag
        else:
            K[b.ordinal][i0] = -kappa * eps * fi
            K[b.ordinal][i0s] = -kappa * eps * eps * fi
    K[i0][i0] = kappa
    K[i0][i0s] = 2 * kappa * eps
    K[i0s][i0s] = kappa * eps * eps
    Km = la.as_matrix(K)
    return CanonicalLattice(s, n, Km, la.add(Km, la.transpose(Km)), tuple(basis))


def euler(lat: CanonicalLattice, x: Sequence, y: Sequence):
    return lat.euler(x, y)


def sym(lat: CanonicalLattice, x: Sequence, y: Sequence):
    return lat.sym(x, y)


def rank_of(lat: CanonicalLattice, x: Sequence):
    lat._check(x)
    return x[lat.i0] + lat.symbol.epsilon * x[lat.i0s]


def is_pseudo_root(lat: CanonicalLattice, x: Sequence) -> bool:
    return lat.is_pseudo_root(x)


def radical(lat: CanonicalLattice) -> RadicalData:
    basis = tuple(la.nullspace(lat.B))
    a = lat.a
    assert la.is_zero([la.matvec(lat.B, a)]), "a is not in the radical"
    b = None
    if delta(lat.symbol) == 0:
        s = lat.symbol
        v = [Fraction(0)] * lat.n
        v[lat.i0] = Fraction(1)
        for i, j, k in lat.arm_slots():
            p, e = s.p[i - 1], s.e[i - 1]
            v[k] = Fraction((p - j) * e, p)
        b = la.tidy_vec(v)
        assert la.is_zero([la.matvec(lat.B, b)]), "b is not in the radical"
    return RadicalData(a, b, len(basis), basis)


def signature(lat: CanonicalLattice) -> Signature:
    d, _ = la.congruence_diagonal(lat.B)
    return Signature(sum(1 for x in d if x > 0), sum(1 for x in d if x == 0),
                     sum(1 for x in d if x < 0))


def coxeter_element(lat: CanonicalLattice):
    from .group import GroupElem, reflection

    c = GroupElem.identity(lat)
    for v in lat.simple_roots():
        c = c * reflection(lat, v)
    for x in lat.simple_roots():
        cx = c.apply(x)
        for y in lat.simple_roots():
            assert lat.euler(x, y) + lat.euler(y, cx) == 0, "Coxeter identity failed"
    return c


def char_poly(g) -> tuple[int, ...]:
    mat = getattr(g, "mat", g)
    return la.char_poly(mat)


def expected_char_poly(s: Symbol) -> tuple[int, ...]:
    """(x-1)^2 times the product of 1 + x + ... + x^(p-1) over the arms."""
    poly: tuple[int, ...] = (1, -2, 1)
    for p in s.p:
        poly = la.poly_mul(poly, (1,) * p)
    return poly

"""Exact matrix realization of the reflection group W."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Sequence

from . import linalg as la
from ._workers import parallel_map
from .errors import NotPseudoRoot

if TYPE_CHECKING:
    from .lattice import CanonicalLattice


class MatrixElem:
    """Common behaviour of W and W-tilde elements: an exact matrix plus an owner."""

    __slots__ = ("mat", "owner")

    def __init__(self, mat: Sequence[Sequence], owner: object):
        self.mat = la.as_matrix(mat)
        self.owner = owner

    def _wrap(self, mat: la.Matrix):
        # mat is already a tidy tuple matrix
        out = object.__new__(type(self))
        out.mat = mat
        out.owner = self.owner
        return out

    @classmethod
    def _identity(cls, n: int, owner: object):
        return cls(la.identity(n), owner)

    @property
    def dim(self) -> int:
        return len(self.mat)

    def __mul__(self, other: "MatrixElem"):
        if self.owner is not other.owner:
            raise ValueError("elements of different groups")
        return self._wrap(la.matmul(self.mat, other.mat))

    def __pow__(self, k: int):
        return self._wrap(la.mat_power(self.mat, k))

    def inverse(self):
        return self._wrap(la.inverse(self.mat))

    def apply(self, v: Sequence) -> tuple:
        return la.matvec(self.mat, v)

    def det(self):
        return la.det(self.mat)

    def is_identity(self) -> bool:
        return self.mat == la.identity(self.dim)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatrixElem) and self.mat == other.mat

    def __hash__(self) -> int:
        return hash(self.mat)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[list(r) for r in self.mat]})"


class GroupElem(MatrixElem):
    """Element of W acting on column coordinate vectors in the fixed basis."""

    @property
    def lattice(self) -> "CanonicalLattice":
        return self.owner

    @classmethod
    def identity(cls, lat: "CanonicalLattice") -> "GroupElem":
        return cls._identity(lat.n, lat)

    def is_isometry(self) -> bool:
        B = self.lattice.B
        return la.matmul(la.matmul(la.transpose(self.mat), B), self.mat) == B


@dataclass(frozen=True, order=True)
class CanonicalRoot:
    vec: tuple[int, ...]

    def __iter__(self):
        return iter(self.vec)


def normalize(v: Iterable[int]) -> tuple[int, ...]:
    """Sign-normalize: the first nonzero coordinate becomes positive."""
    v = tuple(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def canonical(v: Iterable[int]) -> CanonicalRoot:
    return CanonicalRoot(normalize(v))


def reflection(lat: "CanonicalLattice", alpha: Sequence[int]) -> GroupElem:
    alpha = tuple(alpha.vec if isinstance(alpha, CanonicalRoot) else alpha)
    if not lat.is_pseudo_root(alpha):
        raise NotPseudoRoot(f"{alpha} is not a pseudo-root")
    return GroupElem(_reflection_matrix(lat, alpha), lat)


def _reflection_matrix(lat: "CanonicalLattice", alpha: tuple[int, ...]) -> la.Matrix:
    q = lat.euler(alpha, alpha)
    # column k is s(e_k) = e_k - ((e_k, alpha)/<alpha, alpha>) alpha
    coeff = [c // q for c in la.matvec(lat.B, alpha)]
    n = lat.n
    return tuple(
        tuple((1 if r == k else 0) - coeff[k] * alpha[r] for k in range(n))
        for r in range(n)
    )


def reflect(lat: "CanonicalLattice", alpha: Sequence[int], x: Sequence) -> tuple:
    """s_alpha(x) without forming the matrix; x may be rational."""
    c = Fraction(lat.sym(x, alpha)) / lat.euler(alpha, alpha)
    return la.vsub(x, la.vscale(c, alpha))


def conj_reflection(g: MatrixElem, alpha: CanonicalRoot | Sequence[int]) -> CanonicalRoot:
    lat = g.owner
    vec = alpha.vec if isinstance(alpha, CanonicalRoot) else tuple(alpha)
    image = canonical(g.apply(vec))
    if not lat.is_pseudo_root(image.vec):
        raise NotPseudoRoot(f"{image.vec} is not a pseudo-root")
    lhs = reflection(lat, image)
    rhs = g * reflection(lat, vec) * g.inverse()
    assert lhs == rhs, "conjugation identity failed"
    return image


def fix_codim(g: MatrixElem) -> int:
    return la.rank(la.sub(g.mat, la.identity(g.dim)))


@dataclass(frozen=True)
class RootSet:
    roots: tuple[CanonicalRoot, ...]
    truncated: bool
    depth_of: dict

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, item) -> bool:
        key = item if isinstance(item, CanonicalRoot) else canonical(item)
        return key in self.depth_of


def roots_up_to_depth(lat: "CanonicalLattice", D: int, cap: int = 10**6) -> RootSet:
    """BFS closure of the simple roots under simple reflections.

    Each layer is processed in lexicographic order; the result is sorted.
    """
    simple = [_reflection_matrix(lat, v) for v in lat.simple_roots()]
    depth_of: dict[CanonicalRoot, int] = {}
    frontier = sorted({canonical(v) for v in lat.simple_roots()})
    for r in frontier:
        depth_of[r] = 0
    truncated = False
    for depth in range(1, D + 1):
        if not frontier or truncated:
            break

        def expand(root: CanonicalRoot) -> list[CanonicalRoot]:
            return [canonical(la.matvec(s, root.vec)) for s in simple]

        images = parallel_map(expand, frontier)
        new = sorted({r for batch in images for r in batch if r not in depth_of})
        if len(depth_of) + len(new) > cap:
            new = new[: cap - len(depth_of)]
            truncated = True
        for r in new:
            depth_of[r] = depth
        frontier = new
    return RootSet(tuple(sorted(depth_of)), truncated, depth_of)


@dataclass(frozen=True)
class LengthBounds:
    lower: int
    parity: int
    upper: int | None
    witness: tuple[CanonicalRoot, ...] | None

    @property
    def exact(self) -> int | None:
        return self.upper if self.upper is not None and self.upper == self.lower else None


def reflection_length_bounds(lat: "CanonicalLattice", g: GroupElem,
                             roots: Iterable, search_cap: int = 200_000) -> LengthBounds:
    """Lower bound from the fixed space, parity from the determinant,
    upper bound from an iterative-deepening search over the given roots.

    The search finds reflections t_1..t_L with t_1...t_L = g. A branch is
    pruned once the codimension of the remaining element exceeds the number
    of reflections still available.
    """
    lower = fix_codim(g)
    parity = 0 if g.det() == 1 else 1
    roots = sorted({canonical(r) for r in roots})
    refl = [(r, reflection(lat, r)) for r in roots]
    budget = [search_cap]
    failed: set[tuple[la.Matrix, int]] = set()

    def dfs(rest: GroupElem, remaining: int, path: list) -> list | None:
        if remaining == 0:
            return path if rest.is_identity() else None
        if fix_codim(rest) > remaining or (rest.mat, remaining) in failed:
            return None
        for r, s in refl:
            if budget[0] <= 0:
                return None
            budget[0] -= 1
            found = dfs(s * rest, remaining - 1, path + [r])
            if found is not None:
                return found
        if budget[0] > 0:
            failed.add((rest.mat, remaining))
        return None

    L = lower if lower % 2 == parity else lower + 1
    while budget[0] > 0 and L <= lat.n + len(roots):
        w = dfs(g, L, [])
        if w is not None:
            # t_1 ... t_L = g was peeled from the left: rest = t_1 g, etc.
            prod = GroupElem.identity(lat)
            for r in w:
                prod = prod * reflection(lat, r)
            assert prod == g
            return LengthBounds(lower, parity, L, tuple(w))
        L += 2
    return LengthBounds(lower, parity, None, None)

"""Braid action on exceptional sequences and Hurwitz action on factorizations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from . import linalg as la
from .errors import IndexOutOfRange, NotExceptional, ProductMismatch
from .group import CanonicalRoot, GroupElem, MatrixElem, canonical, reflection
from .lattice import CanonicalLattice

Word = tuple[tuple[int, int], ...]


# -- exceptional sequences ------------------------------------------------------

@dataclass(frozen=True)
class ExcSequence:
    roots: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", tuple(tuple(r) for r in self.roots))

    def __len__(self) -> int:
        return len(self.roots)


def is_exceptional(lat: CanonicalLattice, roots: Sequence[Sequence[int]]) -> bool:
    if not all(lat.is_pseudo_root(r) for r in roots):
        return False
    return all(lat.euler(roots[i], roots[j]) == 0
               for i in range(len(roots)) for j in range(i))


def standard_sequence(lat: CanonicalLattice) -> ExcSequence:
    return ExcSequence(tuple(lat.simple_roots()))


def span_key(roots: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Hermite normal form of the integer span."""
    return la.hermite_rows(list(roots))


def _reflect_int(lat: CanonicalLattice, alpha: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    q = lat.euler(alpha, alpha)
    c, r = divmod(lat.sym(x, alpha), q)
    assert r == 0, "reflection of a lattice vector left the lattice"
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))


def _check_index(i: int, r: int) -> None:
    if not 1 <= i <= r - 1:
        raise IndexOutOfRange(f"index {i} outside 1..{r - 1}")


def _mutation(lat: CanonicalLattice, e: Sequence[int], f: Sequence[int]) -> tuple:
    # [L_E F] = [F] - 2((E,F)/(E,E)) [E], evaluated with rationals
    c = Fraction(2 * lat.sym(e, f), lat.sym(e, e))
    return la.vsub(f, la.vscale(c, e))


def braid_raw(lat: CanonicalLattice, roots: tuple, i: int, direction: int) -> tuple:
    """One braid move on a tuple of vectors, without validation."""
    g, h = roots[i - 1], roots[i]
    if direction > 0:
        pair = (h, _reflect_int(lat, h, g))
    else:
        pair = (_reflect_int(lat, g, h), g)
    return roots[:i - 1] + pair + roots[i + 1:]


def braid_apply(lat: CanonicalLattice, seq: ExcSequence, i: int, direction: int,
                check: bool = True) -> ExcSequence:
    """sigma_i (direction +1) or its inverse (direction -1); i is 1-based."""
    _check_index(i, len(seq))
    out = braid_raw(lat, seq.roots, i, direction)
    if check:
        if not is_exceptional(lat, out):
            raise NotExceptional(f"braid move produced {out}")
        assert span_key(out) == span_key(seq.roots), "span changed"
        if len(seq) == lat.n and la.rank(seq.roots) == lat.n:
            g, h = seq.roots[i - 1], seq.roots[i]
            if direction > 0:
                assert out[i] == _mutation(lat, h, g)
            else:
                assert out[i - 1] == _mutation(lat, g, h)
    return ExcSequence(out)


# -- factorizations ---------------------------------------------------------------

class Reflections:
    """Maps canonical roots (lattice coordinates) to reflections in some group.

    Plain lattices give W; a hyperbolic model gives the lifted reflections in W-tilde.
    """

    def __init__(self, lat: CanonicalLattice, lift: Callable[[tuple[int, ...]], MatrixElem] | None = None,
                 identity: MatrixElem | None = None):
        self.lat = lat
        self._lift = lift or (lambda r: reflection(lat, r))
        self.identity = identity if identity is not None else GroupElem.identity(lat)
        self._cache: dict[tuple[int, ...], MatrixElem] = {}

    def __call__(self, root: CanonicalRoot | Sequence[int]) -> MatrixElem:
        vec = root.vec if isinstance(root, CanonicalRoot) else tuple(root)
        got = self._cache.get(vec)
        if got is None:
            got = self._cache[vec] = self._lift(vec)
        return got

    def product(self, roots: Iterable) -> MatrixElem:
        out = self.identity
        for r in roots:
            out = out * self(r)
        return out


_DEFAULT_REFLECTIONS: dict[int, Reflections] = {}


def reflections_for(lat: CanonicalLattice) -> Reflections:
    key = id(lat)
    got = _DEFAULT_REFLECTIONS.get(key)
    if got is None or got.lat is not lat:
        got = _DEFAULT_REFLECTIONS[key] = Reflections(lat)
    return got


@dataclass(frozen=True, eq=False)
class Factorization:
    refls: tuple[CanonicalRoot, ...]
    product: MatrixElem
    group: Reflections

    @classmethod
    def of(cls, group: Reflections, roots: Iterable) -> "Factorization":
        refls = tuple(r if isinstance(r, CanonicalRoot) else canonical(r) for r in roots)
        return cls(refls, group.product(refls), group)

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r.vec for r in self.refls)

    def __len__(self) -> int:
        return len(self.refls)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Factorization) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def standard_factorization(lat: CanonicalLattice, group: Reflections | None = None) -> Factorization:
    return Factorization.of(group or reflections_for(lat), lat.simple_roots())


def hurwitz_raw(lat: CanonicalLattice, key: tuple, i: int, direction: int) -> tuple:
    """Hurwitz move on a tuple of canonical root vectors."""
    b, c = key[i - 1], key[i]
    if direction > 0:
        pair = (c, canonical(_reflect_int(lat, c, b)).vec)
    else:
        pair = (canonical(_reflect_int(lat, b, c)).vec, b)
    return key[:i - 1] + pair + key[i + 1:]


def hurwitz_apply(fact: Factorization, i: int, direction: int, check: bool = True) -> Factorization:
    """sigma_i: (g_i, g_{i+1}) -> (g_{i+1}, g_{i+1} g_i g_{i+1}); the inverse move mirrors it."""
    _check_index(i, len(fact))
    lat = fact.group.lat
    out = hurwitz_raw(lat, fact.key, i, direction)
    if check:
        g = fact.group
        before = g(fact.key[i - 1]) * g(fact.key[i])
        after = g(out[i - 1]) * g(out[i])
        if before != after:
            raise ProductMismatch(f"Hurwitz move {i},{direction} changed the product")
    return Factorization(tuple(CanonicalRoot(v) for v in out), fact.product, fact.group)


def apply_word(fact: Factorization, word: Iterable[tuple[int, int]], check: bool = True) -> Factorization:
    for i, d in word:
        fact = hurwitz_apply(fact, i, d, check)
    return fact


def invert_word(word: Iterable[tuple[int, int]]) -> Word:
    return tuple((i, -d) for i, d in reversed(tuple(word)))


# -- orbit enumeration --------------------------------------------------------------

@dataclass(frozen=True)
class OrbitReport:
    size: int
    depth_reached: int
    closed: bool
    truncated: bool

    def to_json(self) -> dict:
        return {"size": self.size, "depth_reached": self.depth_reached,
                "closed": self.closed, "truncated": self.truncated}


def bfs(start: Hashable, moves: Callable[[Hashable], Iterable[tuple[tuple[int, int], Hashable]]],
        depth: int, cap: int) -> tuple[dict, OrbitReport]:
    """Layered BFS. Returns key -> first word reaching it, in discovery order."""
    words: dict = {start: ()}
    frontier = [start]
    reached = 0
    truncated = False
    closed = False
    for layer in range(1, depth + 1):
        nxt = []
        for key in frontier:
            base = words[key]
            for move, image in moves(key):
                if image in words:
                    continue
                if len(words) >= cap:
                    truncated = True
                    break
                words[image] = base + (move,)
                nxt.append(image)
            if truncated:
                break
        if nxt:
            reached = layer
        if truncated:
            break
        if not nxt:
            closed = True
            break
        frontier = nxt
    return words, OrbitReport(len(words), reached, closed, truncated)


def _moves_for(r: int):
    return [(i, d) for i in range(1, r) for d in (1, -1)]


def hurwitz_orbit(start: Factorization, depth: int, cap: int = 10**6
                  ) -> tuple[list[Factorization], OrbitReport]:
    words, report = hurwitz_orbit_words(start, depth, cap)
    members = [Factorization(tuple(CanonicalRoot(v) for v in key), start.product, start.group)
               for key in words]
    return members, report


def hurwitz_orbit_words(start: Factorization, depth: int, cap: int = 10**6) -> tuple[dict, OrbitReport]:
    lat = start.group.lat
    mv = _moves_for(len(start))

    def moves(key):
        return [((i, d), hurwitz_raw(lat, key, i, d)) for i, d in mv]

    return bfs(start.key, moves, depth, cap)


def braid_orbit_words(lat: CanonicalLattice, start: ExcSequence, depth: int,
                      cap: int = 10**6) -> tuple[dict, OrbitReport]:
    mv = _moves_for(len(start))

    def moves(key):
        return [((i, d), braid_raw(lat, key, i, d)) for i, d in mv]

    return bfs(start.roots, moves, depth, cap)


@dataclass(frozen=True)
class SearchResult:
    found: bool
    word: Word | None


def orbit_search(target: Factorization, start: Factorization, depth: int,
                 cap: int = 10**6) -> SearchResult:
    """Bidirectional search for a braid word w with w(start) = target."""
    if target.product != start.product:
        raise ProductMismatch("target and start have different products")
    if len(target) != len(start):
        raise ProductMismatch("factorizations of different lengths")
    forward, _ = hurwitz_orbit_words(start, (depth + 1) // 2, cap)
    backward, _ = hurwitz_orbit_words(target, depth // 2, cap)
    best = None
    for key, v in backward.items():
        u = forward.get(key)
        if u is not None:
            w = u + invert_word(v)
            if best is None or len(w) < len(best):
                best = w
    if best is None:
        return SearchResult(False, None)
    replay = apply_word(start, best)
    assert replay.key == target.key, "witness replay failed"
    return SearchResult(True, best)

"""Exceptional data, the orders they induce, truncated non-crossing posets and theta."""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from . import linalg as la
from .braid import (Factorization, Reflections, braid_orbit_words, braid_raw, hurwitz_orbit,
                    hurwitz_raw, is_exceptional, span_key, standard_factorization,
                    standard_sequence)
from .errors import AxiomViolated, NotExceptional
from .group import GroupElem, MatrixElem, canonical, reflection
from .lattice import CanonicalLattice

Seq = tuple


@dataclass(frozen=True, eq=False)
class ExceptionalDatum:
    """E_n given explicitly (finite, or an explored part), with an exact membership
    test and the quotient maps mu_r. E_r is derived from E_n by taking prefixes.
    """

    n: int
    top: tuple[Seq, ...]
    mu: Callable[[Seq], Hashable]
    member: Callable[[Seq], bool] | None = None
    levels: dict | None = None  # optional explicit E_r, compared against the prefixes
    name: str = "datum"

    def is_member(self, seq: Seq) -> bool:
        if self.member is not None:
            return self.member(tuple(seq))
        return tuple(seq) in self._top_set

    @property
    def _top_set(self) -> frozenset:
        return frozenset(self.top)

    def level(self, r: int) -> set[Seq]:
        return {tuple(e[:r]) for e in self.top}

    def key(self, prefix: Seq) -> tuple[int, Hashable]:
        """Element of the disjoint union A: the level together with mu_r."""
        return (len(prefix), self.mu(tuple(prefix)))


# -- axioms and the induced order -----------------------------------------------

def check_c1(d: ExceptionalDatum) -> None:
    for e in d.top:
        if len(e) != d.n:
            raise AxiomViolated("C1", (e,))
    if d.levels is None:
        return
    for r in range(1, d.n + 1):
        given = {tuple(x) for x in d.levels.get(r, ())}
        derived = d.level(r)
        if given != derived:
            raise AxiomViolated("C1", (r, tuple(sorted(given ^ derived, key=repr))[:1]))


def check_c2(d: ExceptionalDatum) -> int:
    """Exhaustive over the listed E_n and the derived E_r; returns the number of cases."""
    cases = 0
    for r in range(1, d.n + 1):
        level = sorted(d.level(r), key=repr)
        mu_of = {e: d.mu(e) for e in level}
        for e in d.top:
            head, tail = tuple(e[:r]), tuple(e[r:])
            for e2 in level:
                cases += 1
                joined = d.is_member(e2 + tail)
                if joined != (mu_of[head] == mu_of[e2]):
                    raise AxiomViolated("C2", (tuple(e), e2, r))
    return cases


def witnessed_order(d: ExceptionalDatum) -> tuple[set, dict]:
    """Pairs (a', a) with a' <= a witnessed by one member of E_n, and a witness for each."""
    pairs: set = set()
    witness: dict = {}
    for e in d.top:
        keys = [d.key(e[:r]) for r in range(1, d.n + 1)]
        for r in range(d.n):
            for s in range(r, d.n):
                p = (keys[r], keys[s])
                if p not in pairs:
                    pairs.add(p)
                    witness[p] = tuple(e)
    return pairs, witness


def order_closure(d: ExceptionalDatum, pairs: set, witness: dict) -> tuple[set, int]:
    """Close the witnessed order under transitivity, certifying each new pair.

    For a'' <= a' (witness e') and a' <= a (witness e), with a' on level r, the
    sequence e'[:r] + e[r:] must lie in E_n and witnesses a'' <= a.
    """
    pairs = set(pairs)
    added = 0
    changed = True
    while changed:
        changed = False
        above: dict = {}
        for lo, hi in pairs:
            above.setdefault(lo, set()).add(hi)
        for lo, mids in list(above.items()):
            for mid in list(mids):
                for hi in above.get(mid, ()):
                    if (lo, hi) in pairs:
                        continue
                    r = mid[0]
                    e1, e2 = witness[(lo, mid)], witness[(mid, hi)]
                    joined = tuple(e1[:r]) + tuple(e2[r:])
                    if not d.is_member(joined):
                        raise AxiomViolated("transitivity", (e1, e2, r))
                    if d.key(joined[:lo[0]]) != lo or d.key(joined[:hi[0]]) != hi:
                        raise AxiomViolated("transitivity", (e1, e2, r))
                    pairs.add((lo, hi))
                    witness[(lo, hi)] = joined
                    added += 1
                    changed = True
    return pairs, added


def check_partial_order(elements: Iterable, pairs: set) -> None:
    elements = list(elements)
    for x in elements:
        if (x, x) not in pairs:
            raise AxiomViolated("reflexivity", (x,))
    for x, y in pairs:
        if x != y and (y, x) in pairs:
            raise AxiomViolated("antisymmetry", (x, y))
    above: dict = {}
    for x, y in pairs:
        above.setdefault(x, set()).add(y)
    for x, ys in above.items():
        for y in ys:
            for z in above.get(y, ()):
                if (x, z) not in pairs:
                    raise AxiomViolated("transitivity", (x, y, z))


@dataclass
class DatumReport:
    name: str
    n: int
    top_size: int
    c2_cases: int
    elements: int
    order_pairs: int
    closure_added: int
    pairs: set = field(repr=False)
    elements_set: set = field(repr=False)

    def to_json(self) -> dict:
        return {"name": self.name, "n": self.n, "top": self.top_size, "c2_cases": self.c2_cases,
                "elements": self.elements, "order_pairs": self.order_pairs,
                "closure_added": self.closure_added}


def check_axioms(d: ExceptionalDatum) -> DatumReport:
    check_c1(d)
    cases = check_c2(d)
    pairs, witness = witnessed_order(d)
    pairs, added = order_closure(d, pairs, witness)
    elements = {d.key(e[:r]) for e in d.top for r in range(1, d.n + 1)}
    check_partial_order(elements, pairs)
    return DatumReport(d.name, d.n, len(d.top), cases, len(elements), len(pairs), added,
                       pairs, elements)


# -- theta ---------------------------------------------------------------------

@dataclass
class ThetaReport:
    source: DatumReport
    target: DatumReport
    theta: dict = field(repr=False)
    equivariance_checks: int
    order_pairs: int

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "theta_size": len(self.theta), "equivariance_checks": self.equivariance_checks,
                "order_pairs_matched": self.order_pairs, "passed": True}


def build_theta(E: ExceptionalDatum, F: ExceptionalDatum, rho: Callable[[Hashable], Hashable],
                moves: Sequence[Callable[[Seq], Seq]] = (),
                f_moves: Sequence[Callable[[Seq], Seq]] | None = None) -> ThetaReport:
    """theta_r(mu_r(e)) = nu_r(rho(e)), with every hypothesis checked on the data.

    moves act on E_n and f_moves (same index) on F^n; rho must intertwine them.
    The listed E_n is assumed to be one orbit, explored to the same extent on both sides.
    """
    if E.n != F.n:
        raise AxiomViolated("dimension", (E.n, F.n))
    rep_e, rep_f = check_axioms(E), check_axioms(F)
    rho_n = lambda e: tuple(rho(x) for x in e)  # noqa: E731

    base = set()
    for e in E.top:
        base.update(e)
    images = {}
    for x in sorted(base, key=repr):
        y = rho(x)
        if y in images and images[y] != x:
            raise AxiomViolated("rho injective", (images[y], x))
        images[y] = x

    if not F.is_member(rho_n(E.top[0])):
        raise AxiomViolated("C3", (E.top[0],))
    checks = 0
    f_moves = moves if f_moves is None else f_moves
    for e in E.top:
        for g, h in zip(moves, f_moves):
            checks += 1
            if rho_n(g(e)) != h(rho_n(e)):
                raise AxiomViolated("C4", (e,))
    if {rho_n(e) for e in E.top} != set(F.top):
        raise AxiomViolated("rho_n onto F_n", ())

    theta: dict = {}
    for e in E.top:
        for r in range(1, E.n + 1):
            a = E.key(e[:r])
            b = F.key(rho_n(e[:r]))
            if theta.setdefault(a, b) != b:
                raise AxiomViolated("theta well-defined", (e, r))
    if len(set(theta.values())) != len(theta):
        raise AxiomViolated("theta injective", ())
    if set(theta.values()) != rep_f.elements_set:
        raise AxiomViolated("theta surjective", ())
    mapped = {(theta[x], theta[y]) for x, y in rep_e.pairs}
    if mapped != rep_f.pairs:
        raise AxiomViolated("theta order", ())
    return ThetaReport(rep_e, rep_f, theta, checks, len(mapped))


# -- small synthetic data ---------------------------------------------------------

def synthetic_datum() -> ExceptionalDatum:
    top = ((1, 2), (2, 3), (3, 1))
    return ExceptionalDatum(2, top, lambda e: e[0] if len(e) == 1 else "*",
                            levels={1: {(1,), (2,), (3,)}, 2: set(top)}, name="synthetic")


def synthetic_violator() -> ExceptionalDatum:
    top = ((1, 2), (2, 3), (3, 1))
    # 1 and 2 share a class but (2, 2) is not a member
    mu = lambda e: ({1: "x", 2: "x", 3: "y"}[e[0]] if len(e) == 1 else "*")  # noqa: E731
    return ExceptionalDatum(2, top, mu, name="violator")


def cyclic_datum(m: int) -> tuple[ExceptionalDatum, ExceptionalDatum, list, list]:
    """Two copies of E_2 = {(i, i+1 mod m)} with a rotation acting on both; rho adds 100."""
    top = tuple((i, (i + 1) % m) for i in range(m))
    E = ExceptionalDatum(2, top, lambda e: e[0] if len(e) == 1 else "*", name="cyclic")
    ftop = tuple((x + 100, y + 100) for x, y in top)
    F = ExceptionalDatum(2, ftop, lambda e: e[0] if len(e) == 1 else "*", name="cyclic-image")
    rot_e = [lambda e: tuple((x + 1) % m for x in e)]
    rot_f = [lambda e: tuple((x - 100 + 1) % m + 100 for x in e)]
    return E, F, rot_e, rot_f


# -- lattice-level data -----------------------------------------------------------

def cox_map(lat: CanonicalLattice, seq: Iterable[Sequence[int]], group: Reflections | None = None
            ) -> MatrixElem:
    """Product of the reflections of the sign-normalized entries, in order."""
    roots = [tuple(r) for r in seq]
    if not is_exceptional(lat, roots):
        raise NotExceptional(f"{roots} is not exceptional")
    if group is not None:
        return group.product(canonical(r) for r in roots)
    out = GroupElem.identity(lat)
    for r in roots:
        out = out * reflection(lat, canonical(r))
    return out


def lattice_E_datum(lat: CanonicalLattice, depth: int, cap: int = 10**6) -> ExceptionalDatum:
    """Braid orbit of the simple roots; entries sign-normalized, mu_r the spanned sublattice."""
    words, _ = braid_orbit_words(lat, standard_sequence(lat), depth, cap)
    top = sorted({tuple(canonical(v).vec for v in seq) for seq in words}, key=repr)
    full = span_key(lat.simple_roots())

    @lru_cache(maxsize=None)
    def mu(seq: Seq):
        return span_key(seq)

    @lru_cache(maxsize=None)
    def member(seq: Seq) -> bool:
        return len(seq) == lat.n and is_exceptional(lat, seq) and mu(seq) == full

    return ExceptionalDatum(lat.n, tuple(top), mu, member, name="E")


def lattice_F_datum(start: Factorization, depth: int, cap: int = 10**6) -> ExceptionalDatum:
    """Hurwitz orbit of the start factorization; nu_r the prefix product."""
    members, _ = hurwitz_orbit(start, depth, cap)
    group = start.group
    lat = group.lat
    top = sorted({m.key for m in members}, key=repr)

    @lru_cache(maxsize=None)
    def nu(seq: Seq):
        if not seq:
            return group.identity.mat
        return la.matmul(nu(seq[:-1]), group(seq[-1]).mat)

    @lru_cache(maxsize=None)
    def pseudo(v) -> bool:
        return lat.is_pseudo_root(v)

    @lru_cache(maxsize=None)
    def member(seq: Seq) -> bool:
        return (len(seq) == len(start) and all(pseudo(v) for v in seq)
                and nu(seq) == start.product.mat)

    return ExceptionalDatum(len(start), tuple(top), nu, member, name="F")


def lattice_theta(lat: CanonicalLattice, depth: int = 3) -> dict:
    """theta between the braid-orbit and Hurwitz-orbit data, compared with cox_map."""
    E = lattice_E_datum(lat, depth)
    start = standard_factorization(lat)
    F = lattice_F_datum(start, depth)
    n = lat.n
    moves = []
    f_moves = []
    for i in range(1, n):
        for d in (1, -1):
            moves.append(lambda e, i=i, d=d: tuple(canonical(v).vec for v in braid_raw(lat, e, i, d)))
            f_moves.append(lambda f, i=i, d=d: hurwitz_raw(lat, f, i, d))
    rep = build_theta(E, F, lambda x: x, moves, f_moves)
    mismatches = 0
    compared = 0
    for e in E.top:
        for r in range(1, n + 1):
            compared += 1
            if rep.theta[E.key(e[:r])][1] != cox_map(lat, e[:r]).mat:
                mismatches += 1
    out = rep.to_json()
    out.update({"cox_map_compared": compared, "cox_map_mismatches": mismatches,
                "passed": mismatches == 0})
    return out


# -- truncated non-crossing posets --------------------------------------------------

@dataclass(frozen=True)
class NCElement:
    elem: MatrixElem
    length: int

    @property
    def short_hash(self) -> str:
        return hashlib.sha1(repr(self.elem.mat).encode()).hexdigest()[:8]


@dataclass
class Poset:
    elements: list[NCElement]
    pairs: set  # (i, j) with elements[i] <= elements[j]
    covers: list[tuple[int, int]]
    truncated: bool
    closure_added: int
    grading_conflicts: int

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs

    def matrix(self) -> tuple[tuple[bool, ...], ...]:
        m = len(self.elements)
        return tuple(tuple((i, j) in self.pairs for j in range(m)) for i in range(m))

    def index_of(self, g: MatrixElem) -> int | None:
        for k, e in enumerate(self.elements):
            if e.elem.mat == g.mat:
                return k
        return None

    def to_json(self) -> dict:
        return {
            "elements": [{"id": k, "length": e.length, "hash": e.short_hash,
                          "matrix": [[la.fmt_number(x) for x in row] for row in e.elem.mat]}
                         for k, e in enumerate(self.elements)],
            "covers": [list(c) for c in self.covers],
            "order_pairs": len(self.pairs),
            "truncated": self.truncated,
            "closure_added": self.closure_added,
        }

    def to_dot(self) -> str:
        lines = ["digraph nc {", "  rankdir=BT;"]
        for k, e in enumerate(self.elements):
            lines.append(f'  n{k} [label="{e.length}:{e.short_hash}"];')
        for i, j in self.covers:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def prefix_products(fact: Factorization) -> list[MatrixElem]:
    g = fact.group
    out = [g.identity]
    for r in fact.refls:
        out.append(out[-1] * g(r))
    return out


def hurwitz_prefix_change(fact: Factorization, i: int, direction: int) -> bool:
    """sigma_i changes the prefix product of length i and no other."""
    from .braid import hurwitz_apply

    before = prefix_products(fact)
    after = prefix_products(hurwitz_apply(fact, i, direction))
    return all(before[r] == after[r] for r in range(len(before)) if r != i)


def nc_enumerate(start: Factorization, depth: int, cap: int = 10**6
                 ) -> tuple[list[NCElement], Poset]:
    members, report = hurwitz_orbit(start, depth, cap)
    index: dict = {}
    lengths: dict = {}
    conflicts = 0
    witnessed: set = set()
    seen_mats: list = []
    for f in members:
        prods = prefix_products(f)
        ids = []
        for r, g in enumerate(prods):
            k = index.get(g.mat)
            if k is None:
                k = index[g.mat] = len(seen_mats)
                seen_mats.append(g)
                lengths[k] = r
            elif lengths[k] != r:
                conflicts += 1
            ids.append(k)
        for r in range(len(ids)):
            for s in range(r, len(ids)):
                witnessed.add((ids[r], ids[s]))
    # renumber by (length, matrix) for reproducible output
    order = sorted(range(len(seen_mats)), key=lambda k: (lengths[k], seen_mats[k].mat))
    new = {old: pos for pos, old in enumerate(order)}
    elements = [NCElement(seen_mats[k], lengths[k]) for k in order]
    pairs = {(new[i], new[j]) for i, j in witnessed}
    closed = _transitive_closure(len(elements), pairs)
    added = len(closed) - len(pairs)
    for i, j in closed:
        if i != j and (j, i) in closed:
            raise AxiomViolated("antisymmetry", (i, j))
    covers = _covers(len(elements), closed)
    for i, j in covers:
        if elements[j].length != elements[i].length + 1:
            raise AxiomViolated("grading", (i, j))
    poset = Poset(elements, closed, covers, report.truncated, added, conflicts)
    return elements, poset


def _transitive_closure(m: int, pairs: set) -> set:
    succ: dict = {i: set() for i in range(m)}
    for i, j in pairs:
        succ[i].add(j)
    out = set()
    for i in range(m):
        stack = [i]
        seen = {i}
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.update((i, y) for y in seen)
    return out


def _covers(m: int, pairs: set) -> list[tuple[int, int]]:
    up: dict = {i: set() for i in range(m)}
    for i, j in pairs:
        if i != j:
            up[i].add(j)
    out = []
    for i in range(m):
        for j in up[i]:
            if not any(j in up[k] for k in up[i] if k != j):
                out.append((i, j))
    return sorted(out)


def poset_summary(lat: CanonicalLattice, start: Factorization, depth: int, cap: int = 10**6) -> dict:
    elems, poset = nc_enumerate(start, depth, cap)
    bottom = poset.index_of(start.group.identity)
    top = poset.index_of(start.product)
    m = len(elems)
    return {
        "elements": m,
        "order_pairs": len(poset.pairs),
        "covers": len(poset.covers),
        "closure_added": poset.closure_added,
        "grading_conflicts": poset.grading_conflicts,
        "truncated": poset.truncated,
        "bottom_below_all": bottom is not None and all(poset.leq(bottom, j) for j in range(m)),
        "top_above_all": top is not None and all(poset.leq(j, top) for j in range(m)),
    }


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)

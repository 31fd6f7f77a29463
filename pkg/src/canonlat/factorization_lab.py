"""Shifted reflection factorizations, their Coxeter criterion, the arm reduction
and divisibility checks on enumerated roots.

Everything here works in an epsilon = 1 lattice, where a = alpha_0* - alpha_0
and the subspace with vanishing alpha_0* coordinate is Gamma_o.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import linalg as la
from ._workers import parallel_map
from .errors import IsotropicGamma, NotDecomposable, PreconditionViolated
from .group import CanonicalRoot, GroupElem, canonical, reflection, roots_up_to_depth
from .hyperbolic import HyperbolicModel, hyp_coxeter
from .lattice import CanonicalLattice, build_lattice, coxeter_element
from .quotient import build_quotient, decompose_root
from .symbol import epsilon_one_equivalent

LatOrModel = Union[CanonicalLattice, HyperbolicModel]


def working_lattice(lat: CanonicalLattice) -> CanonicalLattice:
    """The epsilon = 1 lattice these routines operate on."""
    if lat.symbol.epsilon == 1:
        return lat
    return build_lattice(epsilon_one_equivalent(lat.symbol))


def _require_eps1(lat: CanonicalLattice) -> None:
    if lat.symbol.epsilon != 1:
        raise PreconditionViolated("expected an epsilon = 1 lattice; use working_lattice()")


def _lattice_of(obj: LatOrModel) -> CanonicalLattice:
    return obj.lat if isinstance(obj, HyperbolicModel) else obj


# -- radical shift ------------------------------------------------------------------

def _reflect_along(lat: CanonicalLattice, g: Sequence, x: Sequence) -> tuple:
    q = lat.sym(g, g)
    c = Fraction(2 * lat.sym(x, g), q)
    return la.tidy_vec(la.vsub(x, la.vscale(c, g)))


def radical_shift_check(lat: CanonicalLattice, gammas: Sequence[Sequence], ms: Sequence[int],
                        x: Sequence) -> bool:
    """Compare both sides of the shifted product formula.

    gammas[0] is gamma_1, the reflection applied first:
    s_(g_n + m_n a)...s_(g_1 + m_1 a)(x)
        = s_(g_n)...s_(g_1)(x) - (sum_i m_i (x, s_(g_1)...s_(g_(i-1))(g_i#))) a
    """
    if len(gammas) != len(ms):
        raise ValueError("gammas and ms differ in length")
    for g in gammas:
        if lat.sym(g, g) == 0:
            raise IsotropicGamma(f"{tuple(g)} is isotropic")
    a = lat.a
    lhs = tuple(x)
    for g, m in zip(gammas, ms):
        lhs = _reflect_along(lat, la.vadd(g, la.vscale(m, a)), lhs)
    plain = tuple(x)
    for g in gammas:
        plain = _reflect_along(lat, g, plain)
    coeff = Fraction(0)
    for i, (g, m) in enumerate(zip(gammas, ms)):
        v = lat.sharp(g)
        for h in reversed(gammas[:i]):
            v = _reflect_along(lat, h, v)
        coeff += m * Fraction(lat.sym(x, v))
    rhs = la.tidy_vec(la.vsub(plain, la.vscale(coeff, a)))
    return la.tidy_vec(lhs) == rhs


# -- shifted tuples -----------------------------------------------------------------

@dataclass(frozen=True)
class ShiftedTuple:
    """beta embedded in lattice coordinates; ks = (k_(t,p_t-1), ..., k_(1,1), k, k')."""

    beta: tuple[int, ...]
    ks: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "ks", tuple(self.ks))

    @property
    def k(self) -> int:
        return self.ks[-2]

    @property
    def kprime(self) -> int:
        return self.ks[-1]

    @property
    def arm_ks(self) -> tuple[int, ...]:
        return self.ks[:-2]

    def gammas(self, lat: CanonicalLattice) -> list[tuple[int, ...]]:
        """gamma_n, ..., gamma_1 in listed order (arms in basis order, then beta twice)."""
        arms = [lat.unit(k) for _, _, k in lat.arm_slots()]
        return arms + [self.beta, self.beta]

    def shifted(self, lat: CanonicalLattice) -> list[tuple[int, ...]]:
        a = lat.a
        return [la.vadd(g, la.vscale(k, a)) for g, k in zip(self.gammas(lat), self.ks)]

    @classmethod
    def standard(cls, lat: CanonicalLattice) -> "ShiftedTuple":
        return cls(lat.unit(lat.i0), (0,) * (lat.n - 1) + (1,))


def validate(lat: CanonicalLattice, st: ShiftedTuple) -> None:
    _require_eps1(lat)
    if len(st.ks) != lat.n or len(st.beta) != lat.n:
        raise PreconditionViolated("shifted tuple has the wrong length")
    if st.beta[lat.i0s] != 0:
        raise PreconditionViolated("beta must lie in Gamma_o")
    for v in st.shifted(lat):
        if not lat.is_pseudo_root(v):
            raise PreconditionViolated(f"{v} is not a pseudo-root")


def build_t(obj: LatOrModel, st: ShiftedTuple):
    """Product s_(gamma_n + k_n a) ... s_(gamma_1 + k_1 a), in W or in W-tilde."""
    lat = _lattice_of(obj)
    validate(lat, st)
    if isinstance(obj, HyperbolicModel):
        out = obj.identity()
        for v in st.shifted(lat):
            out = out * obj.lift(v)
        return out
    out = GroupElem.identity(lat)
    for v in st.shifted(lat):
        out = out * reflection(lat, v)
    return out


def _partial_sums(lat: CanonicalLattice, arm_ks: Sequence[int]) -> dict[tuple[int, int], int]:
    """S_(i,j) = sum over q >= j of k_(i,q)."""
    by = {(i, j): k for (i, j, _), k in zip(lat.arm_slots(), arm_ks)}
    return {(i, j): sum(by[(i, q)] for q in range(j, lat.symbol.p[i - 1]))
            for (i, j) in by}


def _arm_term(lat: CanonicalLattice, arm_ks: Sequence[int]) -> tuple:
    S = _partial_sums(lat, arm_ks)
    v: tuple = (0,) * lat.n
    for i, j, k in lat.arm_slots():
        if S[(i, j)]:
            v = la.vadd(v, la.vscale(S[(i, j)], lat.sharp(lat.unit(k))))
    return v


def _congruence_target(lat: CanonicalLattice, beta: Sequence, diff: int) -> tuple:
    alpha0 = lat.unit(lat.i0)
    return la.vsub(lat.sharp(alpha0), la.vscale(diff, lat.sharp(beta)))


def congruence_holds(lat: CanonicalLattice, st: ShiftedTuple) -> bool:
    """alpha_0# = (k'-k) beta# + sum S_(i,j) alpha_(i,j)#  modulo Rad(B)."""
    v = la.vsub(_congruence_target(lat, st.beta, st.kprime - st.k), _arm_term(lat, st.arm_ks))
    return la.is_zero([la.matvec(lat.B, v)])


def factorization_condition(obj: LatOrModel, st: ShiftedTuple, crosscheck: bool = False) -> bool:
    """Closed-form test for build_t(obj, st) being the Coxeter element.

    On a lattice this is the congruence alone. In the hyperbolic model the
    product already agrees with c-tilde on V once the congruence holds, so
    the only remaining datum is the image of a'.
    """
    lat = _lattice_of(obj)
    validate(lat, st)
    ok = congruence_holds(lat, st)
    if ok and isinstance(obj, HyperbolicModel):
        ok = _image_of_aprime(obj, st) == hyp_coxeter(obj).apply(obj.aprime)
    if crosscheck:
        target = hyp_coxeter(obj) if isinstance(obj, HyperbolicModel) else coxeter_element(lat)
        assert ok == (build_t(obj, st) == target), f"criterion disagrees with the product at {st}"
    return ok


def _image_of_aprime(model: HyperbolicModel, st: ShiftedTuple) -> tuple:
    v = model.aprime
    for g in reversed(st.shifted(model.lat)):
        v = model.lift(g).apply(v)
    return v


# -- the enumerated grid ------------------------------------------------------------

def beta_candidates(lat: CanonicalLattice, depth: int = 4) -> list[tuple[int, ...]]:
    """Gamma_o parts of the roots up to the given depth, sign-normalized.

    Membership in the quotient root system is approximated by the pseudo-root test.
    """
    _require_eps1(lat)
    q = build_quotient(lat)
    out = set()
    for r in roots_up_to_depth(lat, depth):
        try:
            dec = decompose_root(q, r.vec)
        except NotDecomposable:
            continue
        beta = canonical(q.to_old(dec.beta0 + (0,))).vec
        if lat.is_pseudo_root(beta):
            out.add(beta)
    return sorted(out)


def _shift_ok(lat: CanonicalLattice, v: Sequence, k: int) -> bool:
    return lat.is_pseudo_root(la.vadd(v, la.vscale(k, lat.a)))


@dataclass
class GridReport:
    betas: int
    points: int
    solutions: int
    agree: bool
    mismatches: list
    conclusion_failures: list
    solution_list: list

    def to_json(self) -> dict:
        return {"betas": self.betas, "points": self.points, "solutions": self.solutions,
                "agree": self.agree, "mismatches": [str(m) for m in self.mismatches],
                "conclusion_failures": [str(m) for m in self.conclusion_failures]}


def condition_grid(obj: LatOrModel, depth: int = 4, kmax: int = 2,
                   betas: Iterable[Sequence[int]] | None = None) -> GridReport:
    """Compare the closed-form criterion with the actual product on every grid point.

    The grid is beta over beta_candidates(depth) and every k_l in [-kmax, kmax]
    keeping all shifted entries pseudo-roots. Points are grouped twice: by the
    matrix of the arm part (for the product) and by B applied to the arm term
    (for the congruence), so both sides are decided for every point without
    forming all products.
    """
    lat = _lattice_of(obj)
    _require_eps1(lat)
    model = obj if isinstance(obj, HyperbolicModel) else None
    if model is not None:
        refl = lambda v: model.lift(v)  # noqa: E731
        ident = model.identity()
        target = hyp_coxeter(model)
    else:
        refl = lambda v: reflection(lat, v)  # noqa: E731
        ident = GroupElem.identity(lat)
        target = coxeter_element(lat)
    a = lat.a
    rng = range(-kmax, kmax + 1)
    slots = lat.arm_slots()
    choices = [[k for k in rng if _shift_ok(lat, lat.unit(o), k)] for _, _, o in slots]
    slot_refl = [{k: refl(la.vadd(lat.unit(o), la.vscale(k, a))) for k in ch}
                 for (_, _, o), ch in zip(slots, choices)]

    by_matrix: dict = {}
    by_form: dict = {}
    arm_mats: dict = {}
    for combo in itertools.product(*choices):
        m = ident
        for sr, k in zip(slot_refl, combo):
            m = m * sr[k]
        arm_mats[combo] = m
        by_matrix.setdefault(m.mat, []).append(combo)
        key = la.tidy_vec(la.matvec(lat.B, _arm_term(lat, combo)))
        by_form.setdefault(key, []).append(combo)
    n_arm = len(arm_mats)

    beta_list = sorted({canonical(b).vec for b in betas}) if betas is not None else beta_candidates(lat, depth)
    points = 0
    solutions = []
    mismatches = []
    for beta in beta_list:
        ks_ok = [k for k in rng if _shift_ok(lat, beta, k)]
        for k, kp in itertools.product(ks_ok, ks_ok):
            points += n_arm
            sk, skp = refl(la.vadd(beta, la.vscale(k, a))), refl(la.vadd(beta, la.vscale(kp, a)))
            need = target * skp * sk
            by_product = set(by_matrix.get(need.mat, ()))
            key = la.tidy_vec(la.matvec(lat.B, _congruence_target(lat, beta, kp - k)))
            by_cond = set()
            for combo in by_form.get(key, ()):
                if model is not None:
                    img = arm_mats[combo].apply(sk.apply(skp.apply(model.aprime)))
                    if img != target.apply(model.aprime):
                        continue
                by_cond.add(combo)
            for combo in by_product ^ by_cond:
                mismatches.append(ShiftedTuple(beta, combo + (k, kp)))
            for combo in sorted(by_product & by_cond):
                solutions.append(ShiftedTuple(beta, combo + (k, kp)))
    # with a rank-2 radical the W-level congruence admits extra solutions; the
    # conclusions below are only claimed for W-tilde and for rank-1 radicals
    conclusions_apply = model is not None or len(la.nullspace(lat.B)) == 1
    conclusion_failures = [st for st in solutions if conclusions_apply and not solution_conclusions_hold(lat, st)]
    return GridReport(len(beta_list), points, len(solutions), not mismatches, mismatches,
                      conclusion_failures, solutions)


def solution_conclusions_hold(lat: CanonicalLattice, st: ShiftedTuple) -> bool:
    """Conclusions forced on a solution: k'-k = +-1, lambda_0 = k'-k, equal norms,
    an arm reduction of +-beta to alpha_0, and vanishing arm shifts when beta = alpha_0.
    """
    diff = st.kprime - st.k
    lam0 = st.beta[lat.i0]
    alpha0 = lat.unit(lat.i0)
    if diff not in (1, -1) or lam0 != diff:
        return False
    if lat.sym(st.beta, st.beta) != lat.sym(alpha0, alpha0):
        return False
    signed = st.beta if lam0 == 1 else la.vscale(-1, st.beta)
    try:
        kill_arms(lat, signed)
    except (PreconditionViolated, AssertionError):
        return False
    if st.beta == alpha0:
        return all(v == 0 for v in _partial_sums(lat, st.arm_ks).values())
    return True


# -- killing the arms ---------------------------------------------------------------

ArmWord = tuple[tuple[int, int], ...]


def apply_arm_word(lat: CanonicalLattice, word: ArmWord, x: Sequence) -> tuple:
    """w(x) for w = s_word[0] s_word[1] ... (the last letter acts first)."""
    for i, j in reversed(word):
        x = _reflect_along(lat, lat.unit(lat.arm(i, j)), x)
    return la.tidy_vec(x)


def kill_arms(lat: CanonicalLattice, beta: Sequence[int]) -> ArmWord:
    """Word w in the arm reflections with w(beta) = alpha_0.

    One pass per arm: with m the last nonzero position on arm i, beta is
    replaced by s_(i,1) s_(i,2) ... s_(i,m) (beta), which clears the arm.
    """
    _require_eps1(lat)
    beta = tuple(beta)
    alpha0 = lat.unit(lat.i0)
    if len(beta) != lat.n or beta[lat.i0] != 1 or beta[lat.i0s] != 0:
        raise PreconditionViolated("beta must be alpha_0 plus arm terms")
    if lat.sym(beta, beta) != lat.sym(alpha0, alpha0):
        raise PreconditionViolated("beta and alpha_0 have different norms")
    word: ArmWord = ()
    cur = beta
    for i in range(1, lat.symbol.t + 1):
        arm = [(j, cur[lat.arm(i, j)]) for j in range(1, lat.symbol.p[i - 1])]
        live = [j for j, lam in arm if lam != 0]
        if not live:
            continue
        m = max(live)
        step = tuple((i, j) for j in range(1, m + 1))
        cur = apply_arm_word(lat, step, cur)
        word = step + word
        assert all(cur[lat.arm(i, j)] == 0 for j in range(1, lat.symbol.p[i - 1])), \
            f"arm {i} not cleared by one pass"
    assert cur == alpha0
    assert apply_arm_word(lat, word, beta) == alpha0, "replay failed"
    return word


def kill_arms_eligible(lat: CanonicalLattice, vec: Sequence[int]) -> tuple[int, ...] | None:
    """The sign of vec with alpha_0 coefficient 1, when vec is a valid kill_arms input."""
    alpha0 = lat.unit(lat.i0)
    for sgn in (1, -1):
        v = tuple(sgn * x for x in vec)
        if v[lat.i0] == 1 and v[lat.i0s] == 0 and lat.sym(v, v) == lat.sym(alpha0, alpha0):
            return v
    return None


# -- divisibility -------------------------------------------------------------------

def _classes(lat: CanonicalLattice) -> list[tuple[str, tuple[int, ...]]]:
    """Representatives alpha_0, alpha_0*, alpha_(i,1) of the simple classes."""
    out = [("0", lat.unit(lat.i0)), ("0*", lat.unit(lat.i0s))]
    for i in range(1, lat.symbol.t + 1):
        out.append((f"({i},1)", lat.unit(lat.arm(i, 1))))
    return out


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def similarity_classes(lat: CanonicalLattice, depth: int) -> tuple[dict, dict]:
    """Connected components of the roots up to `depth` under simple reflections.

    Returns (component of each root, set of simple classes in each component).
    Two roots in one component are W-conjugate up to sign.
    """
    rs = roots_up_to_depth(lat, depth)
    simples = [la.as_matrix(reflection(lat, v).mat) for v in lat.simple_roots()]
    uf = _UnionFind()
    known = set(rs.roots)
    for r in rs.roots:
        uf.find(r)
        for s in simples:
            img = canonical(la.matvec(s, r.vec))
            if img in known:
                uf.union(r, img)
    comp = {r: uf.find(r) for r in rs.roots}
    members: dict = {}
    for name, vec in _classes(lat):
        members.setdefault(comp[canonical(vec)], set()).add(name)
    return comp, members


def _coefficients(lat: CanonicalLattice, vec: Sequence[int]) -> dict:
    return {"l0": vec[lat.i0], "l0s": vec[lat.i0s], "nu0": vec[lat.i0s],
            "lam0": vec[lat.i0] + vec[lat.i0s]}


def divisibility_statements(lat: CanonicalLattice, vec: Sequence[int], cls: str) -> list[tuple[str, bool]]:
    """(statement, holds) for every divisibility claim attached to beta ~ class."""
    s = lat.symbol
    c = _coefficients(lat, vec)
    out = []
    if cls in ("0", "0*"):
        for i, j, k in lat.arm_slots():
            e = s.e[i - 1]
            out.append((f"e_{i} | l({i},{j})", vec[k] % e == 0))
        return out
    i = int(cls[1:cls.index(",")])
    f = s.f[i - 1]
    out.append((f"f_{i} | l0", c["l0"] % f == 0))
    out.append((f"f_{i} | l0*", c["l0s"] % f == 0))
    out.append((f"f_{i} | nu0", c["nu0"] % f == 0))
    out.append((f"f_{i} | lambda0", c["lam0"] % f == 0))
    for kk, ll, k in lat.arm_slots():
        if kk != i:
            m = f * s.e[kk - 1]
            out.append((f"f_{i} e_{kk} | l({kk},{ll})", vec[k] % m == 0))
    return out


def divisibility_report(lat: CanonicalLattice, roots: Iterable, sim_depth: int) -> dict:
    """Check the divisibility statements for every root with a proven class.

    Classes come from connectivity among the roots up to sim_depth (which must
    cover the supplied roots). A class with the same norm but no connecting path
    is undecided: that pair is counted as skipped, never guessed.
    """
    _require_eps1(lat)
    roots = sorted({r if isinstance(r, CanonicalRoot) else canonical(r) for r in roots})
    comp, members = similarity_classes(lat, sim_depth)
    class_norm = {name: lat.sym(v, v) for name, v in _classes(lat)}
    a = lat.a

    def one(r: CanonicalRoot) -> dict:
        out = {"checked": 0, "passed": 0, "skipped": 0, "failures": [], "unresolved": False}
        if r not in comp:
            out["skipped"] += 1
            out["unresolved"] = True
            return out
        proven = members.get(comp[r], set())
        norm = lat.sym(r.vec, r.vec)
        for name, qn in class_norm.items():
            if name not in proven and qn == norm:
                out["skipped"] += 1
                out["unresolved"] = True
        for name in sorted(proven):
            for stmt, ok in divisibility_statements(lat, r.vec, name):
                out["checked"] += 1
                if ok:
                    out["passed"] += 1
                else:
                    out["failures"].append({"root": list(r.vec), "class": name, "statement": stmt})
        # alpha_(i,j) + m a lies in the class of alpha_(i,1)
        for i, j, k in lat.arm_slots():
            for sgn in (1, -1):
                diff = la.vsub(tuple(sgn * x for x in r.vec), lat.unit(k))
                m = diff[lat.i0s]
                if m != 0 and diff == la.vscale(m, a):
                    if f"({i},1)" in proven:
                        out["checked"] += 1
                        out["passed"] += 1
                    else:
                        out["skipped"] += 1
                        out["unresolved"] = True
        return out

    parts = parallel_map(one, roots)
    report = {"roots": len(roots), "checked": 0, "passed": 0, "skipped": 0,
              "unresolved_roots": 0, "failures": []}
    for p in parts:
        for key in ("checked", "passed", "skipped"):
            report[key] += p[key]
        report["unresolved_roots"] += int(p["unresolved"])
        report["failures"].extend(p["failures"])
    report["class_components"] = sorted(sorted(v) for v in members.values())
    return report


# -- randomized radical-shift sampling ------------------------------------------------

def radical_shift_samples(lat: CanonicalLattice, trials: int, length: int, seed: int = 0,
                          depth: int = 3) -> tuple[int, int]:
    """(passed, trials) over random tuples of roots, shifts and integer vectors."""
    _require_eps1(lat)
    rng = random.Random(seed)
    pool = [r.vec for r in roots_up_to_depth(lat, depth)]
    passed = 0
    for _ in range(trials):
        gammas = [rng.choice(pool) for _ in range(length)]
        ms = [rng.randint(-3, 3) for _ in range(length)]
        x = tuple(rng.randint(-4, 4) for _ in range(lat.n))
        passed += radical_shift_check(lat, gammas, ms, x)
    return passed, trials

"""Command-line entry point and the aggregated verification battery."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TextIO

from . import factorization_lab as fl
from . import linalg as la
from . import ncposet as nc
from .braid import (Factorization, apply_word, braid_apply, hurwitz_apply, hurwitz_orbit,
                    is_exceptional, orbit_search, standard_factorization, standard_sequence)
from .errors import AxiomViolated, CanonlatError, NotDecomposable, NotTubular
from .group import (GroupElem, conj_reflection, fix_codim, reflection, reflection_length_bounds,
                    roots_up_to_depth)
from .hyperbolic import (build_hyperbolic, central_extension_report, expected_coxeter_aprime,
                         hyp_coxeter, length_certificate)
from .lattice import (CanonicalLattice, build_lattice, char_poly, coxeter_element,
                      expected_char_poly, radical, rank_of, signature)
from .quotient import (build_quotient, decompose_root, project, projection_formula_holds,
                       to_dot)
from .symbol import DOMESTIC, TUBULAR, WILD, Symbol, ascii_name, classify, parse_symbol

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SUITES = ("lattice", "coxeter", "signature", "length", "braid", "quotient", "hyperbolic",
          "factorization", "datum")


@dataclass
class Config:
    path: str
    command: str
    depth: int | None = None
    cap: int = 10**6
    fmt: str | None = None
    seed: int = 0
    suite: str = "all"
    quotient: bool = False
    hyperbolic: bool = False
    report: bool = False
    dump: bool = False
    form: str = "euler"


def _jsonable(x):
    if isinstance(x, Fraction):
        return la.fmt_number(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _tsv(mat) -> str:
    return "".join("\t".join(la.fmt_number(x) for x in row) + "\n" for row in mat)


# -- verification battery -------------------------------------------------------

@dataclass
class Tally:
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    suites: dict = field(default_factory=dict)
    _current: str = "general"

    def begin(self, suite: str) -> None:
        self._current = suite
        self.suites.setdefault(suite, {"checked": 0, "passed": 0, "skipped": 0})

    def check(self, name: str, ok: bool, detail=None) -> bool:
        s = self.suites.setdefault(self._current, {"checked": 0, "passed": 0, "skipped": 0})
        self.checked += 1
        s["checked"] += 1
        if ok:
            self.passed += 1
            s["passed"] += 1
        else:
            entry = {"suite": self._current, "check": name}
            if detail is not None:
                entry["detail"] = detail
            self.failures.append(entry)
        return ok

    def skip(self, name: str, reason: str) -> None:
        s = self.suites.setdefault(self._current, {"checked": 0, "passed": 0, "skipped": 0})
        self.skipped += 1
        s["skipped"] += 1
        s.setdefault("skipped_checks", []).append(f"{name}: {reason}")

    def to_json(self) -> dict:
        return {"checked": self.checked, "passed": self.passed, "skipped": self.skipped,
                "failures": self.failures, "suites": self.suites}


def _guard(t: Tally, name: str, fn: Callable[[], object]):
    """Run fn; an exception counts as a failed check rather than aborting the battery."""
    try:
        return fn()
    except (AssertionError, CanonlatError) as exc:
        t.check(name, False, f"{type(exc).__name__}: {exc}")
        return None


def suite_lattice(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("lattice")
    t.check("B = K + K^T", lat.B == la.add(lat.K, la.transpose(lat.K)))
    t.check("B symmetric", lat.B == la.transpose(lat.B))
    t.check("simple roots are pseudo-roots", all(lat.is_pseudo_root(v) for v in lat.simple_roots()))
    rad = _guard(t, "radical", lambda: radical(lat))
    if rad is None:
        return
    klass = classify(lat.symbol).klass
    t.check("a in Rad(B)", la.is_zero([la.matvec(lat.B, rad.a)]))
    t.check("rank(a) = 0", rank_of(lat, rad.a) == 0)
    t.check("radical rank", rad.rank == (2 if klass == TUBULAR else 1), rad.rank)
    if klass == TUBULAR:
        t.check("b in Rad(B)", rad.b is not None and la.is_zero([la.matvec(lat.B, rad.b)]))


def suite_coxeter(t: Tally, lat: CanonicalLattice, cfg: Config) -> GroupElem | None:
    t.begin("coxeter")
    c = _guard(t, "coxeter element", lambda: coxeter_element(lat))
    if c is None:
        return None
    bad = [(x, y) for x in range(lat.n) for y in range(lat.n)
           if lat.euler(lat.unit(x), lat.unit(y)) + lat.euler(lat.unit(y), c.apply(lat.unit(x))) != 0]
    t.check("<x,y> + <y,c x> = 0 on all basis pairs", not bad, bad[:3] or None)
    t.check("c is an isometry of B", c.is_isometry())
    t.check("char poly", char_poly(c) == expected_char_poly(lat.symbol))
    rr = radical(lat).rank
    t.check("rank(c - I) = n - rank Rad(B)", fix_codim(c) == lat.n - rr)
    return c


def suite_signature(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("signature")
    n = lat.n
    expected = {DOMESTIC: (n - 1, 1, 0), TUBULAR: (n - 2, 2, 0), WILD: (n - 2, 1, 1)}
    sig = tuple(signature(lat))
    t.check("signature trichotomy", sig == expected[classify(lat.symbol).klass], list(sig))


def suite_length(t: Tally, lat: CanonicalLattice, cfg: Config, c: GroupElem | None) -> None:
    t.begin("length")
    if c is None:
        t.skip("reflection length", "no Coxeter element")
        return
    rr = radical(lat).rank
    if rr <= 1:
        b = reflection_length_bounds(lat, c, lat.simple_roots())
        t.check("lower bound n (codim + parity)",
                b.lower + ((b.lower + b.parity) % 2) == lat.n, [b.lower, b.parity])
        t.check("upper bound n (witness)", b.upper == lat.n)
        return
    model = _guard(t, "hyperbolic model", lambda: build_hyperbolic(lat))
    if model is None:
        return
    cert = length_certificate(model)
    t.check("dim Fix(c~) = 2", cert["fix_dim_ctilde"] == 2)
    t.check("(c~^p - I)^2 = 0 != c~^p - I", cert["unipotent_square_zero"])
    t.check("l_T~(c~) = n", cert["ell_Ttilde_ctilde"] == lat.n)
    t.check("l_T(c) = n", cert["ell_T_c"] == lat.n)


def _random_member(start: Factorization, rng: random.Random, steps: int) -> Factorization:
    n = len(start)
    word = [(rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(steps)]
    return apply_word(start, word)


def suite_braid(t: Tally, lat: CanonicalLattice, cfg: Config, cases: int = 100) -> None:
    t.begin("braid")
    rng = random.Random(cfg.seed)
    start = standard_factorization(lat)
    n = lat.n
    g = start.group
    ok_prod = ok_inv = ok_rel = ok_far = 0
    for _ in range(cases):
        f = _random_member(start, rng, rng.randint(0, 6))
        i = rng.randint(1, n - 1)
        d = rng.choice((1, -1))
        h = hurwitz_apply(f, i, d)
        ok_prod += g.product(h.refls) == start.product
        ok_inv += hurwitz_apply(h, i, -d).key == f.key
        if n >= 3:
            j = rng.randint(1, n - 2)
            ok_rel += (apply_word(f, [(j, 1), (j + 1, 1), (j, 1)]).key
                       == apply_word(f, [(j + 1, 1), (j, 1), (j + 1, 1)]).key)
        else:
            ok_rel += 1
        if n >= 4:
            a = rng.randint(1, n - 3)
            b = rng.randint(a + 2, n - 1)
            ok_far += apply_word(f, [(a, 1), (b, 1)]).key == apply_word(f, [(b, 1), (a, 1)]).key
        else:
            ok_far += 1
    t.check(f"Hurwitz product preserved ({cases} cases)", ok_prod == cases)
    t.check(f"sigma_i^-1 sigma_i = 1 ({cases} cases)", ok_inv == cases)
    t.check(f"braid relation ({cases} cases)", ok_rel == cases)
    t.check(f"far commutation ({cases} cases)", ok_far == cases)

    seq = standard_sequence(lat)
    ok = 0
    for _ in range(cases // 4):
        s = seq
        for _ in range(rng.randint(1, 4)):
            s = braid_apply(lat, s, rng.randint(1, n - 1), rng.choice((1, -1)))
        ok += is_exceptional(lat, s.roots)
    t.check("braid moves keep sequences exceptional", ok == cases // 4)

    roots = list(roots_up_to_depth(lat, 2))
    ok = 0
    for _ in range(cases // 4):
        w = reflection(lat, rng.choice(roots)) * reflection(lat, rng.choice(roots))
        r = rng.choice(roots)
        img = conj_reflection(w, r)
        ok += reflection(lat, img.vec) == w * reflection(lat, r.vec) * w.inverse()
    t.check("w s_r w^-1 = s_w(r)", ok == cases // 4)

    depth = cfg.depth or 3
    f = _random_member(start, rng, depth)
    res = orbit_search(f, start, depth)
    t.check(f"orbit search reconnects a depth-{depth} scramble", res.found)


def suite_quotient(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("quotient")
    lat1 = fl.working_lattice(lat)
    q = build_quotient(lat1)
    rng = random.Random(cfg.seed + 1)
    refl = [reflection(lat1, v) for v in lat1.simple_roots()]
    ok = 0
    trials = 30
    for _ in range(trials):
        g = refl[rng.randrange(lat1.n)] * refl[rng.randrange(lat1.n)]
        h = refl[rng.randrange(lat1.n)]
        ok += project(q, g * h) == la.matmul(project(q, g), project(q, h))
    t.check("projection is multiplicative", ok == trials)
    t.check("s_0 and s_0* share an image",
            project(q, refl[lat1.i0]) == project(q, refl[lat1.i0s]))
    roots = roots_up_to_depth(lat1, cfg.depth or 4)
    undecided = 0
    for r in roots:
        try:
            decompose_root(q, r.vec)
        except NotDecomposable:
            undecided += 1
    ok = 0
    total = 0
    sample = list(roots)[:40]
    for b in sample:
        for g in sample[:10]:
            total += 1
            try:
                ok += projection_formula_holds(q, b.vec, g.vec)
            except NotDecomposable:
                total -= 1
    t.check("roots decompose as d*beta_o + k*a", undecided == 0, undecided or None)
    t.check("projection formula", ok == total, f"{ok}/{total}")


def suite_hyperbolic(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("hyperbolic")
    if classify(lat.symbol).klass != TUBULAR:
        t.skip("central extension", "not tubular")
        return
    model = _guard(t, "hyperbolic model", lambda: build_hyperbolic(lat))
    if model is None:
        return
    ct = _guard(t, "c~ formula", lambda: hyp_coxeter(model))
    if ct is not None:
        t.check("c~(a') formula", ct.apply(model.aprime) == expected_coxeter_aprime(model))
    rep = central_extension_report(model, samples=100, seed=cfg.seed)
    for key in ("central", "nontrivial", "projects_to_identity", "kernel_in_cyclic_subgroup"):
        t.check(f"c~^p {key}", rep[key])


def suite_factorization(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("factorization")
    lat1 = fl.working_lattice(lat)
    depth = cfg.depth or 4
    for length in (1, 4):
        passed, total = fl.radical_shift_samples(lat1, 100, length, seed=cfg.seed + length)
        t.check(f"radical shift, {length} reflections", passed == total, f"{passed}/{total}")
    t.check("standard tuple gives c",
            _guard(t, "standard tuple", lambda: fl.factorization_condition(
                lat1, fl.ShiftedTuple.standard(lat1), crosscheck=True)) is True)
    arm_slots = lat1.n - 2
    if arm_slots <= 5:
        objs = [lat1]
        if classify(lat1.symbol).klass == TUBULAR:
            objs.append(build_hyperbolic(lat1))
        for obj in objs:
            where = "W~" if obj is not lat1 else "W"
            g = fl.condition_grid(obj, depth=depth)
            t.check(f"criterion matches product on the grid ({where})", g.agree,
                    [str(m) for m in g.mismatches[:3]] or None)
            t.check(f"solution conclusions ({where})", not g.conclusion_failures,
                    [str(m) for m in g.conclusion_failures[:3]] or None)
    else:
        t.skip("criterion grid", f"{arm_slots} arm slots exceed the grid budget")
    roots = roots_up_to_depth(lat1, depth + 2)
    eligible = [v for v in (fl.kill_arms_eligible(lat1, r.vec) for r in roots) if v]
    ok = sum(1 for v in eligible if _guard(t, "kill arms", lambda v=v: fl.kill_arms(lat1, v)) is not None)
    t.check(f"kill arms on {len(eligible)} eligible roots", ok == len(eligible))
    rep = fl.divisibility_report(lat1, roots, depth + 2)
    t.check("divisibility statements", not rep["failures"], rep["failures"][:3] or None)
    if rep["skipped"]:
        t.skip("divisibility", f"{rep['skipped']} statements with a class undecided at this depth")


def suite_datum(t: Tally, lat: CanonicalLattice, cfg: Config) -> None:
    t.begin("datum")
    t.check("synthetic datum", _guard(t, "synthetic", lambda: nc.check_axioms(nc.synthetic_datum()))
            is not None)
    try:
        nc.check_axioms(nc.synthetic_violator())
        t.check("violator rejected", False)
    except AxiomViolated as exc:
        t.check("violator rejected", exc.axiom == "C2")
    depth = 3 if lat.n <= 6 else 2
    rep = _guard(t, "lattice theta", lambda: nc.lattice_theta(lat, depth))
    if rep is not None:
        t.check(f"theta matches cox_map (depth {depth})", rep["passed"],
                rep["cox_map_mismatches"] or None)
    start = standard_factorization(lat)
    summary = _guard(t, "nc poset", lambda: nc.poset_summary(lat, start, depth))
    if summary is not None:
        t.check("identity is the bottom", summary["bottom_below_all"])
        t.check("c is the top", summary["top_above_all"])
        t.check("lengths consistent", summary["grading_conflicts"] == 0)
    rng = random.Random(cfg.seed + 2)
    ok = 0
    for _ in range(20):
        f = _random_member(start, rng, 4)
        ok += nc.hurwitz_prefix_change(f, rng.randint(1, lat.n - 1), rng.choice((1, -1)))
    t.check("a Hurwitz move changes one prefix product", ok == 20)


def run_battery(lat: CanonicalLattice, cfg: Config) -> Tally:
    t = Tally()
    wanted = SUITES if cfg.suite == "all" else (cfg.suite,)
    c = None
    for name in wanted:
        if name == "lattice":
            suite_lattice(t, lat, cfg)
        elif name == "coxeter":
            c = suite_coxeter(t, lat, cfg)
        elif name == "signature":
            suite_signature(t, lat, cfg)
        elif name == "length":
            if c is None:
                c = coxeter_element(lat)
            suite_length(t, lat, cfg, c)
        elif name == "braid":
            suite_braid(t, lat, cfg)
        elif name == "quotient":
            suite_quotient(t, lat, cfg)
        elif name == "hyperbolic":
            suite_hyperbolic(t, lat, cfg)
        elif name == "factorization":
            suite_factorization(t, lat, cfg)
        elif name == "datum":
            suite_datum(t, lat, cfg)
    return t


# -- commands -----------------------------------------------------------------------

def _classify_line(s: Symbol) -> str:
    info = classify(s)
    name = ascii_name(info.dynkin_name) if info.dynkin_name else "none"
    return f"n={info.n} delta={la.fmt_number(info.delta)} class={info.klass} name={name}\n"


def cmd_classify(s: Symbol, cfg: Config, out: TextIO) -> int:
    if cfg.fmt == "json":
        info = classify(s)
        out.write(dumps({"n": info.n, "delta": info.delta, "class": info.klass,
                         "name": info.dynkin_name, "aliases": list(info.aliases)}) + "\n")
    else:
        out.write(_classify_line(s))
    return EXIT_OK


def cmd_gram(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    mat = lat.K if cfg.form == "euler" else lat.B
    if cfg.fmt == "json":
        out.write(dumps({"form": cfg.form, "basis": [b.label for b in lat.basis],
                         "matrix": mat}) + "\n")
    else:
        out.write(_tsv(mat))
    return EXIT_OK


def cmd_roots(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    rs = roots_up_to_depth(lat, cfg.depth if cfg.depth is not None else 3, cfg.cap)
    for r in rs:
        out.write(",".join(str(x) for x in r.vec) + "\n")
    if rs.truncated:
        out.write("# truncated\n")
    return EXIT_OK


def cmd_coxeter(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    c = coxeter_element(lat)
    if cfg.fmt == "json":
        out.write(dumps({"matrix": c.mat, "char_poly": list(char_poly(c)),
                         "fix_codim": fix_codim(c), "radical_rank": radical(lat).rank}) + "\n")
    else:
        out.write(_tsv(c.mat))
    return EXIT_OK


def cmd_hurwitz(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    group = None
    if cfg.hyperbolic:
        lat = fl.working_lattice(lat)
        group = build_hyperbolic(lat).reflections()
    start = standard_factorization(lat, group)
    members, report = hurwitz_orbit(start, cfg.depth if cfg.depth is not None else 3, cfg.cap)
    if cfg.dump:
        for m in members:
            out.write(";".join(",".join(str(x) for x in r.vec) for r in m.refls) + "\n")
    else:
        out.write(dumps(report.to_json()) + "\n")
    return EXIT_OK


def cmd_dynkin(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    if cfg.quotient:
        lat = fl.working_lattice(lat)
    out.write(to_dot(lat, quotient=cfg.quotient))
    return EXIT_OK


def cmd_hyperbolic(s: Symbol, cfg: Config, out: TextIO) -> int:
    model = build_hyperbolic(build_lattice(s))
    if cfg.report:
        rep = central_extension_report(model, seed=cfg.seed)
        rep["length_certificate"] = length_certificate(model)
        out.write(dumps(rep) + "\n")
        return EXIT_OK if rep["passed"] else EXIT_FAIL
    out.write(dumps({"basis": list(model.basis), "Btilde": model.Btilde,
                     "ctilde": hyp_coxeter(model).mat}) + "\n")
    return EXIT_OK


def cmd_ncposet(s: Symbol, cfg: Config, out: TextIO) -> int:
    lat = build_lattice(s)
    group = None
    if cfg.hyperbolic:
        lat = fl.working_lattice(lat)
        group = build_hyperbolic(lat).reflections()
    start = standard_factorization(lat, group)
    _, poset = nc.nc_enumerate(start, cfg.depth if cfg.depth is not None else 2, cfg.cap)
    if cfg.fmt == "json":
        out.write(dumps(poset.to_json()) + "\n")
    else:
        out.write(poset.to_dot())
    return EXIT_OK


def cmd_verify(s: Symbol, cfg: Config, out: TextIO) -> int:
    tally = run_battery(build_lattice(s), cfg)
    out.write(dumps(tally.to_json()) + "\n")
    return EXIT_OK if not tally.failures else EXIT_FAIL


COMMANDS = {
    "classify": cmd_classify, "gram": cmd_gram, "roots": cmd_roots, "coxeter": cmd_coxeter,
    "hurwitz": cmd_hurwitz, "dynkin": cmd_dynkin, "hyperbolic": cmd_hyperbolic,
    "ncposet": cmd_ncposet, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="canonlat",
                                description="Exact computations for reflection groups of canonical type.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("symbol", help="path to a symbol JSON file")
    p.add_argument("--depth", type=int)
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--format", dest="fmt", choices=("tsv", "json", "dot", "text"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--hyperbolic", action="store_true")
    p.add_argument("--report", action="store_true")
    p.add_argument("--dump", action="store_true")
    p.add_argument("--form", choices=("euler", "sym"), default="euler")
    return p


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = Config(ns.symbol, ns.command, ns.depth, ns.cap, ns.fmt, ns.seed, ns.suite,
                 ns.quotient, ns.hyperbolic, ns.report, ns.dump, ns.form)
    if cfg.depth is not None and cfg.depth < 0 or cfg.cap < 1:
        err.write("canonlat: depth and cap must be non-negative\n")
        return EXIT_INPUT
    try:
        with open(cfg.path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        err.write(f"canonlat: cannot read {cfg.path}: {exc.strerror}\n")
        return EXIT_INPUT
    try:
        s = parse_symbol(text)
    except CanonlatError as exc:
        err.write(f"canonlat: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](s, cfg, out)
    except NotTubular as exc:
        err.write(f"canonlat: {exc}\n")
        return EXIT_INPUT
    except (CanonlatError, AssertionError) as exc:
        err.write(f"canonlat: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

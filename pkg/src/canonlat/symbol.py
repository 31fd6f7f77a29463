"""Symbols, their reduced form, classification and the type dictionaries."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Iterable

from .errors import InvalidSymbol, MalformedInput

DOMESTIC = "Domestic"
TUBULAR = "Tubular"
WILD = "Wild"


@dataclass(frozen=True)
class Symbol:
    t: int
    epsilon: int
    p: tuple[int, ...]
    d: tuple[int, ...]
    f: tuple[int, ...]
    kappa: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "d", tuple(self.d))
        object.__setattr__(self, "f", tuple(self.f))
        _validate(self)

    @property
    def e(self) -> tuple[int, ...]:
        return tuple(di // fi for di, fi in zip(self.d, self.f))

    @property
    def n(self) -> int:
        return sum(pi - 1 for pi in self.p) + 2

    @classmethod
    def make(cls, p: Iterable[int], d: Iterable[int] | None = None,
             f: Iterable[int] | None = None, epsilon: int = 1,
             kappa: int | None = None) -> "Symbol":
        """Convenience constructor; d and f default to all ones, kappa to the minimal choice."""
        p = tuple(p)
        d = tuple(d) if d is not None else (1,) * len(p)
        f = tuple(f) if f is not None else (1,) * len(p)
        if kappa is None:
            kappa = minimal_kappa(epsilon, d, f)
        return cls(len(p), epsilon, p, d, f, kappa)

    def to_json(self) -> dict[str, Any]:
        return {"t": self.t, "epsilon": self.epsilon, "p": list(self.p),
                "d": list(self.d), "f": list(self.f), "kappa": self.kappa}


@dataclass(frozen=True)
class ReducedSymbol:
    p: tuple[int, ...]
    ed: tuple[int, ...]

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(zip(self.p, self.ed)))


@dataclass(frozen=True)
class ClassInfo:
    n: int
    delta: Fraction
    klass: str
    dynkin_name: str | None = None
    aliases: tuple[str, ...] = field(default=())

    @property
    def ascii_name(self) -> str | None:
        return None if self.dynkin_name is None else ascii_name(self.dynkin_name)


def _validate(s: Symbol) -> None:
    if not isinstance(s.t, int) or s.t < 1:
        raise InvalidSymbol("t", "must be a positive integer")
    if s.epsilon not in (1, 2):
        raise InvalidSymbol("epsilon", f"must be 1 or 2, got {s.epsilon}")
    for name in ("p", "d", "f"):
        if len(getattr(s, name)) != s.t:
            raise InvalidSymbol(name, f"length must equal t={s.t}")
    for i, pi in enumerate(s.p):
        if pi < 2:
            raise InvalidSymbol("p", f"p[{i}]={pi} is below 2")
    for name in ("d", "f"):
        for i, x in enumerate(getattr(s, name)):
            if x < 1:
                raise InvalidSymbol(name, f"{name}[{i}]={x} is not positive")
    for i, (di, fi) in enumerate(zip(s.d, s.f)):
        if di % fi:
            raise InvalidSymbol("f", f"f[{i}]={fi} does not divide d[{i}]={di}")
    if not isinstance(s.kappa, int) or s.kappa < 1:
        raise InvalidSymbol("kappa", "must be a positive integer")
    for i, (di, fi) in enumerate(zip(s.d, s.f)):
        ei = di // fi
        if (s.kappa * s.epsilon * fi) % ei:
            raise InvalidSymbol("kappa", f"kappa*epsilon*f[{i}]/e[{i}] is not an integer")


def minimal_kappa(epsilon: int, d: Iterable[int], f: Iterable[int]) -> int:
    k = 1
    for di, fi in zip(d, f):
        if fi <= 0 or di % fi:
            continue  # left for validation to report
        ei = di // fi
        k = lcm(k, ei // gcd(ei, epsilon * fi))
    return k


def parse_symbol(text: str | bytes) -> Symbol:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be a JSON object")

    def integer(name: str, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedInput(f"{name}: expected an integer")
        return value

    for key in ("t", "epsilon", "p", "d", "f"):
        if key not in doc:
            raise MalformedInput(f"{key}: missing")
    unknown = set(doc) - {"t", "epsilon", "p", "d", "f", "kappa"}
    if unknown:
        raise MalformedInput(f"{sorted(unknown)[0]}: unknown field")
    t = integer("t", doc["t"])
    eps = integer("epsilon", doc["epsilon"])
    arrays = {}
    for key in ("p", "d", "f"):
        if not isinstance(doc[key], list):
            raise MalformedInput(f"{key}: expected an array")
        arrays[key] = tuple(integer(key, x) for x in doc[key])
        if len(arrays[key]) != t:
            raise InvalidSymbol(key, f"length {len(arrays[key])} differs from t={t}")
    if t < 1:
        raise InvalidSymbol("t", "must be a positive integer")
    if "kappa" in doc and doc["kappa"] is not None:
        kappa = integer("kappa", doc["kappa"])
    else:
        kappa = minimal_kappa(eps, arrays["d"], arrays["f"])
    return Symbol(t, eps, arrays["p"], arrays["d"], arrays["f"], kappa)


def reduce(s: Symbol) -> ReducedSymbol:
    return ReducedSymbol(s.p, tuple(s.epsilon * di for di in s.d))


def epsilon_one_equivalent(s: Symbol) -> Symbol:
    if s.epsilon == 1:
        return s
    d = tuple(2 * di for di in s.d)
    return Symbol(s.t, 1, s.p, d, s.f, minimal_kappa(1, d, s.f))


def delta(s: Symbol) -> Fraction:
    return sum((Fraction(s.epsilon * di) * (1 - Fraction(1, pi))
                for pi, di in zip(s.p, s.d)), Fraction(0)) - 2


def classify(s: Symbol) -> ClassInfo:
    dl = delta(s)
    klass = DOMESTIC if dl < 0 else TUBULAR if dl == 0 else WILD
    name, aliases = lookup_name(s)
    return ClassInfo(s.n, dl, klass, name, aliases)


# --- type dictionaries -------------------------------------------------------

def _tilde(letter: str) -> str:
    return unicodedata.normalize("NFC", letter + "̃")


def ascii_name(name: str) -> str:
    """Render a table name in ASCII: a tilde accent becomes a trailing '~'."""
    out = []
    for ch in unicodedata.normalize("NFD", name):
        if ch == "̃":
            out.append("~")
        else:
            out.append(ch)
    return "".join(out).replace("~_", "~")


@dataclass(frozen=True)
class TableRow:
    name: str
    table: str  # "domestic", "eps1" or "eps2"
    epsilon: int
    p: tuple[int, ...]
    d: tuple[int, ...]
    f: tuple[int, ...]

    def symbol(self) -> Symbol:
        return Symbol.make(self.p, self.d, self.f, epsilon=self.epsilon)

    @property
    def expected_class(self) -> str:
        return DOMESTIC if self.table == "domestic" else TUBULAR


def _row(name: str, table: str, p, d=None, f=None, epsilon: int = 1) -> TableRow:
    p = tuple(p)
    return TableRow(name, table, epsilon, p,
                    tuple(d) if d else (1,) * len(p),
                    tuple(f) if f else (1,) * len(p))


# Fixed rows of the tubular dictionaries, entries (p; d; f), missing rows meaning 1.
TUBULAR_EPS1: tuple[TableRow, ...] = tuple(_row(*r) for r in [
    ("BC_1^(2,1)", "eps1", (2,), (4,), (1,)),
    ("A_1^(1,1)*", "eps1", (2,), (4,), (2,)),
    ("BC_1^(2,4)", "eps1", (2,), (4,), (4,)),
    ("B_2^(2,1)", "eps1", (2, 2), (2, 2), (1, 1)),
    ("BC_2^(2,2)(1)", "eps1", (2, 2), (2, 2), (2, 1)),
    ("C_2^(1,2)", "eps1", (2, 2), (2, 2), (2, 2)),
    ("G_2^(3,1)", "eps1", (3,), (3,), (1,)),
    ("G_2^(1,3)", "eps1", (3,), (3,), (3,)),
    ("G_2^(1,1)", "eps1", (2, 2), (1, 3), (1, 1)),
    ("G_2^(3,3)", "eps1", (2, 2), (1, 3), (1, 3)),
    ("B_3^(1,1)", "eps1", (2, 2, 2), (1, 1, 2), (1, 1, 1)),
    ("C_3^(2,2)", "eps1", (2, 2, 2), (1, 1, 2), (1, 1, 2)),
    ("F_4^(2,1)", "eps1", (4, 2), (2, 1), (1, 1)),
    ("F_4^(1,2)", "eps1", (4, 2), (2, 1), (2, 1)),
    ("F_4^(1,1)", "eps1", (3, 3), (1, 2), (1, 1)),
    ("F_4^(2,2)", "eps1", (3, 3), (1, 2), (1, 2)),
    ("D_4^(1,1)", "eps1", (2, 2, 2, 2)),
    ("E_6^(1,1)", "eps1", (3, 3, 3)),
    ("E_7^(1,1)", "eps1", (4, 4, 2)),
    ("E_8^(1,1)", "eps1", (6, 3, 2)),
])

TUBULAR_EPS2: tuple[TableRow, ...] = (
    _row("BC_1^(2,1)", "eps2", (2,), (2,), (2,), epsilon=2),
    _row("BC_1^(2,4)", "eps2", (2,), (2,), (1,), epsilon=2),
    _row("BC_2^(2,2)(1)", "eps2", (2, 2), (1, 1), (1, 1), epsilon=2),
)


def domestic_rows(max_p: int = 8) -> tuple[TableRow, ...]:
    """One representative row per domestic family member with parameters up to max_p.

    The reduced entries are instantiated with f_i = 1 and d_i = ed_i.
    """
    rows = []
    for p in range(2, max_p + 1):
        rows.append(_row(_tilde("A") + f"_{p}", "domestic", (p,)))
    for p1 in range(2, max_p + 1):
        for p2 in range(p1, max_p + 1):
            rows.append(_row(_tilde("A") + f"_{p1 + p2 - 1}", "domestic", (p1, p2)))
    for p in range(2, max_p + 1):
        rows.append(_row(_tilde("B") + f"_{p + 1}", "domestic", (2, p), (2, 1)))
    for p in range(2, max_p + 1):
        rows.append(_row(_tilde("C") + f"_{p}", "domestic", (p,), (2,)))
    for p in range(2, max_p + 1):
        rows.append(_row(_tilde("D") + f"_{p + 2}", "domestic", (2, 2, p)))
    rows.append(_row(_tilde("E") + "_6", "domestic", (2, 3, 3)))
    rows.append(_row(_tilde("E") + "_7", "domestic", (2, 3, 4)))
    rows.append(_row(_tilde("E") + "_8", "domestic", (2, 3, 5)))
    rows.append(_row(_tilde("F") + "_4", "domestic", (2, 3), (1, 2)))
    rows.append(_row(_tilde("G") + "_2", "domestic", (2,), (3,)))
    return tuple(rows)


def domestic_family_representatives() -> tuple[TableRow, ...]:
    """The ten columns of the domestic dictionary, parametric ones at their smallest parameter."""
    t = _tilde
    return (
        _row(t("A") + "_2", "domestic", (2,)),
        _row(t("A") + "_3", "domestic", (2, 2)),
        _row(t("B") + "_3", "domestic", (2, 2), (2, 1)),
        _row(t("C") + "_2", "domestic", (2,), (2,)),
        _row(t("D") + "_4", "domestic", (2, 2, 2)),
        _row(t("E") + "_6", "domestic", (2, 3, 3)),
        _row(t("E") + "_7", "domestic", (2, 3, 4)),
        _row(t("E") + "_8", "domestic", (2, 3, 5)),
        _row(t("F") + "_4", "domestic", (2, 3), (1, 2)),
        _row(t("G") + "_2", "domestic", (2,), (3,)),
    )


def _full_key(epsilon: int, p, d, f) -> tuple:
    return (epsilon, tuple(sorted(zip(p, d, f))))


def _reduced_key(epsilon: int, p, d) -> tuple:
    return tuple(sorted((pi, epsilon * di) for pi, di in zip(p, d)))


def _domestic_name(key: tuple[tuple[int, int], ...]) -> str | None:
    # Parametric families are recognised structurally rather than by a finite list.
    ps = [p for p, _ in key]
    eds = [ed for _, ed in key]
    t = _tilde
    if len(key) == 1:
        (p, ed), = key
        if ed == 1:
            return t("A") + f"_{p}"
        if ed == 2:
            return t("C") + f"_{p}"
        if ed == 3 and p == 2:
            return t("G") + "_2"
        return None
    if len(key) == 2:
        if eds == [1, 1]:
            return t("A") + f"_{ps[0] + ps[1] - 1}"
        if (2, 2) in key and eds.count(1) == 1:
            other = [p for p, ed in key if ed == 1][0]
            return t("B") + f"_{other + 1}"
        if key == ((2, 1), (3, 2)):
            return t("F") + "_4"
        return None
    if len(key) == 3 and eds == [1, 1, 1]:
        if ps[0] == 2 and ps[1] == 2:
            return t("D") + f"_{ps[2] + 2}"
        if ps[:2] == [2, 3] and ps[2] in (3, 4, 5):
            return t("E") + f"_{ps[2] + 3}"
    return None


def lookup_name(s: Symbol) -> tuple[str | None, tuple[str, ...]]:
    """Dictionary name of a symbol plus every name sharing its reduced symbol.

    An exact (p, d, f, epsilon) row wins; otherwise the first row with the
    same reduced symbol is used.
    """
    full = _full_key(s.epsilon, s.p, s.d, s.f)
    red = _reduced_key(s.epsilon, s.p, s.d)
    exact = None
    aliases: list[str] = []
    for row in TUBULAR_EPS1 + TUBULAR_EPS2:
        if _reduced_key(row.epsilon, row.p, row.d) == red:
            if row.name not in aliases:
                aliases.append(row.name)
            if exact is None and _full_key(row.epsilon, row.p, row.d, row.f) == full:
                exact = row.name
    dom = _domestic_name(red)
    if dom is not None:
        aliases.append(dom)
        if exact is None and s.epsilon == 1 and all(fi == 1 for fi in s.f):
            exact = dom
    if exact is None and aliases:
        exact = aliases[0]
    return exact, tuple(aliases)

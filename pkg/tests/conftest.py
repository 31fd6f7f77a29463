import json
import sys
from pathlib import Path

import pytest

from canonlat.lattice import build_lattice
from canonlat.symbol import Symbol

SMALL = {
    "a2": Symbol.make((2,)),
    "a3": Symbol.make((2, 2)),
    "d4t": Symbol.make((2, 2, 2, 2)),
    "e6t": Symbol.make((3, 3, 3)),
    "wild237": Symbol.make((2, 3, 7)),
    "c2": Symbol.make((2,), (2,)),
    "eps2": Symbol.make((2, 2), (1, 1), (1, 1), epsilon=2),
}


@pytest.fixture(params=sorted(SMALL))
def any_lattice(request):
    return build_lattice(SMALL[request.param])


@pytest.fixture
def write_symbol(tmp_path: Path):
    def _write(sym: Symbol | dict, name: str = "sym.json") -> str:
        doc = sym.to_json() if isinstance(sym, Symbol) else sym
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return _write


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")

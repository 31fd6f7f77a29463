import io
import json
import shutil
import subprocess

import pytest

from canonlat.cli import run
from canonlat.symbol import Symbol

A2 = Symbol.make((2,))
D4T = Symbol.make((2, 2, 2, 2))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify(write_symbol):
    code, out, _ = call("classify", write_symbol(A2))
    assert code == 0
    assert out == "n=3 delta=-3/2 class=Domestic name=A~2\n"


def test_classify_wild_has_no_name(write_symbol):
    _, out, _ = call("classify", write_symbol(Symbol.make((2, 3, 7))))
    assert out == "n=11 delta=1/42 class=Wild name=none\n"


def test_input_errors(write_symbol, tmp_path):
    assert call("classify", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    assert call("classify", str(bad))[0] == 2
    assert call("frobnicate", write_symbol(A2))[0] == 2
    assert call("hyperbolic", write_symbol(A2))[0] == 2


def test_gram_formats(write_symbol):
    path = write_symbol(A2)
    assert call("gram", path)[1] == "1\t-1\t-1\n0\t1\t2\n0\t0\t1\n"
    doc = json.loads(call("gram", path, "--format", "json", "--form", "sym")[1])
    assert doc["matrix"][0] == [2, -1, -1]


def test_roots_and_truncation(write_symbol):
    _, out, _ = call("roots", write_symbol(A2), "--depth", "3", "--cap", "4")
    lines = out.splitlines()
    assert lines[-1] == "# truncated" and len(lines) == 5


def test_hurwitz_report_and_dump(write_symbol):
    path = write_symbol(A2)
    doc = json.loads(call("hurwitz", path, "--depth", "4")[1])
    assert doc["size"] == 47
    dump = call("hurwitz", path, "--depth", "1", "--dump")[1].splitlines()
    assert len(dump) == 5 and dump[0].count(";") == 2


def test_hyperbolic_flags(write_symbol):
    path = write_symbol(D4T)
    code, out, _ = call("hurwitz", path, "--depth", "1", "--hyperbolic")
    assert code == 0 and json.loads(out)["size"] > 1
    code, out, _ = call("hyperbolic", path, "--report")
    assert code == 0 and json.loads(out)["passed"]


def test_dynkin_and_ncposet(write_symbol):
    path = write_symbol(A2)
    assert call("dynkin", path, "--quotient")[1].startswith("graph quotient")
    doc = json.loads(call("ncposet", path, "--depth", "2", "--format", "json")[1])
    assert doc and call("ncposet", path, "--depth", "2")[1].startswith("digraph")


def test_verify_single_suite(write_symbol):
    code, out, _ = call("verify", write_symbol(A2), "--suite", "coxeter")
    doc = json.loads(out)
    assert code == 0 and doc["failures"] == [] and list(doc["suites"]) == ["coxeter"]


@pytest.mark.skipif(shutil.which("canonlat") is None, reason="console script not installed")
def test_console_script(write_symbol):
    res = subprocess.run(["canonlat", "classify", write_symbol(A2)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("n=3")

import json
import subprocess
import sys

import pytest

from loopinv.io import dump_loop, parse_closure_document, parse_loop, read_ideal, dump_ideal
from loopinv.poly import ParseError, parse_poly, x_vars
from loopinv import closure

from conftest import CYCLOTOMIC_LOOP, FIB

FIB_DOC = {"dim": 3, "matrix": [["1", "1", "0"], ["1", "0", "0"], ["0", "0", "-1"]], "init": ["1", "0", "-1"]}


def run(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "loopinv", *map(str, args)], capture_output=True, text=True,
                          input=stdin, timeout=600)


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        p = tmp_path / name
        p.write_text(content if isinstance(content, str) else json.dumps(content))
        return p
    return write


def test_parse_loop_document():
    loop = parse_loop(json.dumps(FIB_DOC))
    assert loop == FIB
    doc = dict(FIB_DOC, init=["1/16", "0", "-1"])
    assert parse_loop(json.dumps(doc)).init[0] * 16 == 1


@pytest.mark.parametrize("doc", [
    dict(FIB_DOC, matrix=[["1", "1"], ["1", "0", "0"], ["0", "0", "-1"]]),
    dict(FIB_DOC, init=["1", "0"]),
    dict(FIB_DOC, init=["1", "0.5", "0"]),
    dict(FIB_DOC, init=["1", "abc", "0"]),
    dict(FIB_DOC, dim=0),
    {"dim": 3},
])
def test_parse_loop_errors(doc):
    with pytest.raises(ParseError):
        parse_loop(json.dumps(doc))


def test_loop_roundtrip():
    assert parse_loop(dump_loop(CYCLOTOMIC_LOOP)) == CYCLOTOMIC_LOOP


def test_ideal_roundtrip():
    gens = read_ideal("x2^2 + x1*x2 - x1^2 - x3\n# c\n1\nx1^2 - x2^2\n", 3)
    assert read_ideal(dump_ideal(gens), 3) == gens
    with pytest.raises(ParseError):
        read_ideal("x4 + 1", 3)


def test_closure_document_roundtrip():
    from loopinv.io import closure_document
    cr = closure(CYCLOTOMIC_LOOP, rationalize=True)
    doc = json.loads(json.dumps(closure_document(cr, True)))
    parsed = parse_closure_document(doc)
    K = parsed["field"]
    assert K.minpoly == cr.field.minpoly
    assert K.box.as_complex() == cr.field.box.as_complex()
    assert parsed["main"] == cr.main_gens
    assert parsed["isolated_points"] == cr.isolated_points
    assert len(parsed["rational"]) == len(cr.rational_gens)


def test_cli_closure_fib(files):
    loop = files("fib.json", FIB_DOC)
    r = run("closure", loop, "--rationalize", "--format", "json")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["kind"] == "closure" and doc["isolated_points"] == []
    r = run("closure", loop)
    assert r.returncode == 0
    polys = [ln for ln in r.stdout.splitlines() if ln and not ln.startswith("#") and not ln.startswith("point")]
    for ln in polys:
        parse_poly(ln, x_vars(3))


def test_cli_verify_exit_codes(files):
    loop = files("fib.json", FIB_DOC)
    weak = files("weak.ideal", "(x2^2 + x1*x2 - x1^2)^2 - x3^2\n")
    strong = files("strong.ideal", "x2^2 + x1*x2 - x1^2 - x3\nx3^2 - 1\n")
    assert run("verify", loop, weak, "--mode", "strongest").returncode == 1
    assert run("verify", loop, weak, "--mode", "inductive").returncode == 0
    assert run("verify", loop, weak).returncode == 0
    assert run("verify", loop, strong, "--mode", "strongest").returncode == 0
    r = run("verify", loop, strong, "--mode", "chain", "--format", "json")
    assert r.returncode == 0 and json.loads(r.stdout)["stabilization_index"] == 0


def test_cli_parse_errors(files):
    loop = files("fib.json", FIB_DOC)
    bad_loop = files("bad.json", dict(FIB_DOC, matrix=[["1"], ["1"], ["1"]]))
    bad_ideal = files("bad.ideal", "x1 x2\n")
    unknown = files("unknown.ideal", "x9 - 1\n")
    ideal = files("ok.ideal", "x3^2 - 1\n")
    assert run("closure", bad_loop).returncode == 2
    assert run("verify", loop, bad_ideal).returncode == 2
    assert run("verify", loop, unknown).returncode == 2
    assert run("verify", bad_loop, ideal).returncode == 2
    assert run("closure", files("nojson.json", "{not json")).returncode == 2
    assert run("closure", "/nonexistent/loop.json").returncode == 2
    assert run("bogus").returncode == 2
    assert run("synth", ideal).returncode == 2  # missing --bits/--dim


def test_cli_resource_cap(files):
    cyc = files("cyc.json", {"dim": 3, "matrix": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]],
                             "init": ["1", "1", "1"]})
    ideal = files("x1.ideal", "x1 - 1\n")
    assert run("verify", cyc, ideal, "--mode", "chain", "--max-iter", "1").returncode == 3
    assert run("verify", cyc, ideal, "--mode", "chain", "--max-iter", "4").returncode == 0
    big = files("big.ideal", "x1 - x2 - x3 - x4\n")
    assert run("synth", big, "--bits", "3", "--dim", "4", "--strategy", "exhaustive").returncode == 3


def test_cli_synth(files):
    line = files("line.ideal", "x1 - x2\n")
    r = run("synth", line, "--bits", "2", "--dim", "2", "--mode", "strong", "--format", "json")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["found"] and parse_loop(json.dumps(doc["loop"])).dim == 2
    circle = files("circle.ideal", "x1^2 + x2^2 + 1\n")
    assert run("synth", circle, "--bits", "1", "--dim", "2", "--domain", "rationals").returncode == 1
    point = files("point.ideal", "x1 - 1\n")
    assert run("synth", point, "--bits", "2", "--dim", "1", "--mode", "strong").returncode == 1


def test_cli_lattice():
    r = run("lattice", "x^2+1@0,-1", "x^2+1@0,1", "x^2+x+1@-0.5,-0.87", "x^2+x+1@-0.5,0.87", "--format", "json")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["basis"] == [[1, 1, 0, 0], [0, 4, 0, 0], [0, 0, 1, 1], [0, 0, 0, 3]]
    assert run("lattice", "x@0").returncode == 2
    assert run("lattice", "x^2+@1").returncode == 2

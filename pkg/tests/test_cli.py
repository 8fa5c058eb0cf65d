import json
import os
import subprocess
import sys

import pytest

from polydiv import documents as docs
from polydiv.cli import main, parse_box

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


def g(name):
    return os.path.join(GOLDEN, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, code", [
    (["validate", g("a3.ppdiv")], 0),
    (["validate", g("trivial-coefficient.ppdiv")], 2),
    (["validate", g("wrong-tail.ppdiv")], 2),
    (["check-action", g("a3.ppdiv"), g("swap.action")], 0),
    (["check-action", g("a3.ppdiv"), g("broken.action")], 3),
    (["check-action", g("a3.ppdiv"), g("swap-literal.action")], 3),
    (["descend", g("a3.ppdiv"), g("swap-literal.action"), "--box", "0..1,0..1"], 3),
    (["hilbert", g("sl2.ppdiv"), "--box", "-1..1,-1..1"], 2),
    (["hilbert", g("a3.ppdiv"), "--box", "0..oops"], 1),
    (["eval", "missing.ppdiv", "--m", "1,1"], 1),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["eval", g("a3.ppdiv")])
    assert exc.value.code == 1


def test_unsupported_scope_exits_four(capsys, tmp_path):
    doc = docs.read_document(g("a3.ppdiv"))
    doc["entries"].append({"divisor": {"poly": ["1", "0", "0", "0", "1"]}, "polyhedron": doc["entries"][0]["polyhedron"]})
    p = tmp_path / "quartic.ppdiv"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "basechange", str(p), "--d", "2")
    assert code == 4 and "unsupported" in err


def test_validate_reports_the_certificate(capsys):
    code, out, _ = run(capsys, "validate", g("trivial-coefficient.ppdiv"))
    assert "big: no" in out and "proper: no" in out
    _, out, _ = run(capsys, "validate", g("sl2.ppdiv"))
    assert "common tail {0}" in out


def test_hilbert_table_output(capsys):
    code, out, _ = run(capsys, "hilbert", g("a3.ppdiv"), "--box", "0..2,0..2")
    assert code == 0
    assert out.splitlines()[-1].split() == ["2", "1", "2", "3"]
    _, out, _ = run(capsys, "hilbert", g("sl2.ppdiv"), "--box", "-1..1,-1..1", "--degree-bound", "4", "--json")
    cells = json.loads(out.splitlines()[-1])
    assert cells["0,0"] == 5 and len(cells) == 9


def test_downgrade_writes_a_loadable_document(capsys, tmp_path):
    target = tmp_path / "blowup.ppdiv"
    code, out, _ = run(capsys, "downgrade", g("blowup.dginput"), "--output", str(target))
    assert code == 0
    D = docs.parse_ppdiv(docs.read_document(str(target)))
    assert D.base.kind == "toric" and len(D.base.rays) == 3


def test_downgrade_rejects_unsaturated_subtori(capsys, tmp_path):
    p = tmp_path / "torsion.dginput"
    p.write_text(json.dumps({"version": "ppdiv/1", "kind": "downgrade-input", "sigma": [[1, 0], [0, 1]], "F": [[2], [0]]}))
    code, _, err = run(capsys, "downgrade", str(p))
    assert code == 2 and "saturated" in err


def test_descent_table(capsys):
    code, out, _ = run(capsys, "descend", g("a3.ppdiv"), g("swap.action"), "--box", "0..1,0..1")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert ["(0,1)", "(1,0)", "2", "2"] in rows


def test_parse_box():
    assert parse_box("-3..3,0..2") == [(-3, 3), (0, 2)]


def test_repeated_runs_are_byte_identical():
    cmd = [sys.executable, "-m", "polydiv.cli", "hilbert", g("x3y4zw.ppdiv"), "--box", "0..12,-1..1", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first

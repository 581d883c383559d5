import io
import json
import subprocess
import sys

import jsonschema
import pytest

from patrol.cli import VERDICT_SCHEMA, run


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def call_json(argv, **kw):
    code, text = call(["--json"] + argv, **kw)
    obj = json.loads(text)
    jsonschema.validate(obj, VERDICT_SCHEMA)
    return code, obj


@pytest.mark.parametrize("argv, status, code", [
    (["point", "solve", "2", "3", "5"], "bad", 1),
    (["point", "solve", "2", "2"], "good", 0),
    (["point", "approx", "1", "1"], "ok", 0),
    (["point", "optimal-idle", "2", "3", "5"], "ok", 0),
    (["point", "bad-family", "2"], "bad", 1),
    (["point", "verify-1546", "--bound", "5"], "ok", 0),
    (["fence", "partition", "2", "1", "1"], "ok", 0),
    (["fence", "build43", "--n", "2", "--L", "3"], "ok", 0),
    (["fence", "search", "1", "--eps", "1/2"], "found", 0),
    (["circle", "runners", "2", "1"], "ok", 0),
    (["circle", "greedy", "--c", "3", "--grid", "1/4", "--period", "10", "--kmax", "5"], "none", 1),
    (["circle", "greedy", "--c", "6/5", "--grid", "1/2", "--period", "4", "--kmax", "3"], "ok", 0),
    (["cover", "dcs-find", "2", "4", "4"], "found", 0),
    (["cover", "dcs-find", "2", "3", "6"], "none", 1),
    (["cover", "dcs-check", "2,0", "4,1", "4,3"], "ok", 0),
    (["cover", "drc-find", "2", "2", "2"], "none", 1),
    (["cover", "drc-check", "35,0", "77,1"], "ok", 0),
    (["cover", "drc-check", "2,0", "4,2"], "violated", 1),
    (["gpp", "solve", "--times", "1", "99", "--intervals", "98"], "found", 0),
    (["gpp", "solve", "--times", "0", "1", "--intervals", "5"], "none", 1),
    (["repro", "f1546", "--r-max", "16", "--bound", "5"], "ok", 0),
])
def test_json_verdicts(argv, status, code):
    got_code, obj = call_json(argv)
    assert (got_code, obj["status"]) == (code, status)
    assert obj["command"] == " ".join(argv[:2])
    assert "max_states" in obj["budgets"] or obj["budgets"]


def test_usage_errors():
    assert call(["point", "solve"])[0] == 2
    assert call([])[0] == 2
    assert call(["fence", "build43", "--n", "x", "--L", "3"])[0] == 2
    assert call(["point", "solve", "2", "0"])[0] == 2


def test_budget_exit_code():
    code, obj = call_json(["--max-states", "5", "point", "solve", "2", "3", "5", "9", "17"])
    assert code == 3 and obj["status"] == "unknown-budget"


def test_env_budget(monkeypatch):
    monkeypatch.setenv("PATROL_BUDGET_STATES", "5")
    code, obj = call_json(["point", "solve", "2", "3", "5", "9", "17"])
    assert code == 3 and obj["budgets"]["max_states"] == 5
    monkeypatch.setenv("PATROL_BUDGET_STATES", "lots")
    assert call(["point", "solve", "2", "2"])[0] == 2


def test_output_is_deterministic():
    argv = ["--json", "fence", "build43", "--n", "2", "--L", "2"]
    assert call(argv)[1] == call(argv)[1]


def test_decimals(monkeypatch):
    assert call(["fence", "partition", "0.5"])[0] == 2
    code, obj = call_json(["--max-denominator", "10", "fence", "partition", "0.5"])
    assert code == 0 and obj["details"]["length"] == "1/4"


def test_verify_reads_stdin(monkeypatch):
    _, text = call(["fence", "build43", "--n", "3", "--L", "8"])
    code, obj = call_json(["fence", "verify"], stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and obj["status"] == "ok"
    bad = text.replace("fence 8 ", "fence 9 ", 1)
    code, obj = call_json(["fence", "verify"], stdin=bad, monkeypatch=monkeypatch)
    assert code == 1 and obj["witness"] is not None


def test_malformed_file_reports_position(monkeypatch, capsys):
    code, _ = call(["fence", "verify"], stdin="fence 1 1 1 1\nv=1 period=1 0,0 1/2,zz\n",
                   monkeypatch=monkeypatch)
    assert code == 2 and "line 2" in capsys.readouterr().err


def test_sequence_pipe(monkeypatch):
    argv = ["circle", "greedy", "--c", "3/2", "--grid", "1/4", "--period", "2", "--kmax", "2"]
    _, seq = call(argv)
    assert call(["circle", "verify-seq"], stdin=seq, monkeypatch=monkeypatch)[0] == 0
    _, sched = call(["circle", "seq-to-schedule"], stdin=seq, monkeypatch=monkeypatch)
    assert call(["circle", "verify"], stdin=sched, monkeypatch=monkeypatch)[0] == 0


def test_shell_pipe():
    build = subprocess.run([sys.executable, "-m", "patrol.cli", "fence", "build43", "--n", "3", "--L", "8"],
                           capture_output=True, text=True, check=True)
    check = subprocess.run([sys.executable, "-m", "patrol.cli", "fence", "verify"],
                           input=build.stdout, capture_output=True, text=True)
    assert check.returncode == 0 and "status: ok" in check.stdout


def test_svg(tmp_path):
    target = tmp_path / "f.svg"
    assert call(["fence", "build43", "--n", "1", "--L", "2", "--svg", str(target)])[0] == 0
    assert target.read_text().lstrip().startswith("<")


def test_reduce_verbs(monkeypatch):
    code, obj = call_json(["cover", "reduce-vc", "--k", "1"], stdin="3 2\n0 1\n1 2\n",
                          monkeypatch=monkeypatch)
    assert code == 0 and obj["status"] == "found"
    code, obj = call_json(["gpp", "reduce-3dm"], stdin='{"x":[1],"y":[1],"z":[1],"b":3}',
                          monkeypatch=monkeypatch)
    assert code == 0
    code, _ = call(["gpp", "reduce-3dm"], stdin='{"x":[1,2],"y":[1,2],"z":[1,2],"b":5}',
                   monkeypatch=monkeypatch)
    assert code == 2

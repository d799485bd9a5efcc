from __future__ import annotations

import json

from quiverlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_character_text_and_json(capsys):
    code, out, _ = run(capsys, "character", "--quiver", "A1~", "--window", "2:1")
    assert code == 0 and "[1, 1] -1 4" in out
    code, out, _ = run(capsys, "character", "--quiver", "A1~", "--window", "2:1", "--format", "json")
    data = json.loads(out)
    assert [[1, 1], -1, "4"] in data["character"]
    assert set(data["semistable"]) == {"0", "1/2", "1"}


def test_json_output_is_deterministic(capsys):
    args = ("verify", "twist", "--quiver", "A1~", "--count", "3", "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    assert json.loads(first)["suites"]["twist"]["failed"] == 0


def test_input_errors_exit_two(capsys, tmp_path):
    assert run(capsys, "character", "--quiver", "A1~", "--window", "-1")[0] == 2
    assert run(capsys, "character", "--quiver", "A1~", "--window", "2:x")[0] == 2
    assert run(capsys, "character", "--quiver", "Q9~", "--window", "2")[0] == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("dim: [1, 1\nmaps: {}\n")
    assert run(capsys, "rep", "check", str(bad), "--quiver", "A1~")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_rep_commands(capsys, tmp_path):
    f = tmp_path / "m.yaml"
    f.write_text("dim: [1, 1]\nmaps:\n  x: [[1]]\n")
    code, out, _ = run(capsys, "rep", "check", str(f), "--quiver", "A1~", "--format", "json")
    assert code == 0 and json.loads(out)["nilpotent"] is True
    code, out, _ = run(capsys, "rep", "reflect", str(f), "--quiver", "A1~", "--vertex", "0",
                       "--format", "json")
    assert code == 0


def test_verify_identities_needs_no_quiver(capsys):
    code, out, _ = run(capsys, "verify", "identities", "--order", "4")
    assert code == 0 and "FAIL" not in out


def test_verify_relations_reports_cubic_failures(capsys):
    code, out, _ = run(capsys, "verify", "relations", "--quiver", "A2~", "--modes", "1",
                       "--format", "json")
    assert code == 1
    results = json.loads(out)["suites"]["relations"]["results"]
    failed = {r["name"].split()[0] for r in results if not r["passed"]}
    assert failed == {"cubic"}
    assert any(r["passed"] for r in results)


def test_braid_and_limit(capsys):
    code, out, _ = run(capsys, "braid", "apply", "--quiver", "A1~", "--word", "2",
                       "--element", "e[1]s^0 t^0")
    assert code == 0 and "e[-1]s^0 t^0" in out
    code, out, _ = run(capsys, "limit", "mul", "--quiver", "A1~", "--x", "Y:1:1", "--y", "Y:1:1",
                       "--level", "1")
    assert code == 0 and "h[1]s^-1 t^0" in out


def test_zero_window_holds_only_the_unit(capsys):
    code, out, _ = run(capsys, "character", "--quiver", "A1~", "--window", "0:0", "--format", "json")
    assert code == 0 and json.loads(out)["character"] == [[[0, 0], 0, "1"]]


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0

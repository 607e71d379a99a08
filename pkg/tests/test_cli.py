import csv
import json

import pytest

from cgmlab import cli
from cgmlab.render import svg_from_report, tree_report


def _run(tmp_path, *argv):
    out = tmp_path / "r.json"
    code = cli.main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_lpp_report(tmp_path):
    code, man = _run(tmp_path, "lpp", "--seed", "3")
    assert code == 0 and man["passed"]
    assert man["schema_version"] == cli.SCHEMA_VERSION
    assert man["command"] == "lpp" and man["seed"] == 3 and man["config"]["seed"] == 3
    assert set(man["timestamps"]) == {"start", "end", "elapsed_s"}
    assert all(k.startswith("lpp.") for k in man["gates"])


def test_payload_is_deterministic(tmp_path):
    _, a = _run(tmp_path, "ci", "--seed", "4")
    _, b = _run(tmp_path, "ci", "--seed", "4")
    dump = lambda m: json.dumps(cli.payload(m), sort_keys=True)
    assert dump(a) == dump(b)


def test_threads_do_not_change_payload(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "VERIFY_ALL", ("lpp", "ci"))
    _, a = _run(tmp_path, "verify-all", "--seed", "2")
    _, b = _run(tmp_path, "verify-all", "--seed", "2", "--threads", "2")
    b["config"]["threads"] = 1
    assert json.dumps(cli.payload(a), sort_keys=True) == json.dumps(cli.payload(b), sort_keys=True)
    assert set(b["reports"]) == {"lpp", "ci"}


def test_gate_failure_exits_one_and_writes(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "run_check", lambda name, cfg: {"name": name, "results": {"x": 1}, "gates": {"g": False}, "passed": False})
    code, man = _run(tmp_path, "shape")
    assert code == 1 and man is not None and man["passed"] is False


@pytest.mark.parametrize("argv", [["lpp", "--bogus"], ["nonsense"], ["lpp", "--alpha", "1.5"], []])
def test_usage_errors_exit_two(argv):
    assert cli.main(argv) == 2


def test_config_file_and_flag(tmp_path, monkeypatch):
    seen = {}

    def fake(name, cfg):
        seen["cfg"] = cfg
        return {"name": name, "results": {}, "gates": {"ok": True}, "passed": True}

    monkeypatch.setattr(cli, "run_check", fake)
    p = tmp_path / "run.cfg"
    p.write_text("alpha = 0.3\nn = 200\n")
    code, _ = _run(tmp_path, "busemann", "--config", str(p), "--n", "800")
    assert code == 0 and seen["cfg"].alpha == 0.3 and seen["cfg"].n == 800


def test_csv_is_rfc4180(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "run_check", lambda name, cfg: {"name": name, "results": {"note": 'a "quoted", value', "v": [1, 2]}, "gates": {"ok": True}, "passed": True})
    path = tmp_path / "t.csv"
    assert cli.main(["shape", "--out", str(tmp_path / "r.json"), "--csv", str(path)]) == 0
    raw = path.read_bytes()
    assert b"\r\n" in raw and b'"a ""quoted"", value"' in raw
    rows = list(csv.reader(path.open(newline="")))
    assert rows[0] == ["report", "key", "value"]
    assert ["shape", "note", 'a "quoted", value'] in rows and ["shape", "v[1]", "2"] in rows


def test_render_trees(tmp_path):
    out = tmp_path / "tree.svg"
    assert cli.main(["render", "trees", "--alpha", "0.5", "--n", "200", "--seed", "7", "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and "<script" not in svg
    assert 'class="primal"' in svg and 'class="dual"' in svg and 'class="interface"' in svg


def test_svg_is_pure_function_of_report():
    rep = tree_report(0.5, 200, 7, size=20)
    assert svg_from_report(rep) == svg_from_report(json.loads(json.dumps(rep)))
    assert tree_report(0.5, 200, 7, size=20) == rep


def test_render_refuses_untrusted_box():
    with pytest.raises(ValueError):
        tree_report(0.5, 40, 1, size=40)

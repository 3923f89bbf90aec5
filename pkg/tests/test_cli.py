import csv
import json

import pytest

from snsga.cli import main


def test_bench_list(capsys):
    assert main(["bench", "list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 10


def test_bench_list_json(capsys):
    assert main(["bench", "list", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 10


def test_bench_run(tmp_path, capsys):
    out = tmp_path / "camp"
    assert main(["bench", "run", "--suite", "RC", "--trials", "5", "--seed", "1", "--out", str(out)]) == 0
    records = (out / "trials.jsonl").read_text().strip().splitlines()
    assert len(records) == 5
    with (out / "report.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1 and rows[0]["benchmark"] == "RC"
    assert "RC" in capsys.readouterr().out


def test_bench_run_uses_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("SNSGA_OUT", str(tmp_path))
    assert main(["bench", "run", "--suite", "Z2", "--trials", "1"]) == 0
    assert (tmp_path / "campaign" / "trials.jsonl").exists()


def test_bench_run_with_config(tmp_path):
    cfg = tmp_path / "fast.cfg"
    cfg.write_text("max_generations = 5\n")
    out = tmp_path / "o"
    assert main(["bench", "run", "--suite", "GP", "--trials", "2", "--config", str(cfg),
                 "--out", str(out), "--full-runs"]) == 0
    rec = json.loads((out / "trials.jsonl").read_text().splitlines()[0])
    assert rec["generations"] == 5 and rec["evaluations_full"] is not None


def test_trace(tmp_path):
    path = tmp_path / "t.csv"
    assert main(["trace", "--benchmark", "SH", "--seed", "2", "--out", str(path)]) == 0
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["generation", "nof"]
    values = [float(v) for _, v in rows[1:]]
    assert all(0 <= v <= 1 for v in values)


def test_schedule_demo(tmp_path, capsys):
    assert main(["schedule", "demo", "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert "f(t) = [2, 1, 0" in text
    with (tmp_path / "arrival_trace.csv").open() as fh:
        rows = list(csv.reader(fh))[1:]
    # user 1 occupies the rig alone from slot 0
    assert [float(f) for _, f in rows[:3]] == [2.0, 1.0, 0.0]


def test_schedule_solve(tmp_path):
    assert main(["schedule", "demo", "--out", str(tmp_path / "demo")]) == 0
    inst = tmp_path / "demo" / "instance.json"
    out = tmp_path / "solved"
    assert main(["schedule", "solve", "--instance", str(inst), "--out", str(out)]) == 0
    with (out / "schedule.csv").open() as fh:
        assert len(list(csv.DictReader(fh))) == 5
    assert (out / "trace.csv").exists()


@pytest.mark.parametrize("argv", [
    ["trace", "--benchmark", "nope"],
    ["bench", "run", "--suite", "RC,XX", "--trials", "1"],
    ["schedule", "solve", "--instance", "/nonexistent.json"],
])
def test_lookup_errors_exit_nonzero(argv, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SNSGA_OUT", str(tmp_path))
    assert main(argv) != 0
    assert "error" in capsys.readouterr().err


def test_malformed_files_exit_nonzero(tmp_path, capsys):
    bad_cfg = tmp_path / "bad.cfg"
    bad_cfg.write_text("population_size = 30\nnot a pair\n")
    assert main(["trace", "--benchmark", "RC", "--config", str(bad_cfg), "--out", str(tmp_path / "x.csv")]) == 2
    assert "bad.cfg:2" in capsys.readouterr().err
    bad_inst = tmp_path / "bad.json"
    bad_inst.write_text("{\n oops\n")
    assert main(["schedule", "solve", "--instance", str(bad_inst), "--out", str(tmp_path / "y")]) == 2
    assert "bad.json:2" in capsys.readouterr().err

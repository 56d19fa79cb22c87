import io
import json

import pytest

from bhcycle import oracles
from bhcycle.harness import export
from bhcycle.harness.cli import main
from bhcycle.harness.generators import generate_faults
from bhcycle.harness.sweep import (
    EXIT_CLEAN,
    EXIT_USAGE,
    EXIT_VIOLATION,
    ConfigError,
    ResultRecord,
    Summary,
    SweepConfig,
    exhaustive_count,
    load_bundle,
    needs_bundle,
    run_instance,
    run_sweep,
    sweep,
    write_bundle,
)
from bhcycle.topology import build_direct, decode


def _lines(buf):
    return [json.loads(x) for x in buf.getvalue().splitlines()]


# --- sweep -------------------------------------------------------------------------------


def test_exhaustive_count_small():
    # 32 edges in BH_2
    assert exhaustive_count(2, 2) == 1 + 32 + 32 * 31 // 2


def test_exhaustive_sweep_covers_every_set():
    cfg = SweepConfig(2, "exhaustive", max_faults=1, cross_check=1.0)
    buf = io.StringIO()
    summary = run_sweep(cfg, buf)
    rows = _lines(buf)
    assert summary.total == exhaustive_count(2, 1) == len(rows) - 1
    assert rows[-1]["summary"] and rows[-1]["violations"] == 0
    assert summary.outcomes["cycle"] == 33 and summary.oracle["agree"] == 33
    assert summary.exit_code(2) == EXIT_CLEAN


def test_exhaustive_n3_two_faults_allowed():
    SweepConfig(3, "exhaustive", max_faults=2)


def test_random_sweep_is_deterministic():
    cfg = SweepConfig(3, samples=15, generator="star", seed=4, cross_check=0.2)
    a = [r.to_json() for r in sweep(cfg)]
    b = [r.to_json() for r in sweep(cfg)]
    for r in a + b:
        r.pop("wall")
    assert a == b
    assert all(r["outcome"] == "cycle" for r in a)
    assert [r["id"] for r in a] == [f"star:4:{i}" for i in range(15)]
    assert sum(r["oracle"] == "agree" for r in a) == 3


def test_f4_instances_are_skipped_and_confirmed():
    cfg = SweepConfig(2, "exhaustive", max_faults=4)
    rec = run_instance(cfg, "x4:f4", 0, [[0, 3], [0, 7], [2, 3], [2, 7]])
    assert rec.outcome == "skipped" and rec.oracle == "confirmed-absent"
    # over the bound without an f4-cycle: skipped, no verdict
    rec = run_instance(cfg, "x4:0", 0, [[0, 1], [4, 5], [8, 9], [12, 13]])
    assert rec.outcome == "skipped" and rec.oracle is None


@pytest.mark.parametrize("kw", [dict(n=0), dict(n=3, mode="grid"), dict(n=3, mode="exhaustive"),
                                dict(n=3, generator="nope"), dict(n=3, seed=-1), dict(n=3, cross_check=2.0)])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        SweepConfig(**kw)


def test_default_max_faults():
    assert SweepConfig(4).max_faults == 13


def test_bundle_roundtrip(tmp_path):
    cfg = SweepConfig(3, samples=2, seed=9)
    edges = [list(e) for e in generate_faults("uniform", 3, 8, seed=9, index=1).sorted_edges()]
    rec = run_instance(cfg, "uniform:9:1", 1, edges)
    assert not needs_bundle(rec)
    rec.outcome = "fallback"
    assert needs_bundle(rec)
    path = write_bundle(str(tmp_path), cfg, rec)
    cfg2, again = load_bundle(path)
    assert cfg2 == cfg
    assert again.faults == edges and again.outcome == "cycle"


def test_sweep_writes_bundles_only_when_needed(tmp_path):
    cfg = SweepConfig(3, samples=5, bundle_dir=str(tmp_path))
    run_sweep(cfg, io.StringIO())
    assert list(tmp_path.iterdir()) == []


def test_violation_exit_code():
    s = Summary()
    s.add(ResultRecord("a", 2, 0, None, 0, [], {}, "violation"))
    assert s.violations == 1 and s.exit_code(2) == EXIT_VIOLATION


# --- export ----------------------------------------------------------------------------------


def test_export_bh1_dot():
    dot = export.export_topology(build_direct(1), "dot")
    assert dot.count("--") == 4
    assert sum(1 for x in dot.splitlines() if "label=" in x and "--" not in x) == 4


def test_cycle_json_roundtrip():
    t = build_direct(2)
    c = oracles.ham_cycle(t)
    text = export.export_cycle(t, c, frozenset(), "json")
    assert export.load_cycle(text) == list(c.vertices)


# --- CLI ------------------------------------------------------------------------------------------


def _faults_file(tmp_path, n, edges, name="f.json"):
    p = tmp_path / name
    p.write_text(json.dumps([[list(decode(u, n)), list(decode(v, n))] for u, v in edges]))
    return str(p)


def test_cli_gen_construct_verify(tmp_path, capsys):
    fpath = str(tmp_path / "f.json")
    assert main(["gen", "-n", "3", "--max-faults", "8", "--seed", "2", "--out", fpath]) == 0
    cyc, tr = str(tmp_path / "c.json"), str(tmp_path / "t.json")
    assert main(["construct", "-n", "3", "--faults", fpath, "--out", cyc, "--trace-out", tr]) == 0
    assert main(["verify", "-n", "3", "--faults", fpath, "--cycle", cyc, "--trace", tr]) == 0
    assert "ok" in capsys.readouterr().err


def test_cli_verify_detects_tampering(tmp_path, capsys):
    cyc = str(tmp_path / "c.json")
    assert main(["construct", "-n", "2", "--out", cyc]) == 0
    doc = json.loads(open(cyc).read())
    doc["vertices"][0], doc["vertices"][1] = doc["vertices"][1], doc["vertices"][0]
    open(cyc, "w").write(json.dumps(doc))
    assert main(["verify", "-n", "2", "--cycle", cyc]) == EXIT_VIOLATION
    capsys.readouterr()


def test_cli_construct_precondition_failure(tmp_path, capsys):
    fpath = _faults_file(tmp_path, 2, [(0, 3), (0, 7), (2, 3), (2, 7)])
    assert main(["construct", "-n", "2", "--faults", fpath]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert json.loads(err.splitlines()[0])["error"] == "preconditions"


def test_cli_oracle(capsys):
    assert main(["oracle", "-n", "2", "--kind", "lace", "--ends", "00", "10"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == "found" and len(out["path"]) == 16
    assert main(["oracle", "-n", "2", "--kind", "lace", "--ends", "00"]) == EXIT_USAGE
    assert main(["oracle", "-n", "2", "--kind", "cycle", "--budget", "1"]) in (0, 3)


def test_cli_oracle_absent(tmp_path, capsys):
    fpath = _faults_file(tmp_path, 2, [(0, 3), (0, 7), (2, 3), (2, 7)])
    assert main(["oracle", "-n", "2", "--faults", fpath]) == EXIT_VIOLATION
    assert json.loads(capsys.readouterr().out)["result"] == "absent"


def test_cli_sweep_and_replay(tmp_path, capsys):
    out = str(tmp_path / "s.jsonl")
    assert main(["sweep", "-n", "3", "--samples", "4", "--out", out]) == 0
    rows = [json.loads(x) for x in open(out)]
    assert rows[-1]["total"] == 4
    assert main(["replay", "-n", "3", "--index", "2"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["id"] == "uniform:0:2" and rec["faults"] == rows[2]["faults"]


def test_cli_replay_bundle(tmp_path, capsys):
    cfg = SweepConfig(2, samples=1)
    rec = next(sweep(cfg))
    path = write_bundle(str(tmp_path), cfg, rec)
    assert main(["replay", "--bundle", path]) == 0
    assert json.loads(capsys.readouterr().out)["faults"] == rec.faults


def test_cli_export_dot(capsys):
    assert main(["export", "-n", "1", "--format", "dot"]) == 0
    assert capsys.readouterr().out.count("--") == 4


@pytest.mark.parametrize("argv", [[], ["bogus"], ["construct"], ["construct", "-n", "0"],
                                  ["sweep", "-n", "3", "--mode", "exhaustive"], ["replay"],
                                  ["construct", "-n", "2", "--faults", "/nonexistent"],
                                  ["oracle", "-n", "2", "--kind", "lace", "--ends", "0", "1"]])
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    capsys.readouterr()


def test_cli_bad_fault_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("[[[0, 0], [2, 0]]]")
    assert main(["construct", "-n", "2", "--faults", str(p)]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err

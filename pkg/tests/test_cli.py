import json
import subprocess
import sys

import pytest

from apsgames.cli import (ATTACK_COLUMNS, HISTOGRAM_COLUMNS, REGRET_COLUMNS, TRACE_COLUMNS, RunConfig, main,
                          read_csv)
from apsgames.benchmark import BENCHMARK_COLUMNS


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = main([*args, "--out", str(out)])
    return code, out


def load(out, name="summary.json"):
    return json.loads((out / name).read_text(encoding="utf-8"))


def test_list_games(capsys):
    assert main(["list-games"]) == 0
    names = [g["name"] for g in json.loads(capsys.readouterr().out)]
    assert {"toy-cyber", "toy-cyber-ara", "resource", "ddos"} <= set(names)


def test_solve_mc_toy(tmp_path):
    code, out = run(tmp_path, "solve", "--game", "toy-cyber", "--method", "mc", "--P", "2000", "--Q", "2000")
    assert code == 0
    s = load(out)
    assert s["optimal_decision"] == 8 and s["agreement"] == 1.0
    assert s["replications"][0]["best_responses"] == {str(d): int(d <= 7) for d in range(10)}
    assert s["samples"] == 10 * (2 * 2000 + 2000)
    assert [r["decision"] for r in read_csv(out / "histogram.csv")] == ["8"]
    assert "wall_time_s" in load(out, "timing.json")


def test_solve_aps_writes_trace_and_svg(tmp_path):
    code, out = run(tmp_path, "solve", "--game", "toy-cyber", "--N", "300", "--M", "200", "--H-outer", "20:1:10",
                    "--reps", "2", "--svg")
    assert code == 0
    s = load(out)
    assert len(s["replications"]) == 2 and "rhat" in s
    assert s["config"]["H_outer"] == {"H_max": 20, "H0": 1, "tau": 10, "step": 1}
    rows = read_csv(out / "trace.csv")
    assert list(rows[0]) == list(TRACE_COLUMNS) and len(rows) == 600
    hist = read_csv(out / "histogram.csv")
    assert list(hist[0]) == list(HISTOGRAM_COLUMNS)
    assert sum(float(r["frequency"]) for r in hist) == pytest.approx(1.0)
    assert (out / "histogram.svg").read_text().startswith("<svg")


def test_solve_gibbs_ara(tmp_path):
    code, out = run(tmp_path, "solve", "--game", "toy-cyber-ara", "--method", "gibbs", "--N", "500", "--M", "50",
                    "--J", "20")
    assert code == 0
    tab = load(out)["replications"][0]["attack_distribution"]
    assert set(tab) == {str(d) for d in range(10)}
    assert all(sum(v) == pytest.approx(1.0) for v in tab.values())


def test_solve_is_deterministic_across_workers(tmp_path):
    args = ["solve", "--game", "toy-cyber", "--N", "200", "--M", "50", "--reps", "3", "--seed", "11"]
    assert main([*args, "--out", str(tmp_path / "a")]) == 0
    assert main([*args, "--workers", "3", "--out", str(tmp_path / "b")]) == 0
    sa, sb = load(tmp_path / "a"), load(tmp_path / "b")
    for s in (sa, sb):
        s["config"].pop("workers"), s["config"].pop("out")
    assert sa == sb
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"game": "toy-cyber", "method": "mc", "P": 500, "Q": 500, "seed": 3}))
    code, out = run(tmp_path, "solve", "--config", str(cfg), "--set", "P=700")
    assert code == 0
    s = load(out)
    assert s["config"]["P"] == 700 and s["seed"] == 3


def test_attack_dist(tmp_path):
    code, out = run(tmp_path, "attack-dist", "--game", "toy-cyber-ara", "--method", "mc", "--J", "100", "--Q", "50",
                    "--defense", "0")
    assert code == 0
    rows = read_csv(out / "attack_dist.csv")
    assert list(rows[0]) == list(ATTACK_COLUMNS) and len(rows) == 2
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1.0)
    assert load(out)["argmax"] == {"0": 1}


def test_sensitivity(tmp_path):
    code, out = run(tmp_path, "sensitivity", "--game", "toy-cyber", "--perturbations", "50", "--seed", "1")
    assert code == 0
    s = load(out)
    assert s["proposed"] == 8 and s["evaluated"] == 50 and s["verdict"] in ("robust", "not satisfied")
    rows = read_csv(out / "regret.csv")
    assert list(rows[0]) == list(REGRET_COLUMNS) and len(rows) == 50


def test_benchmark_small(tmp_path):
    code, out = run(tmp_path, "benchmark", "--precisions", "0.5", "--reps", "2", "--reference-samples", "256",
                    "--max-doublings", "2")
    assert code == 0
    rows = read_csv(out / "benchmark.csv")
    assert list(rows[0]) == list(BENCHMARK_COLUMNS) and [r["method"] for r in rows] == ["mc", "aps"]


@pytest.mark.parametrize("args", [
    ["solve", "--game", "toy-cyber", "--N", "-5"],
    ["solve", "--game", "nope"],
    ["solve", "--game", "toy-cyber", "--param", "bogus=1"],
    ["solve", "--game", "toy-cyber", "--info", "ara"],
    ["solve", "--game", "toy-cyber", "--set", "unknown_key=1"],
    ["solve", "--game", "toy-cyber", "--M", "10", "--K", "10"],
    ["solve", "--game", "toy-cyber", "--method", "gibbs", "--M", "10", "--K", "10"],
    ["solve", "--game", "toy-cyber", "--H-outer", "5:9"],
    ["solve", "--bogus-flag"],
    ["attack-dist", "--game", "toy-cyber"],
    ["attack-dist", "--game", "toy-cyber-ara", "--defense", "3.5"],
    ["sensitivity", "--game", "ddos"],
    ["benchmark", "--game", "toy-cyber"],
])
def test_config_errors_write_nothing(tmp_path, args):
    code, out = run(tmp_path, *args)
    assert code == 2
    assert not out.exists()


def test_solver_precondition_exit_code(tmp_path):
    code, _ = run(tmp_path, "solve", "--game", "resource", "--method", "mc")
    assert code == 3


def test_run_config_rejects_unknown_keys():
    with pytest.raises(Exception):
        RunConfig(bogus=1)


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "apsgames.cli", "list-games"], capture_output=True, text=True)
    assert res.returncode == 0 and "toy-cyber" in res.stdout

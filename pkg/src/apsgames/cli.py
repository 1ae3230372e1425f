"""Command-line front end.

Subcommands: ``solve``, ``attack-dist``, ``sensitivity``, ``benchmark`` and
``list-games``. A run is described by a :class:`RunConfig`, built from an
optional JSON file (``--config``) with command-line flags on top, and
validated before anything is written. Exit codes: 0 on success, 2 on a
configuration error (nothing is written), 3 when a solver precondition
fails.

Files (comma-separated, header row, UTF-8, LF):

- ``summary.json``: results and the resolved configuration
- ``timing.json``: wall times (kept apart so summaries are reproducible)
- ``trace.csv``: ``rep,iteration,decision,attack,outcome,accepted,H,utility``
- ``histogram.csv``: ``decision,frequency``
- ``attack_dist.csv``: ``defense,attack,probability``
- ``regret.csv``: ``index,utility,probability,optimal_decision,regret,regret_fraction``
- ``benchmark.csv``: see :data:`apsgames.benchmark.BENCHMARK_COLUMNS`
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .aps import AnnealSchedule, ApsConfig, attack_distribution_aps, solve_ara_aps, solve_complete_aps
from .benchmark import BENCHMARK_COLUMNS, BENCHMARK_GAME_PARAMS, BenchmarkConfig, run_benchmark
from .catalog import brute_force_solve, build_toy_perturbation_classes, get_game, list_games, resource_game
from .catalog.oracle import CapabilityError
from .diagnostics import bgr_statistic
from .game import AraGame, GameError
from .gibbs import attack_distribution_gibbs, solve_ara_gibbs, solve_complete_gibbs
from .mc import McConfig, attack_distribution_mc, solve_ara_mc, solve_complete_mc
from .parallel import pmap
from .proposals import CircularNeighbor, StudentTWalk
from .rng import RandomSource
from .sensitivity import sensitivity_analysis

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3

TRACE_COLUMNS = ("rep", "iteration", "decision", "attack", "outcome", "accepted", "H", "utility")
HISTOGRAM_COLUMNS = ("decision", "frequency")
ATTACK_COLUMNS = ("defense", "attack", "probability")
REGRET_COLUMNS = ("index", "utility", "probability", "optimal_decision", "regret", "regret_fraction")

# perturbation classes available to the sensitivity command
PERTURBATIONS = {"toy-cyber": build_toy_perturbation_classes}


class Ladder(BaseModel):
    """Power ladder ``H(i) = min(H_max, H0 + step * floor(i / tau))``."""

    model_config = ConfigDict(extra="forbid")
    H_max: int = Field(ge=1)
    H0: int = Field(1, ge=1)
    tau: Optional[int] = Field(None, ge=1)
    step: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _order(self):
        if self.H0 > self.H_max:
            raise ValueError("need H0 <= H_max")
        return self

    def schedule(self) -> AnnealSchedule:
        return AnnealSchedule.ladder(self.H_max, self.H0, self.tau, self.step)


Power = Union[int, Ladder]


class RunConfig(BaseModel):
    """Validated description of one CLI run; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")

    game: str = "toy-cyber"
    params: dict[str, float] = Field(default_factory=dict)
    method: Literal["mc", "aps", "gibbs"] = "aps"
    info: Optional[Literal["complete", "ara"]] = None
    seed: int = Field(0, ge=0)
    reps: int = Field(1, ge=1)
    workers: int = Field(1, ge=1)
    out: str = "out"
    svg: bool = False
    # Monte Carlo
    P: Optional[int] = Field(None, ge=1)
    Q: Optional[int] = Field(None, ge=1)
    J: Optional[int] = Field(None, ge=1)
    # APS / Gibbs
    N: Optional[int] = Field(None, ge=1)
    M: Optional[int] = Field(None, ge=1)
    K: Optional[int] = Field(None, ge=0)
    R: Optional[int] = Field(None, ge=0)
    H_inner: Optional[Power] = None
    H_outer: Optional[Power] = None
    kernel_scale: Optional[float] = Field(None, gt=0)
    attack_kernel_width: Optional[int] = Field(None, ge=1)
    # attack-dist
    defense: Optional[float] = None
    # sensitivity
    perturbations: int = Field(1_000, ge=1)
    threshold: float = Field(0.0, ge=0)
    early_stop: bool = False
    proposed: Optional[float] = None
    solver: Literal["exact", "mc", "aps", "gibbs"] = "exact"
    # benchmark
    precisions: list[float] = Field(default_factory=lambda: [0.1, 0.01])
    target: float = Field(0.9, gt=0, le=1)
    reference_samples: int = Field(16_384, ge=1)
    max_doublings: int = Field(12, ge=0)


# Solver settings used when the config leaves a field unset. They are the
# settings that reproduce the documented results for each catalog game.
PRESETS = {
    ("toy-cyber", "mc"): dict(P=10_000, Q=10_000),
    ("toy-cyber", "aps"): dict(N=20_000, M=3_000, H_inner=Ladder(H_max=15, tau=150),
                               H_outer=Ladder(H_max=2_000, tau=5)),
    ("toy-cyber", "gibbs"): dict(N=5_000, M=5_000, H_inner=2, H_outer=Ladder(H_max=2_000, tau=2)),
    ("toy-cyber-ara", "mc"): dict(P=10_000, Q=100, J=1_000),
    ("toy-cyber-ara", "aps"): dict(N=20_000, M=1_000, J=1_000, H_outer=Ladder(H_max=2_000, tau=5)),
    ("toy-cyber-ara", "gibbs"): dict(N=20_000, M=1_000, J=500, H_outer=Ladder(H_max=2_000, tau=5)),
    ("ddos", "mc"): dict(P=2_000, Q=200, J=200),
    ("ddos", "aps"): dict(N=5_000, M=500, J=200, H_inner=Ladder(H_max=200, tau=2), attack_kernel_width=5,
                          H_outer=Ladder(H_max=100_000, H0=1_000, tau=50, step=2_000)),
}
GENERIC = dict(P=10_000, Q=10_000, J=1_000, N=2_000, M=500, H_inner=1, H_outer=1)


class ConfigError(Exception):
    pass


def _game_key(name: str) -> str:
    return "resource" if name.startswith("resource-grid-") else name


def _setting(cfg: RunConfig, key: str):
    v = getattr(cfg, key)
    if v is not None:
        return v
    return PRESETS.get((_game_key(cfg.game), cfg.method), {}).get(key, GENERIC.get(key))


def _power(p) -> AnnealSchedule:
    return p.schedule() if isinstance(p, Ladder) else AnnealSchedule.fixed(int(p))


def _aps_config(cfg: RunConfig, game) -> ApsConfig:
    kw = dict(N=_setting(cfg, "N"), M=_setting(cfg, "M"), K=cfg.K, R=cfg.R,
              H_inner=_power(_setting(cfg, "H_inner")), H_outer=_power(_setting(cfg, "H_outer")),
              J=_setting(cfg, "J") if isinstance(game, AraGame) and game.defense_space.is_discrete else None)
    scale, width = cfg.kernel_scale, _setting(cfg, "attack_kernel_width")
    for key, sp in (("g_D", game.defense_space), ("g_A", game.attack_space)):
        if not sp.is_discrete and scale is not None:
            kw[key] = StudentTWalk(sp, scale=scale * (sp.upper - sp.lower))
    if game.attack_space.is_discrete and width is not None:
        kw["g_A"] = CircularNeighbor(game.attack_space, width=min(width, max(1, game.attack_space.size // 2)))
    return ApsConfig(**kw)


def _gibbs_kwargs(cfg: RunConfig, ara: bool) -> dict:
    kw = dict(N=_setting(cfg, "N"), M=_setting(cfg, "M"), K=cfg.K or 0, R=cfg.R,
              H_inner=_power(_setting(cfg, "H_inner")), H_outer=_power(_setting(cfg, "H_outer")))
    if ara:
        kw["J"] = _setting(cfg, "J")
    return kw


def _mc_config(cfg: RunConfig) -> McConfig:
    return McConfig(P=_setting(cfg, "P"), Q=_setting(cfg, "Q"), J=_setting(cfg, "J"))


def _build_game(cfg: RunConfig):
    game = get_game(cfg.game, **cfg.params)
    info = cfg.info or ("ara" if isinstance(game, AraGame) else "complete")
    if (info == "ara") != isinstance(game, AraGame):
        raise ConfigError(f"game {cfg.game} is a {'n ARA' if isinstance(game, AraGame) else ' complete-information'}"
                          f" game; --info {info} does not apply")
    return game, info


def _prepare(cfg: RunConfig):
    """Resolve everything that can fail before a run starts."""
    try:
        game, info = _build_game(cfg)
        if cfg.method == "mc":
            solver_cfg = _mc_config(cfg)
        elif cfg.method == "aps":
            solver_cfg = _aps_config(cfg, game)
        else:
            solver_cfg = _gibbs_kwargs(cfg, info == "ara")
            if not 0 <= solver_cfg["K"] < solver_cfg["M"]:
                raise ConfigError("need 0 <= K < M")
            if solver_cfg["R"] is not None and not 0 <= solver_cfg["R"] < solver_cfg["N"]:
                raise ConfigError("need 0 <= R < N")
    except GameError as e:
        raise ConfigError(str(e)) from e
    return game, info, solver_cfg


# ---------------------------------------------------------------- outputs

def _num(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, tuple):
        return [_num(v) for v in x]
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(_num(k)) if not isinstance(k, str) else k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    return _num(obj)


def write_json(path: Path, data: dict) -> None:
    text = json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"
    path.write_text(text, encoding="utf-8", newline="\n")
    if json.loads(path.read_text(encoding="utf-8")) != json.loads(text):
        raise OSError(f"round-trip check failed for {path}")


def write_csv(path: Path, columns, rows) -> None:
    rows = [[_fmt(v) for v in ([r[c] for c in columns] if isinstance(r, dict) else r)] for r in rows]
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    with open(path, encoding="utf-8", newline="") as f:
        back = list(csv.reader(f))
    if back[0] != list(columns) or len(back) != len(rows) + 1 or any(len(r) != len(columns) for r in back):
        raise OSError(f"round-trip check failed for {path}")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v)) if math.isfinite(v) else ("" if math.isnan(v) else str(float(v)))
    if isinstance(v, tuple):
        return " ".join(str(_num(x)) for x in v)
    return _num(v)


def read_csv(path) -> list[dict]:
    """Parse one of the CSV outputs into a list of row dicts (strings)."""
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def histogram_svg(hist: dict, title: str) -> str:
    """Minimal bar chart of a ``{decision: frequency}`` mapping."""
    items = list(hist.items())
    w, h, pad = 480, 240, 30
    bw = (w - 2 * pad) / max(1, len(items))
    top = max((f for _, f in items), default=1.0) or 1.0
    bars = []
    for i, (d, f) in enumerate(items):
        bh = (h - 2 * pad) * f / top
        x = pad + i * bw
        bars.append(f'<rect x="{x:.1f}" y="{h - pad - bh:.1f}" width="{bw * 0.8:.1f}" height="{bh:.1f}" '
                    f'fill="#4a6fa5"><title>{d}: {f:.4f}</title></rect>')
        if len(items) <= 40:
            bars.append(f'<text x="{x + bw * 0.4:.1f}" y="{h - pad + 12}" font-size="8" '
                        f'text-anchor="middle">{d}</text>')
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
            f'<text x="{pad}" y="16" font-size="12">{title}</text>' + "".join(bars) + "</svg>\n")


# ---------------------------------------------------------------- commands

def _solve_one(game, info, method, solver_cfg, rs):
    if method == "mc":
        return (solve_ara_mc if info == "ara" else solve_complete_mc)(game, solver_cfg, rs)
    if method == "aps":
        return (solve_ara_aps if info == "ara" else solve_complete_aps)(game, solver_cfg, rs)
    fn = solve_ara_gibbs if info == "ara" else solve_complete_gibbs
    return fn(game, None, rs=rs, **solver_cfg)


def _trace_rows(rep, trace):
    th = trace.theta if trace.theta is not None else [None] * len(trace)
    at = trace.attacks if trace.attacks is not None else [None] * len(trace)
    for i in range(len(trace)):
        s = trace.states[i]
        yield [rep, i + 1, s if np.ndim(s) == 0 else tuple(np.atleast_1d(s)), at[i], th[i],
               bool(trace.accepted[i]), int(trace.H[i]), trace.utility[i]]


def cmd_solve(cfg: RunConfig, game, info, solver_cfg, out: Path) -> dict:
    t0 = time.perf_counter()
    root = RandomSource(cfg.seed)
    sols = pmap(lambda r: _solve_one(game, info, cfg.method, solver_cfg, root.spawn(r)),
                range(cfg.reps), cfg.workers)
    wall = time.perf_counter() - t0
    D = game.defense_space
    reps, trace_rows, hist = [], [], Counter()
    for r, sol in enumerate(sols):
        if cfg.method == "mc":
            entry = {"optimal_decision": sol.optimal_defense, "draws": sol.draws,
                     "expected_utility": dict(zip(map(str, sol.defense_values), sol.expected_utility))}
            if sol.best_response is not None:
                entry["best_responses"] = {str(k): v for k, v in sol.best_response_map().items()}
            hist[sol.optimal_defense] += 1.0 / cfg.reps
        else:
            tr = sol.trace
            entry = {"optimal_decision": sol.optimal_decision, "mode_share": sol.share,
                     "acceptance_rate": tr.acceptance_rate, "draws": sol.draws}
            if sol.inner_acceptance:
                entry["inner_acceptance_mean"] = float(np.mean(sol.inner_acceptance))
            if sol.best_responses:
                entry["best_responses"] = {str(k): v for k, v in sol.best_responses.items()}
            for k, f in sol.histogram.items():
                hist[k] += f / cfg.reps
            trace_rows.extend(_trace_rows(r, tr))
        if getattr(sol, "attack_distribution", None) is not None or getattr(sol, "attack_tables", None) is not None:
            tab = sol.attack_distribution if cfg.method == "mc" else sol.attack_tables
            if tab is not None:
                entry["attack_distribution"] = {str(d): list(row) for d, row in zip(D.values(), tab)}
        reps.append(entry)
    decisions = [_num(e["optimal_decision"]) for e in reps]
    decisions = [tuple(x) if isinstance(x, list) else x for x in decisions]
    majority = Counter(decisions).most_common(1)[0][0]
    summary = {
        "command": "solve", "game": cfg.game, "method": cfg.method, "info": info, "seed": cfg.seed,
        "optimal_decision": majority, "agreement": decisions.count(majority) / len(decisions),
        "replications": reps, "samples": int(sum(e["draws"] for e in reps)),
        "config": cfg.model_dump(mode="json"),
    }
    if cfg.method != "mc":
        summary["mode_share"] = float(np.mean([e["mode_share"] for e in reps]))
        summary["acceptance_rate"] = float(np.mean([e["acceptance_rate"] for e in reps]))
        if cfg.reps >= 2 and D.is_discrete:
            chains = [np.asarray(D.codes, dtype=float)[s.trace.kept()] for s in sols]
            n = min(len(c) for c in chains)
            if n >= 10:
                summary["rhat"] = float(bgr_statistic([c[:n] for c in chains]))
    hist_rows = sorted(hist.items(), key=lambda kv: (str(type(kv[0])), kv[0]))
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "summary.json", summary)
    write_json(out / "timing.json", {"wall_time_s": wall, "per_rep_s": wall / cfg.reps})
    write_csv(out / "trace.csv", TRACE_COLUMNS, trace_rows)
    write_csv(out / "histogram.csv", HISTOGRAM_COLUMNS, hist_rows)
    if cfg.svg:
        (out / "histogram.svg").write_text(histogram_svg(dict(hist_rows), f"{cfg.game} {cfg.method}"),
                                           encoding="utf-8", newline="\n")
    return summary


def cmd_attack_dist(cfg: RunConfig, game, info, solver_cfg, out: Path) -> dict:
    if info != "ara":
        raise ConfigError("attack-dist needs an ARA game")
    D, A = game.defense_space, game.attack_space
    try:
        defenses = D.values() if cfg.defense is None else [D.value(D.state_of(cfg.defense))]
    except GameError as e:
        raise ConfigError(str(e)) from e
    t0 = time.perf_counter()
    root = RandomSource(cfg.seed)
    J = _setting(cfg, "J")

    def table(i_d):
        i, d = i_d
        rs = root.spawn(D.state_of(d))
        if cfg.method == "mc":
            return attack_distribution_mc(game, d, J, _setting(cfg, "Q"), rs)
        if cfg.method == "aps":
            return attack_distribution_aps(game, d, J, solver_cfg, rs)
        return attack_distribution_gibbs(game, d, J, solver_cfg["M"], solver_cfg["K"], rs,
                                         H_inner=solver_cfg["H_inner"])

    tabs = pmap(table, list(enumerate(defenses)), cfg.workers)
    wall = time.perf_counter() - t0
    rows = [[d, a, p] for d, tab in zip(defenses, tabs) for a, p in zip(A.values(), tab)]
    summary = {"command": "attack-dist", "game": cfg.game, "method": cfg.method, "seed": cfg.seed, "J": J,
               "argmax": {str(d): A.value(int(np.argmax(t))) for d, t in zip(defenses, tabs)},
               "table": {str(d): list(t) for d, t in zip(defenses, tabs)},
               "config": cfg.model_dump(mode="json")}
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "summary.json", summary)
    write_json(out / "timing.json", {"wall_time_s": wall})
    write_csv(out / "attack_dist.csv", ATTACK_COLUMNS, rows)
    return summary


def cmd_sensitivity(cfg: RunConfig, game, info, solver_cfg, out: Path) -> dict:
    key = _game_key(cfg.game)
    if key not in PERTURBATIONS:
        raise ConfigError(f"no perturbation classes registered for {cfg.game}; known: {sorted(PERTURBATIONS)}")
    util, prob = PERTURBATIONS[key]()
    proposed = cfg.proposed
    if proposed is None:
        proposed = brute_force_solve(game).optimal_defense
    elif not game.defense_space.contains(game.defense_space.state_of(proposed)):
        raise ConfigError(f"proposed defense {proposed} not in the defense space")
    scfg = None if cfg.solver == "exact" else solver_cfg
    if cfg.solver != cfg.method and cfg.solver != "exact":
        raise ConfigError("--solver must match --method (or be 'exact')")
    t0 = time.perf_counter()
    rep = sensitivity_analysis(game, proposed, util, prob, R=cfg.perturbations, threshold=cfg.threshold,
                               solver=cfg.solver, rs=cfg.seed, early_stop=cfg.early_stop,
                               solver_config=scfg, workers=cfg.workers)
    wall = time.perf_counter() - t0
    summary = {"command": "sensitivity", "game": cfg.game, "solver": cfg.solver, "seed": cfg.seed,
               "proposed": proposed, "threshold": cfg.threshold, "evaluated": rep.evaluated,
               "skipped": rep.skipped, "stopped_early": rep.stopped_early, "max_regret": rep.max_regret,
               "max_regret_fraction": rep.max_regret_fraction,
               "frequencies": {str(k): v for k, v in rep.frequencies.items()},
               "verdict": rep.verdict, "config": cfg.model_dump(mode="json")}
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "summary.json", summary)
    write_json(out / "timing.json", {"wall_time_s": wall})
    write_csv(out / "regret.csv", REGRET_COLUMNS,
              [[r.index, r.utility, r.probability, r.optimal_decision, r.regret, r.regret_fraction]
               for r in rep.records])
    return summary


def cmd_benchmark(cfg: RunConfig, out: Path) -> dict:
    if _game_key(cfg.game) != "resource":
        raise ConfigError("the benchmark runs on the resource game")
    if any(p <= 0 for p in cfg.precisions):
        raise ConfigError("precisions must be > 0")
    params = {**BENCHMARK_GAME_PARAMS, **cfg.params}
    try:
        for p in cfg.precisions:
            resource_game(p, **params)
    except (GameError, TypeError) as e:
        raise ConfigError(str(e)) from e
    bcfg = BenchmarkConfig(precisions=tuple(cfg.precisions), reps=cfg.reps if cfg.reps > 1 else 20,
                           target=cfg.target, seed=cfg.seed, reference_samples=cfg.reference_samples,
                           max_doublings=cfg.max_doublings, game_params=params, workers=cfg.workers)
    rows = run_benchmark(bcfg)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "benchmark.csv", BENCHMARK_COLUMNS, [r.as_dict() for r in rows])
    summary = {"command": "benchmark", "seed": cfg.seed, "rows": [r.as_dict() for r in rows],
               "config": cfg.model_dump(mode="json")}
    write_json(out / "summary.json", summary)
    return summary


def cmd_list_games() -> list[dict]:
    return list_games()


# ---------------------------------------------------------------- parsing

def _kv(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _power_arg(text: str):
    """``20`` for a fixed power or ``H_max[:H0[:tau[:step]]]`` for a ladder."""
    parts = text.split(":")
    try:
        nums = [int(p) if p else None for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad power {text!r}") from None
    if len(nums) == 1:
        return nums[0]
    keys = ("H_max", "H0", "tau", "step")
    return {k: v for k, v in zip(keys, nums) if v is not None}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apsgames", description="Solve defend-attack games by MC and APS.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--game")
    common.add_argument("--param", action="append", type=_kv, default=[], metavar="KEY=VALUE",
                        help="game parameter override (repeatable)")
    common.add_argument("--set", action="append", type=_kv, default=[], metavar="KEY=VALUE",
                        help="any RunConfig field, value parsed as JSON when possible (repeatable)")
    common.add_argument("--method", choices=("mc", "aps", "gibbs"))
    common.add_argument("--info", choices=("complete", "ara"))
    common.add_argument("--seed", type=int)
    common.add_argument("--reps", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--out")
    for k in ("P", "Q", "J", "N", "M", "K", "R"):
        common.add_argument(f"--{k}", type=int, dest=k)
    common.add_argument("--H-inner", type=_power_arg, dest="H_inner", metavar="H|H_max:H0:tau:step")
    common.add_argument("--H-outer", type=_power_arg, dest="H_outer", metavar="H|H_max:H0:tau:step")
    common.add_argument("--kernel-scale", type=float, dest="kernel_scale",
                        help="t-walk scale as a fraction of the box width (continuous spaces)")
    common.add_argument("--attack-kernel-width", type=int, dest="attack_kernel_width",
                        help="largest jump of the attacker's circular kernel (discrete attack spaces)")
    s = sub.add_parser("solve", parents=[common], help="solve a game")
    s.add_argument("--svg", action="store_true", default=None, help="also write histogram.svg")
    a = sub.add_parser("attack-dist", parents=[common], help="tabulate p(a | d)")
    a.add_argument("--defense", type=float)
    se = sub.add_parser("sensitivity", parents=[common], help="regret over attacker perturbations")
    se.add_argument("--perturbations", type=int)
    se.add_argument("--threshold", type=float)
    se.add_argument("--early-stop", action="store_true", default=None, dest="early_stop")
    se.add_argument("--proposed", type=float)
    se.add_argument("--solver", choices=("exact", "mc", "aps", "gibbs"))
    b = sub.add_parser("benchmark", parents=[common], help="MC versus APS scalability table")
    b.add_argument("--precisions", type=float, nargs="+")
    b.add_argument("--target", type=float)
    b.add_argument("--reference-samples", type=int, dest="reference_samples")
    b.add_argument("--max-doublings", type=int, dest="max_doublings")
    sub.add_parser("list-games", help="list the catalog")
    return p


def config_from_args(args) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    skip = {"command", "config", "param", "set"}
    for k, v in vars(args).items():
        if k not in skip and v is not None:
            data[k] = v
    for k, v in getattr(args, "set", []):
        try:
            data[k] = json.loads(v)
        except json.JSONDecodeError:
            data[k] = v
    if getattr(args, "param", None):
        params = dict(data.get("params", {}))
        for k, v in args.param:
            try:
                params[k] = float(v)
            except ValueError:
                raise ConfigError(f"game parameter {k} must be numeric") from None
        data["params"] = params
    if args.command == "benchmark":
        data.setdefault("game", "resource")
        data.setdefault("method", "mc")
    try:
        return RunConfig(**data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    if args.command == "list-games":
        print(json.dumps(_jsonable(cmd_list_games()), indent=2))
        return EXIT_OK
    try:
        cfg = config_from_args(args)
        out = Path(cfg.out)
        if args.command == "benchmark":
            cmd_benchmark(cfg, out)
            print(f"wrote {out / 'benchmark.csv'}")
            return EXIT_OK
        game, info, solver_cfg = _prepare(cfg)
        cmd = {"solve": cmd_solve, "attack-dist": cmd_attack_dist, "sensitivity": cmd_sensitivity}[args.command]
        summary = cmd(cfg, game, info, solver_cfg, out)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (GameError, CapabilityError) as e:
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    key = "optimal_decision" if "optimal_decision" in summary else "verdict" if "verdict" in summary else "argmax"
    print(json.dumps(_jsonable({key: summary[key]})))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

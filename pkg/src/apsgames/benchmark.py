"""Scalability benchmark of Monte Carlo against APS on a gridded game.

For every grid precision a large Monte Carlo run fixes the reference
optimum. Each method then doubles its sample size until at least
``target`` of ``reps`` seeded replications return the reference optimum,
and the per-replication wall time at that size is reported.

Monte Carlo doubles ``P = Q = n``. APS doubles the outer chain length
``N`` with the inner length ``M`` fixed; its powers scale with the grid
(``H = power_unit / precision``), both chains anneal from a tenth of the
power up to the full power over the first half of the chain, and the
circular kernels jump up to ``0.1 / precision`` grid steps.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .aps import AnnealSchedule, ApsConfig, solve_complete_aps
from .catalog import resource_game
from .mc import McConfig, solve_complete_mc
from .parallel import pmap
from .proposals import CircularNeighbor
from .rng import RandomSource

__all__ = ["BenchmarkConfig", "BenchmarkRow", "reference_optimum", "aps_benchmark_config",
           "run_benchmark", "BENCHMARK_COLUMNS", "BENCHMARK_GAME_PARAMS"]

log = logging.getLogger(__name__)

BENCHMARK_COLUMNS = ("precision", "grid_size", "method", "outer_samples", "inner_samples", "outer_power",
                     "inner_power", "wall_time_s", "agreement", "reference", "flagged")

# Nearly risk-neutral agents: with the catalog defaults (h = k = 0.5) the
# log-utility noise per outcome copy swamps the gap between neighbouring
# grid points and powered chains stop mixing.
BENCHMARK_GAME_PARAMS = {"h": 0.005, "k": 0.005}


@dataclass(frozen=True)
class BenchmarkConfig:
    precisions: tuple = (0.1, 0.01)
    reps: int = 20
    target: float = 0.9
    seed: int = 0
    reference_samples: int = 16_384
    mc_start: int = 8
    aps_start: int = 32
    aps_inner: int = 200
    outer_power_unit: float = 200.0
    inner_power_unit: float = 100.0
    max_doublings: int = 12
    game_params: dict = field(default_factory=lambda: dict(BENCHMARK_GAME_PARAMS))
    workers: int = 1


@dataclass
class BenchmarkRow:
    precision: float
    grid_size: int
    method: str
    outer_samples: int | None
    inner_samples: int | None
    outer_power: int | None
    inner_power: int | None
    wall_time_s: float | None
    agreement: float
    reference: float
    flagged: bool = False

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in BENCHMARK_COLUMNS}


def reference_optimum(precision: float, samples: int, seed: int = 0, game_params=None):
    """Large-sample MC optimum on the lattice; ``stable`` when two seeds agree."""
    game = resource_game(precision, **(game_params or {}))
    cfg = McConfig(P=samples, Q=samples)
    a = solve_complete_mc(game, cfg, RandomSource(seed, (10**6, 1)))
    b = solve_complete_mc(game, cfg, RandomSource(seed, (10**6, 2)))
    return a.optimal_defense, a.optimal_defense == b.optimal_defense


def _ladder(H: int, length: int) -> AnnealSchedule:
    tenth = max(1, H // 10)
    return AnnealSchedule.ladder(H, H0=tenth, tau=max(1, length // 20), step=tenth)


def aps_benchmark_config(game, N: int, precision: float, cfg: BenchmarkConfig) -> ApsConfig:
    """APS settings used by the benchmark at outer length ``N``."""
    H_out = max(1, round(cfg.outer_power_unit / precision))
    H_in = max(1, round(cfg.inner_power_unit / precision))
    width = max(1, round(0.1 / precision))
    M = cfg.aps_inner
    return ApsConfig(N=N, M=M, H_outer=_ladder(H_out, N), H_inner=_ladder(H_in, M),
                     g_D=CircularNeighbor(game.defense_space, min(width, game.defense_space.size // 2 or 1)),
                     g_A=CircularNeighbor(game.attack_space, min(width, game.attack_space.size // 2 or 1)),
                     validation_probes=0)


def _grow(run, ref, cfg: BenchmarkConfig, start: int, tag: int):
    """Double ``n`` until the agreement target is met; return (n, wall per rep, agreement)."""
    n = start
    agreement = 0.0
    for step in range(cfg.max_doublings + 1):
        seeds = [RandomSource(cfg.seed, (tag, step, r)) for r in range(cfg.reps)]
        t0 = time.perf_counter()
        found = pmap(lambda rs: run(n, rs), seeds, cfg.workers)
        wall = (time.perf_counter() - t0) / cfg.reps
        agreement = float(np.mean([f == ref for f in found]))
        log.info("tag %d n=%d agreement=%.2f wall=%.3fs", tag, n, agreement, wall)
        if agreement >= cfg.target:
            return n, wall, agreement
        n *= 2
    return None, None, agreement


def run_benchmark(cfg: BenchmarkConfig = BenchmarkConfig()) -> list[BenchmarkRow]:
    """Minimal sample sizes and per-replication wall times reaching the agreement target.

    Rows whose reference did not stabilise, or whose method never reached
    the target within ``max_doublings``, are flagged.
    """
    rows = []
    for k, p in enumerate(cfg.precisions):
        game = resource_game(p, **cfg.game_params)
        size = game.defense_space.size
        ref, stable = reference_optimum(p, cfg.reference_samples, cfg.seed, cfg.game_params)

        def mc_run(n, rs):
            return solve_complete_mc(game, McConfig(P=n, Q=n), rs).optimal_defense

        def aps_run(n, rs):
            return solve_complete_aps(game, aps_benchmark_config(game, n, p, cfg), rs).optimal_decision

        n, wall, agr = _grow(mc_run, ref, cfg, cfg.mc_start, 2 * k)
        rows.append(BenchmarkRow(p, size, "mc", n, n, None, None, wall, agr, ref, n is None or not stable))
        n, wall, agr = _grow(aps_run, ref, cfg, cfg.aps_start, 2 * k + 1)
        probe = aps_benchmark_config(game, n or cfg.aps_start, p, cfg)
        rows.append(BenchmarkRow(p, size, "aps", n, probe.M, probe.H_outer.H_max, probe.H_inner.H_max,
                                 wall, agr, ref, n is None or not stable))
    return rows

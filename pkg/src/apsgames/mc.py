"""Monte Carlo solvers for complete-information and ARA games.

Every defense is processed on its own substream ``rs.spawn(i)`` so the
result does not depend on the order (or concurrency) of the per-defense
loops. Draw counts of the substreams are folded back into ``rs.draws``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .game import AraGame, CompleteInfoGame, DecisionSpace, GameError
from .parallel import pmap
from .rng import RandomSource, as_source

__all__ = [
    "McConfig",
    "McSolution",
    "argmax_by_code",
    "estimate_attacker_eu",
    "solve_complete_mc",
    "attack_distribution_mc",
    "solve_ara_mc",
    "estimate_sample_size",
]


@dataclass(frozen=True)
class McConfig:
    P: int = 10_000
    Q: int = 10_000
    J: int = 1_000

    def __post_init__(self):
        for k in ("P", "Q", "J"):
            if getattr(self, k) < 1:
                raise GameError(f"{k} must be >= 1")


@dataclass
class McSolution:
    """Result of a Monte Carlo solve.

    ``expected_utility[i]`` is the defender estimate at defense state
    ``i``. Complete-information solves fill ``attacker_utility`` and
    ``best_response`` (attack states); ARA solves fill
    ``attack_distribution`` with one row per defense.
    """

    optimal_state: int
    optimal_defense: object
    expected_utility: np.ndarray
    defense_values: list
    attack_values: list
    best_response: np.ndarray | None = None
    attacker_utility: np.ndarray | None = None
    attack_distribution: np.ndarray | None = None
    seed: int = 0
    draws: int = 0
    meta: dict = field(default_factory=dict)

    def best_response_map(self) -> dict:
        if self.best_response is None:
            return {}
        return {d: self.attack_values[a] for d, a in zip(self.defense_values, self.best_response)}


def argmax_by_code(values, codes) -> int:
    """Index of the largest value; exact ties go to the smallest code."""
    v = np.asarray(values, dtype=float)
    top = np.flatnonzero(v == v.max())
    return int(top[np.argmin(np.asarray(codes, dtype=float)[top])])


def _require_discrete(*spaces: DecisionSpace):
    for sp in spaces:
        if not sp.is_discrete:
            raise GameError("Monte Carlo solvers need discrete decision spaces; "
                            "discretise continuous boxes first (catalog.grid_discretize)")


def estimate_attacker_eu(game, d, a, Q: int, rs: RandomSource, u_A=None, p_A=None) -> float:
    """Mean attacker utility over ``Q`` outcome draws at decision values ``(d, a)``."""
    u_A = game.u_A if u_A is None else u_A
    p_A = game.p_A if p_A is None else p_A
    th = p_A.sample(d, a, rs, Q)
    return float(np.mean(u_A(a, th)))


def _best_attack(game, d, Q, rs, u_A=None, p_A=None):
    A = game.attack_space
    psi = np.array([estimate_attacker_eu(game, d, a, Q, rs, u_A, p_A) for a in A.values()])
    return argmax_by_code(psi, A.codes), psi


def solve_complete_mc(game: CompleteInfoGame, cfg: McConfig = McConfig(),
                      rs: RandomSource | int | None = None, workers: int = 1) -> McSolution:
    """Backward induction by Monte Carlo: inner argmax over attacks, outer over defenses."""
    rs = as_source(rs)
    D, A = game.defense_space, game.attack_space
    _require_discrete(D, A)

    def per_defense(i):
        sub = rs.spawn(i)
        d = D.value(i)
        a_star, psi_a = _best_attack(game, d, cfg.Q, sub)
        th = game.p_D.sample(d, A.value(a_star), sub, cfg.P)
        return a_star, psi_a, float(np.mean(game.u_D(d, th))), sub.draws

    out = pmap(per_defense, range(D.size), workers)
    br = np.array([o[0] for o in out])
    psi_A = np.array([o[1] for o in out])
    psi_D = np.array([o[2] for o in out])
    rs.count(sum(o[3] for o in out))
    best = argmax_by_code(psi_D, D.codes)
    return McSolution(best, D.value(best), psi_D, D.values(), A.values(), best_response=br,
                      attacker_utility=psi_A, seed=rs.seed, draws=rs.draws)


def _attack_table(game: AraGame, d, J, Q, sub) -> np.ndarray:
    A = game.attack_space
    counts = np.zeros(A.size)
    for _ in range(J):
        u_A, p_A = game.attacker_model.draw(sub)
        a_star, _ = _best_attack(game, d, Q, sub, u_A, p_A)
        counts[a_star] += 1
    return counts / J


def attack_distribution_mc(game: AraGame, d, J: int, Q: int,
                           rs: RandomSource | int | None = None) -> np.ndarray:
    """Frequency table of attacker best responses at defense value ``d`` over ``J`` model draws."""
    rs = as_source(rs)
    _require_discrete(game.attack_space)
    if J < 1 or Q < 1:
        raise GameError("J and Q must be >= 1")
    return _attack_table(game, d, J, Q, rs)


def _defender_eu_ara(game: AraGame, d, table, P, sub) -> float:
    A = game.attack_space
    sub.count(P)
    attacks = sub.generator.choice(A.size, size=P, p=table)
    n_a = np.bincount(attacks, minlength=A.size)
    total = 0.0
    for j in np.flatnonzero(n_a):
        th = game.p_D.sample(d, A.value(j), sub, int(n_a[j]))
        total += float(np.sum(game.u_D(d, th)))
    return total / P


def solve_ara_mc(game: AraGame, cfg: McConfig = McConfig(),
                 rs: RandomSource | int | None = None, workers: int = 1) -> McSolution:
    """ARA solution: tabulate attack forecasts by MC, then maximise defender utility."""
    rs = as_source(rs)
    D, A = game.defense_space, game.attack_space
    _require_discrete(D, A)

    def per_defense(i):
        sub = rs.spawn(i)
        d = D.value(i)
        table = _attack_table(game, d, cfg.J, cfg.Q, sub)
        return table, _defender_eu_ara(game, d, table, cfg.P, sub), sub.draws

    out = pmap(per_defense, range(D.size), workers)
    tables = np.array([o[0] for o in out])
    psi_D = np.array([o[1] for o in out])
    rs.count(sum(o[2] for o in out))
    best = argmax_by_code(psi_D, D.codes)
    return McSolution(best, D.value(best), psi_D, D.values(), A.values(),
                      attack_distribution=tables, seed=rs.seed, draws=rs.draws)


def estimate_sample_size(pilot_variances, precision: float, z: float = 1.96) -> int:
    """Monte Carlo size ``ceil(z^2 max(var) / precision^2)`` from pilot variances."""
    v = list(pilot_variances)
    if not v:
        raise GameError("need at least one pilot variance")
    if precision <= 0 or z <= 0:
        raise GameError("precision and z must be > 0")
    n = z * z * max(v) / (precision * precision)
    # guard against ceil(38416.000000001)
    return max(1, math.ceil(round(n, 9)))

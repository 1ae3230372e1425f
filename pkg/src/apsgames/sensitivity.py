"""Robustness of a proposed defense to perturbations of the attacker model.

Each perturbation replaces the attacker's ``(u_A, p_A)`` by a draw from
the given classes. The attacker's best responses are recomputed under the
perturbation, while both expected utilities in the regret are evaluated
with the defender's own nominal ``(u_D, p_D)``:

``r = psi_D(d*, a*_up(d*)) - psi_D(d*_up, a*_up(d*_up))``

which is signed (non-positive up to estimation error); the verdict
thresholds ``|r|``. Regret fractions divide ``|r|`` by
``|psi_D(d*, a*_up(d*))|`` on the native scale, i.e. after removing the
defender utility's positive shift.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .aps import ApsConfig, inner_aps_attack, solve_complete_aps
from .catalog.oracle import CapabilityError, brute_force_solve, expected_utility_tables
from .game import CompleteInfoGame, GameError
from .gibbs import solve_complete_gibbs
from .mc import McConfig, solve_complete_mc
from .parallel import pmap
from .rng import RandomSource, as_source

__all__ = ["PerturbationRecord", "RegretReport", "sensitivity_analysis", "SOLVERS"]

SOLVERS = ("exact", "mc", "aps", "gibbs")


@dataclass
class PerturbationRecord:
    index: int
    utility: str
    probability: str
    optimal_decision: object
    regret: float
    regret_fraction: float


@dataclass
class RegretReport:
    """Outcome of a sensitivity sweep.

    ``frequencies`` maps each decision to the share of evaluated
    perturbations under which it was optimal.
    """

    proposed: object
    threshold: float
    records: list = field(default_factory=list)
    skipped: int = 0
    stopped_early: bool = False

    @property
    def evaluated(self) -> int:
        return len(self.records)

    @property
    def regrets(self) -> np.ndarray:
        return np.array([r.regret for r in self.records])

    @property
    def max_regret(self) -> float:
        return float(np.max(np.abs(self.regrets))) if self.records else 0.0

    @property
    def max_regret_fraction(self) -> float:
        return max((abs(r.regret_fraction) for r in self.records), default=0.0)

    @property
    def frequencies(self) -> dict:
        if not self.records:
            return {}
        vals, counts = np.unique([r.optimal_decision for r in self.records], return_counts=True)
        return {v.item(): c / len(self.records) for v, c in zip(vals, counts)}

    @property
    def verdict(self) -> str:
        return "robust" if self.max_regret <= self.threshold and not self.stopped_early else "not satisfied"


class _Evaluator:
    """Expected defender utility at (defense state, attack state) for the nominal defender."""

    def __init__(self, game, P, rs):
        self.game, self.P, self.rs = game, P, rs
        self.table = None
        try:
            self.table = expected_utility_tables(game.u_D, game.p_D, game.defense_space,
                                                 game.attack_space, "defender")
        except (CapabilityError, GameError):
            pass

    def __call__(self, i, j, sub):
        if self.table is not None:
            return float(self.table[i, j])
        D, A = self.game.defense_space, self.game.attack_space
        th = self.game.p_D.sample(D.value(i), A.value(j), sub, self.P)
        return float(np.mean(self.game.u_D(D.value(i), th)))


def _perturbed_responses(pert: CompleteInfoGame, d_star, solver, cfg, sub):
    """Return (d*_up state, a*_up(d*_up) state, a*_up(d*) state, psi estimates or None)."""
    D, A = pert.defense_space, pert.attack_space
    if solver == "exact":
        sol = brute_force_solve(pert)
        return sol.optimal_state, sol.best_response[sol.optimal_state], sol.best_response[d_star], None
    if solver == "mc":
        sol = solve_complete_mc(pert, cfg or McConfig(), sub)
        psi = sol.expected_utility
        return sol.optimal_state, sol.best_response[sol.optimal_state], sol.best_response[d_star], psi
    if solver == "gibbs":
        opts = dict(cfg or {})
        sol = solve_complete_gibbs(pert, None, rs=sub, **opts)
        br = sol.best_responses
        return (sol.optimal_state, A.state_of(br[sol.optimal_decision]), A.state_of(br[D.value(d_star)]), None)
    cfg = cfg or ApsConfig()
    sol = solve_complete_aps(pert, cfg, sub)
    br = sol.best_responses
    a_opt = A.state_of(br[sol.optimal_decision])
    dv = D.value(d_star)
    if dv in br:
        a_prop = A.state_of(br[dv])
    else:
        a_prop = A.state_of(inner_aps_attack(pert, dv, cfg, sub)[0])
    return sol.optimal_state, a_opt, a_prop, None


def sensitivity_analysis(game, d_star, utility_sampler, probability_sampler, R: int = 1_000,
                         threshold: float = 0.0, solver: str = "exact", rs: RandomSource | int | None = None,
                         *, early_stop: bool = False, solver_config=None, P: int = 10_000,
                         workers: int = 1) -> RegretReport:
    """Regret of ``d_star`` over ``R`` perturbations of the attacker model.

    Parameters
    ----------
    game : CompleteInfoGame or AraGame
        Supplies the defense/attack spaces and the defender's nominal
        ``(u_D, p_D)``.
    d_star : decision value
        The proposed defense.
    utility_sampler, probability_sampler : callable
        ``sampler(generator)`` returning a perturbed attacker utility and
        outcome model.
    solver : {"exact", "mc", "aps", "gibbs"}
        Method used to recompute the perturbed solution. ``solver_config``
        is the matching config (McConfig, ApsConfig or Gibbs keyword dict).
    early_stop : bool
        Stop at the first perturbation whose ``|regret| > threshold``.
    P : int
        Monte Carlo size for defender utilities when the defender outcome
        model cannot be enumerated.

    Perturbation ``r`` uses substream ``rs.spawn(r)``. Perturbations that
    yield invalid utilities are skipped and counted (with a warning).
    """
    if solver not in SOLVERS:
        raise GameError(f"solver must be one of {SOLVERS}")
    if R < 1:
        raise GameError("R must be >= 1")
    rs = as_source(rs)
    D, A = game.defense_space, game.attack_space
    if not (D.is_discrete and A.is_discrete):
        raise GameError("sensitivity analysis needs finite decision spaces")
    i_star = D.state_of(d_star)
    evaluate = _Evaluator(game, P, rs.spawn(2**31 - 2))
    offset = game.u_D.offset

    def one(r):
        sub = rs.spawn(r)
        gen = sub.generator
        u_A, p_A = utility_sampler(gen), probability_sampler(gen)
        pert = CompleteInfoGame(D, A, game.u_D, u_A, game.p_D, p_A, name=f"{game.name}-perturbed")
        try:
            d_up, a_up, a_prop, psi = _perturbed_responses(pert, i_star, solver, solver_config, sub)
        except GameError:
            return None
        if psi is not None and evaluate.table is None:
            v_prop, v_up = float(psi[i_star]), float(psi[d_up])
        else:
            v_prop, v_up = evaluate(i_star, a_prop, sub), evaluate(d_up, a_up, sub)
        if not (np.isfinite(v_prop) and np.isfinite(v_up)):
            return None
        regret = v_prop - v_up
        native = v_prop - offset
        frac = abs(regret) / abs(native) if native != 0 else (0.0 if regret == 0 else np.inf)
        return PerturbationRecord(r, u_A.label, p_A.label, D.value(d_up), regret, frac)

    report = RegretReport(proposed=d_star, threshold=threshold)
    if early_stop:
        results = []
        for r in range(R):
            rec = one(r)
            results.append(rec)
            if rec is not None and abs(rec.regret) > threshold:
                report.stopped_early = r < R - 1
                break
    else:
        results = pmap(one, range(R), workers)
    report.records = [x for x in results if x is not None]
    report.skipped = sum(x is None for x in results)
    if report.skipped:
        warnings.warn(f"{report.skipped} perturbation(s) skipped: invalid utilities or models", RuntimeWarning)
    return report

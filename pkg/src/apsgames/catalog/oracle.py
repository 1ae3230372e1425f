"""Exact solutions of finite games by full enumeration, and grid discretisation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..game import AraGame, CompleteInfoGame, DecisionSpace, GameError
from ..mc import argmax_by_code

__all__ = ["CapabilityError", "ExactSolution", "expected_utility_tables", "brute_force_solve",
           "grid_discretize", "power_marginal"]


class CapabilityError(GameError):
    """The game lacks a component the requested method needs."""


@dataclass
class ExactSolution:
    optimal_state: int
    optimal_defense: object
    defender_eu: np.ndarray
    defender_eu_table: np.ndarray
    best_response: np.ndarray | None = None
    attacker_eu: np.ndarray | None = None
    attack_distribution: np.ndarray | None = None

    def best_response_map(self, game) -> dict:
        D, A = game.defense_space, game.attack_space
        return {D.value(i): A.value(a) for i, a in enumerate(self.best_response)}


def _require_finite(game):
    D, A = game.defense_space, game.attack_space
    if not (D.is_discrete and A.is_discrete):
        raise CapabilityError("brute force needs finite decision spaces")
    if not game.p_D.exact:
        raise CapabilityError("brute force needs an exact defender outcome evaluator")


def expected_utility_tables(u, model, space_d: DecisionSpace, space_a: DecisionSpace, who: str):
    """``psi[i, j] = sum_theta u(x, theta) p(theta | d_i, a_j)``, x the agent's own decision."""
    if not model.exact:
        raise CapabilityError(f"no exact outcome evaluator for the {who}")
    psi = np.empty((space_d.size, space_a.size))
    for i, d in enumerate(space_d.values()):
        for j, a in enumerate(space_a.values()):
            th, p = model.enumerate(d, a)
            psi[i, j] = float(np.sum(u(d if who == "defender" else a, th) * p))
    return psi


def _best_responses(psi_A, A):
    return np.array([argmax_by_code(row, A.codes) for row in psi_A])


def brute_force_solve(game) -> ExactSolution:
    """Exact backward induction (complete information) or exact ARA solution.

    ARA games need an attacker model with ``finite_atoms``.
    """
    _require_finite(game)
    D, A = game.defense_space, game.attack_space
    psi_D_table = expected_utility_tables(game.u_D, game.p_D, D, A, "defender")
    if isinstance(game, CompleteInfoGame):
        psi_A = expected_utility_tables(game.u_A, game.p_A, D, A, "attacker")
        br = _best_responses(psi_A, A)
        psi_D = psi_D_table[np.arange(D.size), br]
        best = argmax_by_code(psi_D, D.codes)
        return ExactSolution(best, D.value(best), psi_D, psi_D_table, br, psi_A)
    if not isinstance(game, AraGame) or game.attacker_model.finite_atoms is None:
        raise CapabilityError("exact ARA needs a finitely supported attacker model")
    dist = np.zeros((D.size, A.size))
    for (u_A, p_A), w in game.attacker_model.finite_atoms:
        br = _best_responses(expected_utility_tables(u_A, p_A, D, A, "attacker"), A)
        dist[np.arange(D.size), br] += w
    psi_D = np.sum(dist * psi_D_table, axis=1)
    best = argmax_by_code(psi_D, D.codes)
    return ExactSolution(best, D.value(best), psi_D, psi_D_table, attack_distribution=dist)


def power_marginal(psi, H: int = 1) -> np.ndarray:
    """Normalised ``psi**H`` (computed in log space)."""
    lp = H * np.log(np.asarray(psi, dtype=float))
    w = np.exp(lp - lp.max())
    return w / w.sum()


def grid_discretize(space: DecisionSpace, precision: float) -> DecisionSpace:
    """Lattice of step ``precision`` over a box, endpoints included."""
    if space.is_discrete:
        raise GameError("space is already discrete")
    width = space.upper - space.lower
    steps = width / precision
    n = np.rint(steps)
    if np.any(np.abs(steps - n) > 1e-12 * np.maximum(1.0, n)) or np.any(n < 1):
        raise GameError(f"precision {precision} does not divide the box evenly")
    axes = [np.round(lo + precision * np.arange(int(k) + 1), 12) for lo, k in zip(space.lower, n)]
    if len(axes) == 1:
        return DecisionSpace.discrete(axes[0].tolist())
    labels = list(itertools.product(*[ax.tolist() for ax in axes]))
    return DecisionSpace.discrete(labels, codes=np.arange(len(labels)))

"""Continuous resource-allocation game used for the scalability benchmark.

Both agents invest a proportion of resources in [0, 1]; the defender's
loss proportion is ``theta ~ Beta(alpha(d, a), beta(d, a))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..game import CompleteInfoGame, DecisionSpace, OutcomeModel, Support, UtilityFunction
from .oracle import grid_discretize


def alpha_of(d, a):
    return np.exp(1.0 + np.asarray(a) - np.asarray(d))


def beta_of(d, a):
    return np.exp(1.0 + np.asarray(d) - np.asarray(a))


@dataclass(frozen=True)
class ResourceParams:
    s: float = 10.0   # server value
    c: float = 1.0    # defender unit cost
    e: float = 1.0    # attacker unit cost
    h: float = 0.5    # defender risk aversion
    k: float = 0.5    # attacker risk proneness


def loss_model() -> OutcomeModel:
    def sampler(d, a, gen, size):
        return gen.beta(alpha_of(d, a), beta_of(d, a), size)

    return OutcomeModel(sampler, Support.box(0.0, 1.0))


def resource_game(precision: float | None = None, **params) -> CompleteInfoGame:
    """Build the game on the unit boxes, or on a lattice of step ``precision``."""
    p = ResourceParams(**params)
    shift = np.exp(p.h * p.c)    # worst payoff is f = -c

    def u_D(d, th):
        f = (1.0 - np.asarray(th)) * p.s - p.c * d
        return 1.0 + shift - np.exp(-p.h * f)

    def u_A(a, th):
        g = np.asarray(th) * p.s - p.e * a
        return np.exp(p.k * g)

    box = DecisionSpace.box(0.0, 1.0)
    space = box if precision is None else grid_discretize(box, precision)
    model = loss_model()
    name = "resource" if precision is None else f"resource-grid-{precision:g}"
    return CompleteInfoGame(space, space, UtilityFunction(u_D, offset=shift), UtilityFunction(u_A),
                            model, model, name=name)


def check_monotonicity(n: int = 21) -> bool:
    """alpha increasing in a and decreasing in d, beta the reverse, on an n x n grid."""
    g = np.linspace(0.0, 1.0, n)
    D, A = np.meshgrid(g, g, indexing="ij")
    al, be = alpha_of(D, A), beta_of(D, A)
    return bool(np.all(np.diff(al, axis=1) > 0) and np.all(np.diff(al, axis=0) < 0)
                and np.all(np.diff(be, axis=1) < 0) and np.all(np.diff(be, axis=0) > 0))

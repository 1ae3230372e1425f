"""Shared fixtures: a 3-defense x 2-attack x 2-outcome game with exact evaluators."""

import numpy as np
import pytest

from apsgames import (AraGame, CompleteInfoGame, DecisionSpace, OutcomeModel, RandomAttackerModel,
                      Support, UtilityFunction)

# P(theta = 1 | d, a)
BREACH = np.array([[0.2, 0.7], [0.3, 0.2], [0.1, 0.6]])
DEF_BASE = np.array([3.0, 2.5, 2.0])


def breach_model(table=BREACH) -> OutcomeModel:
    table = np.asarray(table, dtype=float)

    def sampler(d, a, gen, size):
        return (gen.random(size) < table[int(d), int(a)]).astype(np.int64)

    def prob(d, a, th):
        p = table[int(d), int(a)]
        return np.where(np.asarray(th) == 1, p, 1.0 - p)

    return OutcomeModel(sampler, Support.discrete((0, 1)), prob)


def defender_u(scale=1.0, shift=0.0) -> UtilityFunction:
    return UtilityFunction(lambda d, th: scale * (DEF_BASE[int(d)] - 1.5 * np.asarray(th)) + shift)


def attacker_u(gain=2.0) -> UtilityFunction:
    # not attacking is worth 1; attacking pays 0.5 on failure and 0.5 + gain on success
    return UtilityFunction(lambda a, th: 1.0 + int(a) * (gain * np.asarray(th, dtype=float) - 0.5))


def make_small_game(**kw) -> CompleteInfoGame:
    model = breach_model()
    return CompleteInfoGame(DecisionSpace.discrete([0, 1, 2]), DecisionSpace.discrete([0, 1]),
                            kw.get("u_D", defender_u()), kw.get("u_A", attacker_u()), model, model,
                            name="small")


def make_small_ara(atoms=((2.0, 0.5), (0.5, 0.5))) -> AraGame:
    """Finite attacker model: each atom is (gain, weight)."""
    model = breach_model()
    pairs = tuple(((attacker_u(g), model), w) for g, w in atoms)

    def sampler(gen):
        i = gen.choice(len(pairs), p=[w for _, w in pairs])
        return pairs[i][0]

    return AraGame(DecisionSpace.discrete([0, 1, 2]), DecisionSpace.discrete([0, 1]), defender_u(), model,
                   RandomAttackerModel(sampler, finite_atoms=pairs), name="small-ara")


@pytest.fixture
def small_game():
    return make_small_game()


@pytest.fixture
def small_ara():
    return make_small_ara()


def chi2_pvalue(states, probs, thin: int = 1) -> float:
    """Goodness-of-fit p-value of thinned chain states against ``probs``."""
    from scipy.stats import chisquare

    s = np.asarray(states)[::thin]
    counts = np.bincount(s, minlength=len(probs))
    return float(chisquare(counts, np.asarray(probs) * len(s)).pvalue)

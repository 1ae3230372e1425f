"""Ten-level cyber protection toy game (binary attack, binary outcome)."""

from __future__ import annotations

import numpy as np

from ..distributions import beta_from_mean_variance
from ..game import (AraGame, CompleteInfoGame, DecisionSpace, OutcomeModel,
                    RandomAttackerModel, Support, UtilityFunction)

# defender net cost (Meuro) when the attack fails; success adds the 7 Meuro valuation
DEFENSE_COST = np.array([0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50])
BREACH_COST = 7.0
SUCCESS_PROB = np.array([0.50, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05, 0.01])
# attacker net benefit by outcome when attacking (not attacking is worth 0)
ATTACK_BENEFIT = {0: -0.53, 1: 1.97}
BETA_PARAMS = np.array([
    [50.0, 50.0], [40.0, 60.0], [35.0, 65.0], [30.0, 70.0], [25.0, 75.0],
    [20.0, 80.0], [15.0, 85.0], [10.0, 90.0], [5.0, 95.0], [1.0, 99.0],
])
DEFENDER_RISK = 0.4
# exp(0.4 * 7.5) ~ 20.09 is the largest native disutility
DEFENDER_SHIFT = 21.0


def defender_cost(d, theta):
    return DEFENSE_COST[int(d)] + BREACH_COST * np.asarray(theta)


def attacker_benefit(a, theta):
    theta = np.asarray(theta)
    if int(a) == 0:
        return np.zeros(theta.shape)
    return np.where(theta == 1, ATTACK_BENEFIT[1], ATTACK_BENEFIT[0])


def defender_utility(risk=DEFENDER_RISK, shift=DEFENDER_SHIFT) -> UtilityFunction:
    return UtilityFunction(lambda d, th: shift - np.exp(risk * defender_cost(d, th)),
                           positive=True, offset=shift)


def attacker_utility(e: float = 1.0) -> UtilityFunction:
    return UtilityFunction(lambda a, th: np.exp(e * attacker_benefit(a, th)), positive=True,
                           label=f"e={e:.6g}")


def _support(d, a):
    return Support.discrete((0,) if int(a) == 0 else (0, 1))


def success_model(probs, label: str = "") -> OutcomeModel:
    """Binary outcome: success with ``probs[d]`` under attack, never without."""
    probs = np.asarray(probs, dtype=float)

    def sampler(d, a, gen, size):
        if int(a) == 0:
            return np.zeros(size, dtype=np.int64)
        return (gen.random(size) < probs[int(d)]).astype(np.int64)

    def prob(d, a, theta):
        theta = np.asarray(theta)
        if int(a) == 0:
            return (theta == 0).astype(float)
        p = probs[int(d)]
        return np.where(theta == 1, p, 1.0 - p)

    return OutcomeModel(sampler, _support, prob, label=label)


def toy_cyber_game(e: float = 1.0, shift: float = DEFENDER_SHIFT) -> CompleteInfoGame:
    """Complete-information version: the attacker shares the defender's success table."""
    model = success_model(SUCCESS_PROB)
    return CompleteInfoGame(
        defense_space=DecisionSpace.discrete(range(10)),
        attack_space=DecisionSpace.discrete([0, 1]),
        u_D=defender_utility(shift=shift),
        u_A=attacker_utility(e),
        p_D=model,
        p_A=model,
        name="toy-cyber",
    )


def toy_attacker_model(beta_scale: float = 1.0, e_low: float = 0.0, e_high: float = 2.0) -> RandomAttackerModel:
    """Random attacker: ``e ~ U(e_low, e_high)`` and Beta success probabilities per defense.

    ``beta_scale`` multiplies both Beta parameters (0.01 gives the
    high-uncertainty variant).
    """
    ab = BETA_PARAMS * beta_scale

    def sampler(gen):
        e = gen.uniform(e_low, e_high)
        probs = gen.beta(ab[:, 0], ab[:, 1])
        return attacker_utility(e), success_model(probs)

    return RandomAttackerModel(sampler)


def toy_cyber_ara_game(beta_scale: float = 1.0, shift: float = DEFENDER_SHIFT) -> AraGame:
    base = toy_cyber_game(shift=shift)
    return AraGame(base.defense_space, base.attack_space, base.u_D, base.p_D,
                   toy_attacker_model(beta_scale), name="toy-cyber-ara")


def build_toy_perturbation_classes(e_low: float = 0.0, e_high: float = 2.0, var_fraction: float = 1e-3):
    """Samplers over attacker utilities and success models around the nominal game.

    Returns ``(utility_sampler, probability_sampler)``; each takes a numpy
    generator. Utilities are ``exp(e' c_A)`` with ``e' ~ U(e_low, e_high)``;
    success probabilities are Beta with the nominal mean and variance
    ``var_fraction * mean`` per defense.
    """
    laws = [beta_from_mean_variance(m, var_fraction * m) for m in SUCCESS_PROB]
    alphas = np.array([b.alpha for b in laws])
    betas = np.array([b.beta for b in laws])

    def utility_sampler(gen):
        return attacker_utility(gen.uniform(e_low, e_high))

    def probability_sampler(gen):
        probs = gen.beta(alphas, betas)
        return success_model(probs, label="p=" + "/".join(f"{x:.4g}" for x in probs))

    return utility_sampler, probability_sampler


def toy_ara_attack_probability(beta_scale: float = 1.0, e_low: float = 0.0, e_high: float = 2.0) -> np.ndarray:
    """Exact ``p_D(a=1 | d)`` for the toy ARA game, by quadrature over ``e``.

    A drawn attacker attacks iff ``p exp(1.97 e) + (1 - p) exp(-0.53 e) > 1``,
    i.e. iff ``p`` exceeds a threshold depending on ``e`` only, so the
    probability is the Beta survival function averaged over ``e``.
    """
    from scipy.integrate import quad
    from scipy.stats import beta as beta_law

    lo, hi = ATTACK_BENEFIT[0], ATTACK_BENEFIT[1]

    def threshold(e):
        return (1.0 - np.exp(lo * e)) / (np.exp(hi * e) - np.exp(lo * e))

    ab = BETA_PARAMS * beta_scale
    out = np.empty(len(ab))
    for i, (al, be) in enumerate(ab):
        val, _ = quad(lambda e: beta_law.sf(threshold(e), al, be), max(e_low, 1e-12), e_high, limit=200)
        out[i] = val / (e_high - e_low)
    return out


def toy_ara_defender_eu(beta_scale: float = 1.0, shift: float = DEFENDER_SHIFT) -> np.ndarray:
    """Exact ARA defender expected utility per defense (shifted scale)."""
    u = defender_utility(shift=shift)
    pa = toy_ara_attack_probability(beta_scale)
    d = np.arange(10)
    u0 = np.array([u(i, np.array([0]))[0] for i in d])
    u1 = np.array([u(i, np.array([1]))[0] for i in d])
    return (1 - pa * SUCCESS_PROB) * u0 + pa * SUCCESS_PROB * u1

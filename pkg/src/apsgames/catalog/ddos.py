"""DDoS protection case study: cloud protection level versus attack days.

The defender picks a protection level (gbps) and the competitor a number
of attack days. Each attack attempt succeeds when the platform's traffic,
a Gamma draw in gbps, exceeds the protection; successful attempts last a
Gamma number of hours and the outage erodes market share.

Sums of ``k`` iid ``Gamma(s, r)`` durations are drawn as one
``Gamma(k s, r)`` and the number of successful attempts as a Binomial
with the analytic per-attempt success probability; both are exact in law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from ..game import AraGame, DecisionSpace, OutcomeModel, RandomAttackerModel, Support, UtilityFunction

PROTECTION_LEVELS = tuple(range(0, 200, 5))
ATTACK_DAYS = tuple(range(0, 31))
MARKET_VALUE = 1_500_000.0
MARKET_SCALE = 3_000_000.0
DEF_LOSS_RATE = (0.0026, 0.00417)
DEF_DURATION = (4.0, 1.0)   # shape, rate (hours)
DEF_GBPS = (5.0, 1.0)
UTILITY_SCALE = 7_000_000.0
BOTNET_COST = 792.0
DETECTION_COST = (2_430_000.0, 400_000.0)
# attacker payoff normalisation bounds
C_MIN = -(DETECTION_COST[0] + 4 * DETECTION_COST[1] + BOTNET_COST * 30)
C_MAX = MARKET_VALUE
PAYOFF_FLOOR = 1e-6


def subscription_cost(d) -> float:
    """Placeholder monthly price (euro): free at 0, then ``300 + 12 d``."""
    return 0.0 if d <= 0 else 300.0 + 12.0 * d


def success_probability(d, shape=DEF_GBPS[0], rate=DEF_GBPS[1]) -> float:
    """P(Gamma(shape, rate) > d), the chance one attempt saturates protection ``d``."""
    return float(gammaincc(shape, rate * d)) if d > 0 else 1.0


def _market_loss(gen, size, a, q, dur_shape, dur_rate, r_lo, r_hi):
    if a == 0:
        return np.zeros(size)
    k = gen.binomial(a, q, size)
    hours = np.zeros(size)
    hit = k > 0
    if hit.any():
        hours[hit] = gen.gamma(dur_shape * k[hit], 1.0 / dur_rate)
    rate = gen.uniform(r_lo, r_hi, size)
    return np.minimum(MARKET_VALUE, MARKET_SCALE * hours * rate)


def defender_outcome() -> OutcomeModel:
    """Market loss ``m`` (euro) given protection ``d`` and ``a`` attack days."""
    def sampler(d, a, gen, size):
        return _market_loss(gen, size, int(a), success_probability(d), *DEF_DURATION, *DEF_LOSS_RATE)

    return OutcomeModel(sampler, Support.box(0.0, MARKET_VALUE))


def defender_utility(cost_curve=subscription_cost) -> UtilityFunction:
    """Constant risk averse utility of total cost, in (0, 1] for costs up to 7e6."""
    def u(d, m):
        c = np.asarray(m) + cost_curve(d)
        return (np.exp(1.0 - c / UTILITY_SCALE) - 1.0) / (math.e - 1.0)

    return UtilityFunction(u)


@dataclass(frozen=True)
class AttackerBeliefs:
    """One draw of the defender's uncertainty about the attacker."""

    dur_shape: float
    dur_rate: float
    gbps_shape: float
    gbps_rate: float
    loss_lo: float
    loss_hi: float
    detect_prob: float
    risk: float

    @classmethod
    def draw(cls, gen: np.random.Generator) -> "AttackerBeliefs":
        return cls(
            dur_shape=gen.uniform(3.6, 4.8),
            dur_rate=gen.uniform(0.8, 1.2),
            gbps_shape=gen.uniform(4.8, 5.6),
            gbps_rate=gen.uniform(0.8, 1.2),
            loss_lo=gen.uniform(0.0021, 0.0031),
            loss_hi=gen.uniform(0.00367, 0.00467),
            detect_prob=gen.beta(2.0, 998.0),
            risk=gen.uniform(8.0, 10.0),
        )

    def outcome_model(self) -> OutcomeModel:
        """Attacker net result ``c_a = m - c_t - 792 a`` (euro)."""
        def sampler(d, a, gen, size):
            a = int(a)
            q = success_probability(d, self.gbps_shape, self.gbps_rate)
            m = _market_loss(gen, size, a, q, self.dur_shape, self.dur_rate, self.loss_lo, self.loss_hi)
            if a == 0:
                return m
            detected = gen.binomial(a, self.detect_prob, size) > 0
            c_t = np.where(detected, gen.normal(*DETECTION_COST, size), 0.0)
            return m - c_t - BOTNET_COST * a

        return OutcomeModel(sampler, Support.box(-np.inf, MARKET_VALUE))

    def utility(self) -> UtilityFunction:
        k = self.risk

        def u(a, c_a):
            x = (np.asarray(c_a, dtype=float) - C_MIN) / (C_MAX - C_MIN)
            return np.clip(x, PAYOFF_FLOOR, 1.0) ** k

        return UtilityFunction(u)


def attacker_model() -> RandomAttackerModel:
    def sampler(gen):
        b = AttackerBeliefs.draw(gen)
        return b.utility(), b.outcome_model()

    return RandomAttackerModel(sampler)


def linear_cost_curve(base: float = 300.0, per_gbps: float = 12.0):
    """``c_s(0) = 0`` and ``c_s(d) = base + per_gbps * d`` otherwise."""
    return lambda d: 0.0 if d <= 0 else base + per_gbps * d


def ddos_game(cost_base: float = 300.0, cost_per_gbps: float = 12.0, cost_curve=None) -> AraGame:
    """The case study; ``cost_curve(d)`` overrides the linear subscription price."""
    cost_curve = cost_curve or linear_cost_curve(cost_base, cost_per_gbps)
    return AraGame(
        defense_space=DecisionSpace.discrete(PROTECTION_LEVELS),
        attack_space=DecisionSpace.discrete(ATTACK_DAYS),
        u_D=defender_utility(cost_curve),
        p_D=defender_outcome(),
        attacker_model=attacker_model(),
        name="ddos",
    )

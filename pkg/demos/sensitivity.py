"""Regret of the complete-information defense when the attacker model is perturbed.

Attacker risk proneness is redrawn uniformly on (0, 2) and success
probabilities from Beta laws around their nominal values.
"""

from apsgames.catalog import build_toy_perturbation_classes, toy_cyber_game
from apsgames.sensitivity import sensitivity_analysis


def main(R=2_000):
    util, prob = build_toy_perturbation_classes()
    rep = sensitivity_analysis(toy_cyber_game(), 8, util, prob, R=R, rs=0)
    print(f"{rep.evaluated} perturbations, verdict: {rep.verdict}")
    for d, f in sorted(rep.frequencies.items()):
        print(f"  optimum {d}: {f:.1%}")
    print(f"max regret {rep.max_regret:.4f} ({rep.max_regret_fraction:.1%} of the proposed expected utility)")


if __name__ == "__main__":
    main()

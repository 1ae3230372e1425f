"""Toy cyber game under ARA: attack forecasts p(a=1 | d) and the ARA defense.

The forecast is computed three ways: exact quadrature, MC (best response
of each drawn attacker) and APS (mode of each drawn attacker's chain).
"""

import numpy as np

from apsgames import ApsConfig, McConfig, attack_distribution_aps, attack_distribution_mc, solve_ara_mc
from apsgames.catalog import toy_ara_attack_probability, toy_ara_defender_eu, toy_cyber_ara_game


def main(J=1_000):
    game = toy_cyber_ara_game()
    exact = toy_ara_attack_probability()
    inner = ApsConfig(M=1_000, H_inner=1)
    print(" d   exact    MC    APS")
    for d in range(10):
        mc = attack_distribution_mc(game, d, J, 1_000, rs=d)[1]
        aps = attack_distribution_aps(game, d, J, inner, rs=d)[1]
        print(f"{d:2d}  {exact[d]:.3f}  {mc:.3f}  {aps:.3f}")
    eu = toy_ara_defender_eu()
    print("\nexact ARA optimum:", int(np.argmax(eu)))
    sol = solve_ara_mc(game, McConfig(P=10_000, Q=100, J=J), rs=1)
    print("MC ARA optimum:", sol.optimal_defense)


if __name__ == "__main__":
    main()

"""Toy cyber game under complete information: oracle, MC, MH APS and Gibbs APS.

Protection levels 8 and 9 have almost the same expected utility, so the
script also shows how the power ladder sharpens the APS marginal.
"""

import time

import numpy as np

from apsgames import AnnealSchedule, ApsConfig, McConfig, solve_complete_aps, solve_complete_mc
from apsgames.catalog import brute_force_solve, power_marginal, toy_cyber_game
from apsgames.gibbs import solve_complete_gibbs


def main():
    game = toy_cyber_game()
    exact = brute_force_solve(game)
    print("exact defender expected utility:", np.round(exact.defender_eu, 4))
    print("exact best responses:", exact.best_response_map(game))
    print("exact optimum:", exact.optimal_defense)

    t = time.perf_counter()
    mc = solve_complete_mc(game, McConfig(P=10_000, Q=10_000), rs=1)
    print(f"\nMC optimum {mc.optimal_defense} ({time.perf_counter() - t:.2f}s, {mc.draws} draws)")

    cfg = ApsConfig(N=20_000, M=3_000, H_inner=AnnealSchedule.ladder(15, tau=150),
                    H_outer=AnnealSchedule.ladder(2_000, tau=5))
    t = time.perf_counter()
    aps = solve_complete_aps(game, cfg, rs=1)
    print(f"MH APS optimum {aps.optimal_decision}, share {aps.share:.2f} ({time.perf_counter() - t:.2f}s)")

    t = time.perf_counter()
    gb = solve_complete_gibbs(game, N=5_000, M=5_000, H_inner=2,
                              H_outer=AnnealSchedule.ladder(2_000, tau=2), rs=1)
    print(f"Gibbs APS optimum {gb.optimal_decision}, share {gb.share:.2f} ({time.perf_counter() - t:.2f}s)")

    print("\nexact mass of the powered marginal on d=8:")
    for H in (1, 50, 500, 2_000):
        print(f"  H={H:5d}: {power_marginal(exact.defender_eu, H)[8]:.3f}")


if __name__ == "__main__":
    main()

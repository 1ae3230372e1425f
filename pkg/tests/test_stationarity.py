"""Chain marginals against brute-force normalised expected utilities."""

import pytest

from apsgames import ApsConfig, inner_aps_attack, solve_complete_aps
from apsgames.catalog import brute_force_solve, power_marginal
from apsgames.gibbs import solve_complete_gibbs

from conftest import chi2_pvalue

SAMPLES = 20_000
THIN = 5


@pytest.mark.parametrize("H", [1, 2, 5])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_inner_chain_marginal(small_game, H, d):
    psi_A = brute_force_solve(small_game).attacker_eu
    cfg = ApsConfig(N=2, M=SAMPLES * THIN + 1_000, K=1_000, H_inner=H, validation_probes=0)
    _, trace = inner_aps_attack(small_game, d, cfg, rs=10 * H + d)
    assert chi2_pvalue(trace.kept(), power_marginal(psi_A[d], H), THIN) > 0.01


@pytest.mark.parametrize("H", [1, 2, 5])
def test_outer_chain_marginal(small_game, H):
    sol = brute_force_solve(small_game)
    cfg = ApsConfig(N=SAMPLES * THIN + 1_000, R=1_000, M=2_000, H_inner=5, H_outer=H, validation_probes=0)
    aps = solve_complete_aps(small_game, cfg, rs=H)
    assert aps.best_responses == sol.best_response_map(small_game)
    assert chi2_pvalue(aps.trace.kept(), power_marginal(sol.defender_eu, H), THIN) > 0.01


@pytest.mark.parametrize("H", [1, 2, 5])
def test_gibbs_defender_marginal(small_game, H):
    sol = brute_force_solve(small_game)
    g = solve_complete_gibbs(small_game, N=SAMPLES * THIN + 1_000, R=1_000, M=2_000, H_inner=5, H_outer=H,
                             rs=H, validation_probes=0)
    assert chi2_pvalue(g.trace.kept(), power_marginal(sol.defender_eu, H), THIN) > 0.01

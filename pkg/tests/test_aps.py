import numpy as np
import pytest

from apsgames import (AnnealSchedule, ApsConfig, DecisionSpace, GameError, PositivityError, UtilityFunction,
                      anneal_schedule, attack_distribution_aps, inner_aps_attack, mh_acceptance,
                      sample_attack, solve_ara_aps, solve_complete_aps)
from apsgames.catalog import resource_game, toy_cyber_game
from apsgames.proposals import StudentTWalk
from apsgames.rng import RandomSource

from conftest import make_small_game

U = UtilityFunction(lambda x, th: x + np.asarray(th, dtype=float))


def test_acceptance_hand_values():
    assert mh_acceptance(U, (1.0, [1.0]), (3.0, [1.0])) == 1.0
    assert mh_acceptance(U, (3.0, [1.0]), (1.0, [1.0])) == pytest.approx(0.5)
    # product over copies
    assert mh_acceptance(U, (3.0, [1.0, 1.0]), (1.0, [1.0, 1.0]), H=2) == pytest.approx(0.25)


def test_acceptance_errors():
    with pytest.raises(GameError):
        mh_acceptance(U, (1.0, [1.0]), (2.0, [1.0]), H=2)
    with pytest.raises(PositivityError):
        mh_acceptance(U, (1.0, [1.0]), (-5.0, [1.0]))


def test_anneal_schedule():
    s = AnnealSchedule.ladder(10, H0=2, tau=3)
    assert [s(i) for i in range(0, 12, 3)] == [2, 3, 4, 5]
    assert s(1_000) == 10
    assert anneal_schedule(6, s) == 4
    assert AnnealSchedule.ladder(100, H0=10, tau=5, step=10)(20) == 50
    assert AnnealSchedule.fixed(3)(99) == 3 and AnnealSchedule.fixed(3).is_fixed
    with pytest.raises(GameError):
        AnnealSchedule.ladder(0)
    with pytest.raises(GameError):
        AnnealSchedule.ladder(5, step=0)


def test_ladder_default_tau_is_a_tenth_of_the_chain():
    cfg = ApsConfig(N=200, M=10, H_outer=AnnealSchedule.ladder(11))
    assert cfg.H_outer.tau == 20
    assert cfg.H_outer(199) == 10 and cfg.H_outer(200) == 11


@pytest.mark.parametrize("kw", [dict(N=0), dict(M=0), dict(M=10, K=10), dict(N=10, R=10), dict(J=0)])
def test_config_checks(kw):
    with pytest.raises(GameError):
        ApsConfig(**kw)


def test_config_defaults():
    cfg = ApsConfig(N=100, M=50, H_outer=3)
    assert (cfg.K, cfg.R) == (5, 10) and cfg.H_outer.is_fixed and cfg.H_outer(0) == 3


def test_inner_attack_toy():
    g = toy_cyber_game()
    cfg = ApsConfig(M=2_000, H_inner=AnnealSchedule.ladder(20, tau=50))
    assert inner_aps_attack(g, 0, cfg, rs=0)[0] == 1
    assert inner_aps_attack(g, 9, cfg, rs=0)[0] == 0


def test_complete_aps_small(small_game):
    cfg = ApsConfig(N=4_000, M=1_000, H_inner=5, H_outer=AnnealSchedule.ladder(20, tau=100))
    sol = solve_complete_aps(small_game, cfg, rs=0)
    assert sol.optimal_decision == 1
    assert sol.best_responses == {0: 1, 1: 0, 2: 1}
    assert sum(sol.histogram.values()) == pytest.approx(1.0)
    assert 0 < sol.trace.acceptance_rate < 1
    assert len(sol.trace) == cfg.N and len(sol.trace.kept()) == cfg.N - cfg.R


def test_complete_aps_accounting(small_game):
    N, M = 40, 15
    cfg = ApsConfig(N=N, M=M, memoize=False, validation_probes=0)
    assert solve_complete_aps(small_game, cfg, rs=0).draws == N * (2 * M + 3) + 2 * M + 2


def test_ara_aps_accounting(small_ara):
    N, M = 40, 15
    cfg = ApsConfig(N=N, M=M, validation_probes=0)
    assert solve_ara_aps(small_ara, cfg, rs=0).draws == N * (2 * M + 5) + 2 * M + 4


def test_ara_aps_tables(small_ara):
    cfg = ApsConfig(N=3_000, M=500, J=300, H_inner=5, H_outer=AnnealSchedule.ladder(20, tau=100))
    sol = solve_ara_aps(small_ara, cfg, rs=0)
    assert sol.optimal_decision == 0
    assert sol.attack_tables[:, 1] == pytest.approx([0.5, 0.0, 0.5], abs=0.1)
    assert np.allclose(sol.attack_tables.sum(axis=1), 1.0)


def test_sample_attack_and_tables(small_ara):
    cfg = ApsConfig(M=300, H_inner=5)
    a, trace, rate = sample_attack(small_ara, 1, cfg, RandomSource(0), record=True)
    assert a in (0, 1) and len(trace) == 300 and 0 <= rate <= 1
    t = attack_distribution_aps(small_ara, 1, 50, cfg, rs=1)
    assert t.sum() == pytest.approx(1.0) and t[0] >= 0.8


def test_positivity_is_enforced():
    g = make_small_game(u_D=UtilityFunction(lambda d, th: 1.0 - np.asarray(th, dtype=float)))
    with pytest.raises(PositivityError):
        solve_complete_aps(g, ApsConfig(N=20, M=10), rs=0)
    with pytest.raises(PositivityError):
        solve_complete_aps(g, ApsConfig(N=200, M=10, validation_probes=0), rs=0)


def test_start_and_memo(small_game):
    cfg = ApsConfig(N=50, M=20, start=2, validation_probes=0)
    sol = solve_complete_aps(small_game, cfg, rs=0)
    assert set(sol.best_responses) <= {0, 1, 2}
    with pytest.raises(GameError):
        solve_complete_aps(small_game, ApsConfig(N=5, M=5, start=7, validation_probes=0), rs=0)


def test_continuous_resource_game():
    g = resource_game(h=0.005, k=0.005)
    cfg = ApsConfig(N=300, M=100, H_inner=AnnealSchedule.ladder(2_000, H0=200, tau=5, step=200),
                    H_outer=AnnealSchedule.ladder(2_000, H0=200, tau=15, step=200),
                    g_D=StudentTWalk(g.defense_space, 0.2), g_A=StudentTWalk(g.attack_space, 0.2),
                    mode_grid=0.1, memo_resolution=1e-6, validation_probes=200)
    sol = solve_complete_aps(g, cfg, rs=0)
    assert sol.trace.states.shape == (300, 1)
    assert 0.0 <= sol.optimal_decision <= 1.0
    assert sol.optimal_decision >= 0.7


def test_same_seed_same_chain(small_game):
    cfg = ApsConfig(N=300, M=50, H_outer=2)
    a, b = solve_complete_aps(small_game, cfg, rs=4), solve_complete_aps(small_game, cfg, rs=4)
    assert np.array_equal(a.trace.states, b.trace.states) and a.draws == b.draws

import numpy as np
import pytest

from apsgames import ApsConfig, GameError, McConfig, OutcomeModel, Support
from apsgames.catalog import build_toy_perturbation_classes, toy_cyber_game
from apsgames.sensitivity import sensitivity_analysis

from conftest import attacker_u, breach_model


def nominal(game):
    return (lambda gen: game.u_A), (lambda gen: game.p_A)


def test_nominal_perturbation_has_no_regret(small_game):
    rep = sensitivity_analysis(small_game, 1, *nominal(small_game), R=5, rs=0)
    assert rep.evaluated == 5 and rep.max_regret == 0.0
    assert rep.frequencies == {1: 1.0}
    assert rep.verdict == "robust"


def test_regret_against_hand_values(small_game):
    # a harmless attacker never attacks: d = 0 is then optimal (3 - 1.5 * 0.2 = 2.7 vs 2.5 - 1.5 * 0.3)
    rep = sensitivity_analysis(small_game, 1, lambda gen: attacker_u(0.1), lambda gen: breach_model(),
                               R=3, rs=0)
    assert rep.frequencies == {0: 1.0}
    assert rep.regrets == pytest.approx([2.05 - 2.7] * 3)
    assert rep.max_regret_fraction == pytest.approx(0.65 / 2.05)
    assert rep.verdict == "not satisfied"


def test_threshold_and_early_stop(small_game):
    args = (small_game, 1, lambda gen: attacker_u(gen.choice([2.0, 0.1])), lambda gen: breach_model())
    full = sensitivity_analysis(*args, R=30, rs=1)
    assert sensitivity_analysis(*args, R=30, rs=1, threshold=1.0).verdict == "robust"
    stopped = sensitivity_analysis(*args, R=30, rs=1, early_stop=True)
    first = next(r.index for r in full.records if abs(r.regret) > 0)
    assert stopped.evaluated == first + 1 and stopped.stopped_early
    assert stopped.verdict == "not satisfied"


def test_invalid_perturbations_are_skipped(small_game):
    inexact = OutcomeModel(breach_model().sampler, Support.discrete((0, 1)))
    with pytest.warns(RuntimeWarning, match="skipped"):
        rep = sensitivity_analysis(small_game, 1, lambda gen: small_game.u_A, lambda gen: inexact, R=4, rs=0)
    assert rep.skipped == 4 and rep.evaluated == 0 and rep.max_regret == 0.0


def test_toy_sweep_is_reproducible_across_workers():
    u, p = build_toy_perturbation_classes()
    g = toy_cyber_game()
    a = sensitivity_analysis(g, 8, u, p, R=200, rs=5, workers=1)
    b = sensitivity_analysis(g, 8, u, p, R=200, rs=5, workers=4)
    assert [r.regret for r in a.records] == [r.regret for r in b.records]
    assert set(a.frequencies) <= set(range(10)) and sum(a.frequencies.values()) == pytest.approx(1.0)
    assert all(r.regret <= 1e-12 for r in a.records)


@pytest.mark.parametrize("solver,cfg", [("mc", McConfig(P=2_000, Q=2_000)),
                                        ("aps", ApsConfig(N=2_000, M=500, H_inner=5, H_outer=10)),
                                        ("gibbs", dict(N=2_000, M=500, H_inner=5, H_outer=10))])
def test_simulation_solvers_agree_with_exact(small_game, solver, cfg):
    exact = sensitivity_analysis(small_game, 0, *nominal(small_game), R=2, rs=0)
    sim = sensitivity_analysis(small_game, 0, *nominal(small_game), R=2, rs=0, solver=solver,
                               solver_config=cfg)
    assert sim.frequencies == exact.frequencies == {1: 1.0}
    assert sim.regrets == pytest.approx(exact.regrets, abs=0.05)


def test_argument_checks(small_game):
    with pytest.raises(GameError):
        sensitivity_analysis(small_game, 1, *nominal(small_game), solver="bogus")
    with pytest.raises(GameError):
        sensitivity_analysis(small_game, 1, *nominal(small_game), R=0)

import numpy as np
import pytest

from apsgames import (GameError, McConfig, attack_distribution_mc, estimate_sample_size, solve_ara_mc,
                      solve_complete_mc)
from apsgames.catalog import resource_game


def test_complete_mc_small_game(small_game):
    sol = solve_complete_mc(small_game, McConfig(P=20_000, Q=20_000), rs=1)
    assert sol.optimal_defense == 1
    assert sol.best_response_map() == {0: 1, 1: 0, 2: 1}
    assert sol.expected_utility == pytest.approx([1.95, 2.05, 1.1], abs=0.02)


def test_ara_mc_small_game(small_ara):
    sol = solve_ara_mc(small_ara, McConfig(P=20_000, Q=2_000, J=2_000), rs=1)
    assert sol.optimal_defense == 0
    assert sol.expected_utility == pytest.approx([2.325, 2.05, 1.475], abs=0.03)
    assert sol.attack_distribution[:, 1] == pytest.approx([0.5, 0.0, 0.5], abs=0.04)
    assert np.allclose(sol.attack_distribution.sum(axis=1), 1.0)


def test_attack_distribution_mc(small_ara):
    t = attack_distribution_mc(small_ara, 1, J=200, Q=5_000, rs=0)
    assert t == pytest.approx([1.0, 0.0])
    with pytest.raises(GameError):
        attack_distribution_mc(small_ara, 1, J=0, Q=5)


def test_mc_accounting(small_game, small_ara):
    P, Q, J = 37, 11, 5
    sol = solve_complete_mc(small_game, McConfig(P=P, Q=Q), rs=0)
    assert sol.draws == 3 * (2 * Q + P)
    sol = solve_ara_mc(small_ara, McConfig(P=P, Q=Q, J=J), rs=0)
    assert sol.draws == 3 * (J * (2 * Q + 2) + 2 * P)


def test_worker_count_does_not_change_results(small_ara):
    a = solve_ara_mc(small_ara, McConfig(P=500, Q=50, J=20), rs=3, workers=1)
    b = solve_ara_mc(small_ara, McConfig(P=500, Q=50, J=20), rs=3, workers=3)
    assert np.array_equal(a.expected_utility, b.expected_utility)
    assert np.array_equal(a.attack_distribution, b.attack_distribution)


def test_mc_needs_finite_spaces():
    with pytest.raises(GameError):
        solve_complete_mc(resource_game(), McConfig(P=10, Q=10))


def test_bad_config():
    with pytest.raises(GameError):
        McConfig(P=0)


def test_sample_size():
    assert estimate_sample_size([1.0], 0.01) == 38_416
    assert estimate_sample_size([0.5, 2.0], 1.0, z=1.0) == 2
    with pytest.raises(GameError):
        estimate_sample_size([], 0.1)
    with pytest.raises(GameError):
        estimate_sample_size([1.0], 0.0)

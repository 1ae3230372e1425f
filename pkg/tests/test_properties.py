"""Property-based checks of the invariants every solver relies on."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from apsgames import (ApsConfig, DecisionSpace, McConfig, UtilityFunction, attack_distribution_aps,
                      attack_distribution_mc, bgr_statistic, mh_acceptance, solve_complete_aps, solve_complete_mc)
from apsgames.catalog import brute_force_solve
from apsgames.gibbs import attack_distribution_gibbs
from apsgames.proposals import CircularNeighbor, StudentTWalk
from apsgames.rng import RandomSource

from conftest import attacker_u, defender_u, make_small_ara, make_small_game

seeds = st.integers(0, 2**32 - 1)
FAST = settings(max_examples=25, deadline=None)


@given(n=st.integers(1, 40), width=st.integers(1, 6), x=st.integers(0, 39), y=st.integers(0, 39))
def test_circular_kernel_is_symmetric(n, width, x, y):
    k = CircularNeighbor(DecisionSpace.discrete(range(n)), width)
    x, y = x % n, y % n
    assert k.density(y, x) == k.density(x, y)
    if n > 1:
        assert abs(sum(k.density(z, x) for z in range(n)) - 1.0) < 1e-12


@FAST
@given(n=st.integers(3, 12), width=st.integers(1, 3), seed=seeds)
def test_circular_kernel_empirical_symmetry(n, width, seed):
    k = CircularNeighbor(DecisionSpace.discrete(range(n)), width)
    rs = RandomSource(seed)
    freq = np.zeros((n, n))
    for x in (0, n // 2):
        for _ in range(400):
            freq[x, k.propose(x, rs)] += 1
    # q(x + j | x) = q(x | x + j): compare offsets from both start points
    for j in range(n):
        a, b = freq[0, j % n], freq[n // 2, (n // 2 + j) % n]
        assert abs(a - b) <= 5 * np.sqrt(a + b + 1)


@FAST
@given(seed=seeds, scale=st.floats(0.01, 0.5))
def test_student_walk_increments_are_symmetric(seed, scale):
    w = StudentTWalk(DecisionSpace.box(-100.0, 100.0), scale=scale)
    rs = RandomSource(seed)
    inc = np.array([w.propose(0.0, rs)[0] for _ in range(2_000)])
    # sign test: P(increment > 0) = 1/2
    assert abs(np.mean(inc > 0) - 0.5) < 5 * 0.5 / np.sqrt(len(inc))


positive = st.floats(1e-6, 1e6)


@given(H=st.integers(1, 20), data=st.data())
def test_acceptance_probability_in_unit_interval(H, data):
    cur = data.draw(st.lists(positive, min_size=H, max_size=H))
    new = data.draw(st.lists(positive, min_size=H, max_size=H))
    u = UtilityFunction(lambda x, th: np.asarray(th, dtype=float))
    p = mh_acceptance(u, (0, cur), (1, new), H)
    assert 0.0 < p <= 1.0
    assert p == 1.0 or mh_acceptance(u, (1, new), (0, cur), H) == 1.0


@FAST
@given(a=st.floats(0.01, 100.0), b=st.floats(0.0, 100.0), seed=seeds)
def test_positive_affine_utilities_keep_the_argmax(a, b, seed):
    base = make_small_game()
    moved = make_small_game(u_D=defender_u(a, b),
                            u_A=UtilityFunction(lambda x, th: a * attacker_u()(x, th) + b))
    exact, exact2 = brute_force_solve(base), brute_force_solve(moved)
    assert exact.optimal_state == exact2.optimal_state
    assert np.array_equal(exact.best_response, exact2.best_response)
    cfg = McConfig(P=200, Q=200)
    mc, mc2 = solve_complete_mc(base, cfg, seed), solve_complete_mc(moved, cfg, seed)
    assert mc.optimal_state == mc2.optimal_state
    assert np.array_equal(mc.best_response, mc2.best_response)


@FAST
@given(J=st.integers(1, 30), d=st.sampled_from([0, 1, 2]), seed=seeds)
def test_forecast_tables_sum_to_one(J, d, seed):
    g = make_small_ara()
    tables = [attack_distribution_mc(g, d, J, 20, seed),
              attack_distribution_aps(g, d, J, ApsConfig(M=20), seed),
              attack_distribution_gibbs(g, d, J, M=20, rs=seed)]
    for t in tables:
        assert np.all(t >= 0) and abs(t.sum() - 1.0) < 1e-12
        assert np.allclose(t * J, np.rint(t * J))


@FAST
@given(m=st.integers(2, 6), n=st.integers(200, 2_000), seed=seeds)
def test_bgr_same_target_chains(m, n, seed):
    x = np.random.default_rng(seed).normal(size=(m, n))
    assert bgr_statistic(x).rhat < 1.1


@FAST
@given(m=st.integers(2, 6), n=st.integers(200, 2_000), shift=st.floats(2.0, 10.0), seed=seeds)
def test_bgr_shifted_chains(m, n, shift, seed):
    x = np.random.default_rng(seed).normal(size=(m, n))
    x[0] += shift
    assert bgr_statistic(x).rhat > 1.2


@FAST
@given(seed=seeds, workers=st.integers(2, 4))
def test_mc_bitwise_reproducible_across_workers(seed, workers):
    g = make_small_game()
    a = solve_complete_mc(g, McConfig(P=100, Q=100), seed, workers=1)
    b = solve_complete_mc(g, McConfig(P=100, Q=100), seed, workers=workers)
    assert a.expected_utility.tobytes() == b.expected_utility.tobytes()
    assert a.attacker_utility.tobytes() == b.attacker_utility.tobytes() and a.draws == b.draws


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_aps_bitwise_reproducible(seed):
    g = make_small_game()
    cfg = ApsConfig(N=200, M=30, H_outer=3)
    a, b = solve_complete_aps(g, cfg, seed), solve_complete_aps(g, cfg, seed)
    assert a.trace.states.tobytes() == b.trace.states.tobytes()
    assert a.trace.utility.tobytes() == b.trace.utility.tobytes()

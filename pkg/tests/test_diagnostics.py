import numpy as np
import pytest

from apsgames.diagnostics import bgr_statistic, estimate_mode_continuous, estimate_mode_discrete, grid_histogram


def test_bgr_identical_chains():
    x = np.arange(20.0)
    assert bgr_statistic([x, x]).rhat == pytest.approx(1.0)


def test_bgr_matches_hand_computation():
    x = np.array([[1.0, 2, 3, 4, 5, 6, 7, 8, 9, 10], [2.0, 4, 6, 8, 10, 12, 14, 16, 18, 20]])
    m, n = x.shape
    W = x.var(axis=1).mean()
    B = n * x.mean(axis=1).var(ddof=1)
    expected = np.sqrt((W + (m + 1) / (m * n) * B) / W)
    assert float(bgr_statistic(x)) == pytest.approx(expected)


def test_bgr_degenerate():
    r = bgr_statistic([[1.0] * 10, [1.0] * 10])
    assert r.degenerate and r.rhat == 1.0
    assert bgr_statistic([[1.0] * 10, [2.0] * 10]).rhat == np.inf


@pytest.mark.parametrize("bad", [[np.arange(20.0)], [np.arange(5.0), np.arange(5.0)]])
def test_bgr_input_checks(bad):
    with pytest.raises(ValueError):
        bgr_statistic(bad)


def test_discrete_mode_and_ties():
    m = estimate_mode_discrete([2, 2, 1, 1, 0])
    assert m.value == 1 and m.share == pytest.approx(0.4)
    # tie broken on the codes, not the states
    assert estimate_mode_discrete([0, 1], codes=[5.0, 3.0]).value == 1


def test_continuous_mode_beta():
    x = np.random.default_rng(0).beta(8, 2, 50_000)
    assert abs(estimate_mode_continuous(x).value - 7 / 8) < 0.03


def test_continuous_mode_on_grid():
    x = np.array([0.09, 0.11, 0.1, 0.2, 0.31])
    m = estimate_mode_continuous(x, grid=0.1)
    assert m.value == pytest.approx(0.1) and m.method == "grid"


def test_continuous_mode_constant_and_2d():
    assert estimate_mode_continuous([0.3, 0.3]).value == 0.3
    x = np.random.default_rng(1).normal([0.0, 5.0], 1.0, size=(20_000, 2))
    assert np.allclose(estimate_mode_continuous(x).value, [0.0, 5.0], atol=0.3)


def test_empty_samples():
    with pytest.raises(ValueError):
        estimate_mode_discrete([])
    with pytest.raises(ValueError):
        estimate_mode_continuous([])


def test_grid_histogram():
    vals, freq = grid_histogram([0.0, 0.04, 0.1, 0.12], 0.1)
    assert np.allclose(vals, [0.0, 0.1]) and np.allclose(freq, [0.5, 0.5])

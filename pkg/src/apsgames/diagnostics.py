"""Convergence statistics and mode estimators.

The regret/sensitivity machinery lives in :mod:`apsgames.sensitivity`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BGRResult",
    "bgr_statistic",
    "ModeEstimate",
    "estimate_mode_discrete",
    "estimate_mode_continuous",
    "grid_histogram",
]


@dataclass(frozen=True)
class BGRResult:
    rhat: float
    degenerate: bool = False

    def __float__(self):
        return self.rhat


def bgr_statistic(chains) -> BGRResult:
    """Potential scale reduction factor of two or more scalar traces.

    Parameters
    ----------
    chains : array_like, shape (m, n)
        ``m >= 2`` chains of equal length ``n >= 10``.

    Returns
    -------
    BGRResult
        ``rhat`` close to 1 indicates the chains agree. When every chain
        has zero variance the statistic is undefined: ``degenerate`` is
        set and ``rhat`` is 1 if the chains coincide, ``inf`` otherwise.
    """
    x = np.asarray(chains, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two chains of equal length")
    m, n = x.shape
    if n < 10:
        raise ValueError("chains must have length >= 10")
    means = x.mean(axis=1)
    # within-chain variance with the 1/n normaliser, so that V/W is exactly
    # 1 when the chains coincide
    W = x.var(axis=1).mean()
    B = n * means.var(ddof=1)
    if W == 0.0:
        return BGRResult(1.0 if B == 0.0 else float("inf"), degenerate=True)
    V = W + (m + 1.0) / (m * n) * B
    return BGRResult(float(np.sqrt(V / W)))


@dataclass(frozen=True)
class ModeEstimate:
    value: object
    share: float
    method: str
    low_contrast: bool = False


def estimate_mode_discrete(samples, codes=None) -> ModeEstimate:
    """Most frequent value; ties go to the smallest value.

    ``samples`` are decision states (indices). When ``codes`` is given,
    ties are broken on ``codes[state]`` instead of the state itself.
    """
    s = np.asarray(samples)
    if s.size == 0:
        raise ValueError("no samples")
    vals, counts = np.unique(s, return_counts=True)
    top = vals[counts == counts.max()]
    if codes is not None:
        best = top[np.argmin(np.asarray(codes)[top])]
    else:
        best = top.min()
    return ModeEstimate(best.item(), counts.max() / s.size, "frequency")


def _fd_bins(x: np.ndarray) -> int:
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) / len(x) ** (1.0 / 3.0)
    if width <= 0:
        return 1
    return int(min(max(np.ceil((x.max() - x.min()) / width), 1), 10_000))


def estimate_mode_continuous(samples, bins="auto", grid=None) -> ModeEstimate:
    """Histogram mode of 1-D samples (or per coordinate for 2-D input).

    ``bins="auto"`` uses the Freedman-Diaconis width. With ``grid=h`` the
    bins are centred on the multiples of ``h`` and the returned value is
    the winning grid point. Ties go to the leftmost bin. The estimate is
    flagged ``low_contrast`` when the top bin holds less than twice the
    mean share of the occupied range.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    if x.ndim == 2 and x.shape[1] > 1:
        parts = [estimate_mode_continuous(x[:, j], bins, grid) for j in range(x.shape[1])]
        return ModeEstimate(np.array([p.value for p in parts]), min(p.share for p in parts),
                            parts[0].method, any(p.low_contrast for p in parts))
    x = x.ravel()
    if np.all(x == x[0]):
        return ModeEstimate(float(x[0]), 1.0, "histogram")
    if grid is not None:
        k = np.rint(x / grid).astype(np.int64)
        mode = estimate_mode_discrete(k)
        nb = k.max() - k.min() + 1
        return ModeEstimate(mode.value * grid, mode.share, "grid", mode.share < 2.0 / nb)
    nb = _fd_bins(x) if bins == "auto" else int(bins)
    counts, edges = np.histogram(x, bins=nb)
    i = int(np.argmax(counts))
    share = counts[i] / x.size
    return ModeEstimate(0.5 * (edges[i] + edges[i + 1]), float(share), "histogram", share < 2.0 / nb)


def grid_histogram(samples, grid: float):
    """Frequencies of samples rounded to the nearest multiple of ``grid``."""
    k = np.rint(np.asarray(samples, dtype=float) / grid).astype(np.int64)
    vals, counts = np.unique(k, return_counts=True)
    return vals * grid, counts / k.size

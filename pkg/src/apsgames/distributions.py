"""Parametric laws used by the game models.

Every law is a frozen dataclass with ``sample``, ``mean`` and ``var``.
Parameters are checked on construction and raise :class:`ParameterError`.
Gamma is parameterised by shape and *rate*.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .rng import RandomSource

__all__ = [
    "ParameterError",
    "Uniform",
    "Beta",
    "Gamma",
    "Normal",
    "Binomial",
    "Bernoulli",
    "StudentT",
    "Distribution",
    "sample",
    "beta_from_mean_variance",
]


class ParameterError(ValueError):
    """Raised for parameters outside a law's domain."""


def _gen(rs) -> np.random.Generator:
    return rs.generator if isinstance(rs, RandomSource) else rs


def _positive(name, value):
    if not value > 0:
        raise ParameterError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class Uniform:
    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if not self.low <= self.high:
            raise ParameterError(f"Uniform needs low <= high, got ({self.low}, {self.high})")

    def sample(self, rs, size=None):
        return _gen(rs).uniform(self.low, self.high, size)

    @property
    def mean(self):
        return 0.5 * (self.low + self.high)

    @property
    def var(self):
        return (self.high - self.low) ** 2 / 12.0


@dataclass(frozen=True)
class Beta:
    alpha: float
    beta: float

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("beta", self.beta)

    def sample(self, rs, size=None):
        return _gen(rs).beta(self.alpha, self.beta, size)

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    @property
    def var(self):
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1.0))


@dataclass(frozen=True)
class Gamma:
    shape: float
    rate: float = 1.0

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("rate", self.rate)

    def sample(self, rs, size=None):
        return _gen(rs).gamma(self.shape, 1.0 / self.rate, size)

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def var(self):
        return self.shape / self.rate**2


@dataclass(frozen=True)
class Normal:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _positive("sigma", self.sigma)

    def sample(self, rs, size=None):
        return _gen(rs).normal(self.mu, self.sigma, size)

    @property
    def mean(self):
        return self.mu

    @property
    def var(self):
        return self.sigma**2


@dataclass(frozen=True)
class Binomial:
    n: int
    p: float

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ParameterError(f"n must be a non-negative integer, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")

    def sample(self, rs, size=None):
        return _gen(rs).binomial(int(self.n), self.p, size)

    @property
    def mean(self):
        return self.n * self.p

    @property
    def var(self):
        return self.n * self.p * (1.0 - self.p)


@dataclass(frozen=True)
class Bernoulli:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")

    def sample(self, rs, size=None):
        u = _gen(rs).random(size)
        if size is None:
            return int(u < self.p)
        return (u < self.p).astype(np.int64)

    @property
    def mean(self):
        return self.p

    @property
    def var(self):
        return self.p * (1.0 - self.p)


@dataclass(frozen=True)
class StudentT:
    loc: float = 0.0
    scale: float = 1.0
    df: float = 5.0

    def __post_init__(self):
        _positive("scale", self.scale)
        _positive("df", self.df)

    def sample(self, rs, size=None):
        return self.loc + self.scale * _gen(rs).standard_t(self.df, size)

    @property
    def mean(self):
        return self.loc if self.df > 1 else float("nan")

    @property
    def var(self):
        if self.df > 2:
            return self.scale**2 * self.df / (self.df - 2.0)
        return float("inf")


Distribution = Union[Uniform, Beta, Gamma, Normal, Binomial, Bernoulli, StudentT]


def sample(dist: Distribution, rs, size=None):
    """Draw from ``dist`` using a RandomSource or numpy Generator."""
    return dist.sample(rs, size)


def beta_from_mean_variance(mean: float, variance: float) -> Beta:
    """Moment-matched Beta law.

    Requires ``0 < mean < 1`` and ``0 < variance < mean * (1 - mean)``.
    """
    m, v = float(mean), float(variance)
    if not 0.0 < m < 1.0:
        raise ParameterError(f"mean must lie in (0, 1), got {m}")
    if not 0.0 < v < m * (1.0 - m):
        raise ParameterError(f"variance must lie in (0, m(1-m)) = (0, {m * (1 - m)}), got {v}")
    k = m * (1.0 - m) / v - 1.0
    return Beta(m * k, (1.0 - m) * k)

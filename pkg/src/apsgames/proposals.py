"""Symmetric proposal kernels for the Metropolis-Hastings chains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import DecisionSpace, GameError
from .rng import RandomSource

__all__ = ["DomainError", "CircularNeighbor", "StudentTWalk", "default_kernel", "propose"]


class DomainError(GameError):
    """The current state does not belong to the kernel's space."""


@dataclass(frozen=True)
class CircularNeighbor:
    """Uniform jump of 1..``width`` positions left or right, wrapping around.

    The labels are laid out on a circle in their fixed order. With the
    default ``width=1`` each neighbour is proposed with probability 1/2.
    A singleton space has no neighbours and always yields the stay
    marker ``None``.
    """

    space: DecisionSpace
    width: int = 1

    def __post_init__(self):
        if not self.space.is_discrete:
            raise GameError("CircularNeighbor needs a discrete space")
        if self.width < 1:
            raise GameError("width must be >= 1")

    def offsets(self, gen: np.random.Generator, size: int) -> np.ndarray:
        sign = np.where(gen.random(size) < 0.5, 1, -1)
        if self.width == 1:
            return sign
        return sign * gen.integers(1, self.width + 1, size)

    def propose(self, current, rs: RandomSource):
        if not self.space.contains(current):
            raise DomainError(f"state {current!r} outside the space")
        rs.count(1)
        n = self.space.size
        if n == 1:
            return None
        return int((current + self.offsets(rs.generator, 1)[0]) % n)

    def density(self, y, x) -> float:
        n = self.space.size
        if n == 1:
            return 0.0
        hits = sum(((x + s * k) % n) == y for s in (1, -1) for k in range(1, self.width + 1))
        return hits / (2.0 * self.width)


@dataclass(frozen=True)
class StudentTWalk:
    """Per-coordinate Student-t random walk on a box.

    Candidates that leave the box are returned as the stay marker
    ``None``; the chain keeps its state and the move counts as rejected.
    ``scale`` defaults to 10% of each coordinate's width.
    """

    space: DecisionSpace
    scale: float | np.ndarray | None = None
    df: float = 5.0

    def __post_init__(self):
        if self.space.is_discrete:
            raise GameError("StudentTWalk needs a continuous space")

    @property
    def scales(self) -> np.ndarray:
        if self.scale is None:
            return 0.1 * (self.space.upper - self.space.lower)
        return np.broadcast_to(np.asarray(self.scale, dtype=float), self.space.lower.shape)

    def propose(self, current, rs: RandomSource):
        x = np.atleast_1d(np.asarray(current, dtype=float))
        if not self.space.contains(x):
            raise DomainError(f"state {current!r} outside the space")
        rs.count(1)
        y = x + self.scales * rs.generator.standard_t(self.df, size=x.shape)
        if np.any(y < self.space.lower) or np.any(y > self.space.upper):
            return None
        return y


def default_kernel(space: DecisionSpace, scale=None, df: float = 5.0):
    if space.is_discrete:
        return CircularNeighbor(space)
    return StudentTWalk(space, scale=scale, df=df)


def propose(kernel, current, rs: RandomSource):
    """Draw a candidate from ``kernel`` at ``current``; ``None`` means stay."""
    return kernel.propose(current, rs)

"""Seedable random sources with independent substreams and draw accounting."""

from __future__ import annotations

import numpy as np

__all__ = ["RandomSource", "as_source"]


class RandomSource:
    """A reproducible stream of random numbers.

    Wraps a :class:`numpy.random.Generator` (PCG64) seeded from
    ``(seed, stream)`` through a :class:`numpy.random.SeedSequence`, so
    substreams spawned with distinct indices are independent.

    The ``draws`` attribute counts the samples the solvers request from
    models, proposal kernels and attacker-model samplers. Generators
    consumed directly (chain initialisation, acceptance uniforms) are
    not counted.

    Parameters
    ----------
    seed : int
        Master seed, reduced to 64 bits.
    stream : tuple of int, optional
        Substream path; ``()`` is the root stream.
    """

    def __init__(self, seed: int = 0, stream: tuple[int, ...] = ()):
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self.stream = tuple(int(s) for s in stream)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.PCG64(seq))
        self.draws = 0

    def spawn(self, index: int) -> "RandomSource":
        """Return the independent substream ``stream + (index,)``."""
        return RandomSource(self.seed, self.stream + (int(index),))

    def count(self, n: int = 1) -> None:
        self.draws += int(n)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, stream={self.stream})"


def as_source(rs: RandomSource | int | None) -> RandomSource:
    """Coerce an int seed (or None, meaning seed 0) to a RandomSource."""
    if isinstance(rs, RandomSource):
        return rs
    return RandomSource(0 if rs is None else rs)

"""Reproducible random streams.

Every sampler in the package takes an explicit :class:`RngSeed`.  A seed is a
master seed plus a stream path; the pair is hashed through
:class:`numpy.random.SeedSequence` into the key of a Philox4x64 counter-based
generator.  Streams with different paths are statistically independent, and a
given ``(master_seed, stream_index)`` always reproduces the same draws on any
platform running the same numpy bit-generator version.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

ENV_SEED = "NETSENS_SEED"
DEFAULT_SEED = 20171018


def _as_path(stream: int | Iterable[int]) -> tuple[int, ...]:
    if isinstance(stream, (int, np.integer)):
        path = (int(stream),)
    else:
        path = tuple(int(s) for s in stream)
    if any(s < 0 for s in path):
        raise ValueError(f"stream indices must be non-negative, got {path}")
    return path


@dataclass(frozen=True)
class RngSeed:
    """Identifies one pseudo-random stream.

    Attributes:
        master_seed: 64-bit unsigned master seed.
        stream_index: path of non-negative integers selecting a sub-stream.
            ``RngSeed(s, (3, 1))`` is the stream reached by ``RngSeed(s).child(3, 1)``.
    """

    master_seed: int
    stream_index: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "stream_index", _as_path(self.stream_index))

    def child(self, *index: int) -> RngSeed:
        """Return the sub-stream ``self.stream_index + index``."""
        return RngSeed(self.master_seed, self.stream_index + _as_path(index))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_index)
        return np.random.Generator(np.random.Philox(ss))


def as_seed(seed: RngSeed | int | None) -> RngSeed:
    """Coerce ``seed`` to an :class:`RngSeed`.

    ``None`` falls back to the ``NETSENS_SEED`` environment variable, then to a
    fixed package default, so unseeded calls are still reproducible.
    """
    if isinstance(seed, RngSeed):
        return seed
    if seed is None:
        seed = int(os.environ.get(ENV_SEED, DEFAULT_SEED))
    return RngSeed(int(seed))


SeedLike = Union[RngSeed, int, np.random.Generator, None]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """A generator for ``seed``; an existing generator is passed through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return as_seed(seed).generator()

"""Per-trial random streams.

Every draw in a simulation comes from a stream keyed by
``(master_seed, trial_id, role)``. The key seeds a Philox counter-based bit
generator, so trials can run in any order or in any process and still produce
the same numbers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1


class Role(enum.IntEnum):
    CHANNEL_H = 0
    CHANNEL_G = 1
    MESSAGE = 2
    NOISE_B = 3
    NOISE_E = 4


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    trial_id: int
    role: Role

    def __post_init__(self):
        if self.trial_id < 0:
            raise ValueError(f"trial_id must be non-negative, got {self.trial_id}")
        object.__setattr__(self, "role", Role(self.role))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence([self.master_seed & _U64, self.trial_id, int(self.role)])
        return np.random.Generator(np.random.Philox(seq))


def gaussian_matrix(rows: int, cols: int, variance: float, stream: RngStream) -> np.ndarray:
    """``rows x cols`` matrix of i.i.d. N(0, variance) entries."""
    if variance < 0:
        raise ValueError(f"variance must be non-negative, got {variance}")
    return np.sqrt(variance) * stream.generator().standard_normal((rows, cols))


def gaussian_vector(n: int, variance: float, stream: RngStream) -> np.ndarray:
    return gaussian_matrix(n, 1, variance, stream)[:, 0]


def sample_message(m: int, n_t: int, stream: RngStream) -> np.ndarray:
    """Uniform symbols from the constellation ``{0, ..., m-1}``."""
    if m < 2:
        raise ValueError(f"constellation size must be at least 2, got {m}")
    if n_t < 1:
        raise ValueError(f"n_t must be positive, got {n_t}")
    return stream.generator().integers(0, m, size=n_t, dtype=np.int64)

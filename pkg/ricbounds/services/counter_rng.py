"""Counter-based SplitMix64 generator with a Box-Muller normal transform.

Word i of stream s under seed S is

    mix64(key + (i + 1) * 0x9E3779B97F4A7C15)   (mod 2**64)
    key = S xor (s * 0xD1B54A32D192ED03)

where mix64 is the SplitMix64 finalizer. Uniforms are (word >> 11) * 2**-53 in
[0, 1). Normals come in pairs from two consecutive uniforms u1, u2:

    r = sqrt(-2 log(1 - u1)),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)

Any draw can be reproduced from (seed, stream, counter) alone.
"""

from __future__ import annotations

import numpy as np

from ricbounds.core.errors import DomainError
from ricbounds.core.models import MAX_SEED


GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
STREAM_MULTIPLIER = 0xD1B54A32D192ED03
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_MINUS_53 = 2.0**-53


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (multiplications wrap)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX_1
        z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


class CounterRng:
    """Stateless-per-draw generator; ``position`` only tracks the next counter."""

    def __init__(self, seed: int, stream: int = 0) -> None:
        if not (0 <= seed <= MAX_SEED):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        if stream < 0:
            raise DomainError(f"stream must be non-negative, got {stream!r}")
        self.seed = seed
        self.stream = stream
        self.key = np.uint64(seed ^ ((stream * STREAM_MULTIPLIER) & MAX_SEED))
        self.position = 0

    def words_at(self, start: int, count: int) -> np.ndarray:
        counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = self.key + counters * GOLDEN_GAMMA
        return mix64(z)

    def words(self, count: int) -> np.ndarray:
        out = self.words_at(self.position, count)
        self.position += count
        return out

    def uniform(self, count: int) -> np.ndarray:
        return (self.words(count) >> np.uint64(11)).astype(np.float64) * _TWO_POW_MINUS_53

    def normal(self, count: int) -> np.ndarray:
        pairs = (count + 1) // 2
        u = self.uniform(2 * pairs)
        u1, u2 = u[0::2], u[1::2]
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * pairs, dtype=np.float64)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return z[:count]

    def below(self, upper: int) -> int:
        """One integer in [0, upper) as floor(u * upper)."""
        if upper < 1:
            raise DomainError(f"upper must be >= 1, got {upper!r}")
        return min(int(self.uniform(1)[0] * upper), upper - 1)

"""Counter-based random number generation for reproducible synthetic data.

All synthetic-data randomness in this package comes from SplitMix64
(Steele, Lea & Flood; the generator behind Java's SplittableRandom) used
in counter mode: draw ``i`` of a stream seeded with ``s`` is

    mix64(s + (i + 1) * 0x9E3779B97F4A7C15)  mod 2**64

where ``mix64`` is the SplitMix64 finalizer.  Because each draw is a pure
function of (seed, index), streams can be regenerated from any offset and
are identical across platforms and implementations.  Gaussian variates use
the Box-Muller transform on consecutive pairs of uniforms, so normal draw
``i`` depends only on uniform draws ``2*(i//2)`` and ``2*(i//2)+1`` of its
stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

# float64 has 53 mantissa bits; top 53 bits of a u64 give a uniform in [0, 1)
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK
    return z ^ (z >> 31)


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


def derive_seed(base: int, *parts: object) -> int:
    """Derive a substream seed from a base seed and a label path.

    Each part is hashed via FNV-1a over ``str(part).encode("utf-8")`` and
    folded into the state with mix64, so the result does not depend on
    Python's per-process string hashing.
    """
    h = mix64(base)
    for part in parts:
        h = mix64((h ^ _fnv1a(str(part).encode("utf-8"))) + _GOLDEN)
    return h


def _mix64_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
        return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class CounterRng:
    """Stateless SplitMix64 stream; every draw is addressed by its index."""

    seed: int

    def raw(self, start: int, count: int) -> np.ndarray:
        """Raw 64-bit outputs for draw indices [start, start + count)."""
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            state = np.uint64(self.seed & _MASK) + idx * np.uint64(_GOLDEN)
        return _mix64_array(state)

    def uniforms(self, count: int, start: int = 0) -> np.ndarray:
        """Uniforms in [0, 1) for draw indices [start, start + count)."""
        bits = self.raw(start, count) >> np.uint64(11)
        return bits.astype(np.float64) * _INV_2_53

    def normals(self, count: int, start: int = 0) -> np.ndarray:
        """Standard normals for draw indices [start, start + count).

        Draws are produced in Box-Muller pairs from uniform indices
        (2p, 2p + 1), so any contiguous slice of a stream is reproducible
        independently of how earlier draws were consumed.
        """
        if count == 0:
            return np.zeros(0)
        first_pair = start // 2
        last_pair = (start + count - 1) // 2
        n_pairs = last_pair - first_pair + 1
        bits = self.raw(2 * first_pair, 2 * n_pairs)
        mant = (bits >> np.uint64(11)).astype(np.float64)
        # u1 in (0, 1] keeps the log finite; u2 in [0, 1)
        u1 = (mant[0::2] + 1.0) * _INV_2_53
        u2 = mant[1::2] * _INV_2_53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        pairs = np.empty(2 * n_pairs)
        pairs[0::2] = radius * np.cos(angle)
        pairs[1::2] = radius * np.sin(angle)
        lo = start - 2 * first_pair
        return pairs[lo:lo + count]

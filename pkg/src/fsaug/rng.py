"""SplitMix64 streams: the deterministic RNG contract of the whole toolkit.

Every random decision in the pipeline is drawn from an RngStream so that a
(master_seed, image index) pair reproduces identical bytes on any platform.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    """One SplitMix64 output scramble (finalizer) of a 64-bit value."""
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """SplitMix64 generator. Single-owner: never share one across workers."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def uniform_f64(self) -> float:
        # 53 top bits -> [0, 1)
        return (self.next() >> 11) * 2.0**-53

    def uniform_int(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        return int(self.uniform_f64() * n)


def derive_stream(master_seed: int, index: int) -> RngStream:
    """Independent-looking stream for item `index` under one master seed."""
    return RngStream(_mix((master_seed ^ (index * GOLDEN_GAMMA)) & MASK64))

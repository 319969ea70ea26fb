"""Keyed deterministic draws for the stochastic mask-assembly steps.

Every random choice a mask generator makes is a pure function of
(seed, weather kind, purpose tag, anchor coordinates).  Draws are therefore
reproducible across processes and platforms, independent of iteration order,
and free of shared state.  Keying per anchor also buys a useful property:
raising an inclusion probability can only grow the set of accepted anchors,
never reshuffle it.
"""

from __future__ import annotations

import hashlib
import struct

from .patterns import WeatherKind

_MAX_SEED = 2**64 - 1
_U64_SPAN = float(2**64)


def _digest(seed: int, kind: WeatherKind, purpose: str, x: int, y: int) -> int:
    msg = struct.pack("<Q", seed) + kind.value.encode() + b"/" + purpose.encode()
    msg += struct.pack("<qq", x, y)
    return int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "big")


def unit_draw(seed: int, kind: WeatherKind, purpose: str, x: int, y: int) -> float:
    """Uniform float in [0, 1), stable for the given key."""
    return _digest(seed, kind, purpose, x, y) / _U64_SPAN


def int_draw(
    seed: int, kind: WeatherKind, purpose: str, x: int, y: int, n: int
) -> int:
    """Uniform integer in [0, n), stable for the given key."""
    if n < 1:
        raise ValueError(f"draw range must be >= 1, got {n!r}")
    return _digest(seed, kind, purpose, x, y) % n


def check_seed(seed: int) -> int:
    if not 0 <= seed <= _MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed!r}")
    return seed

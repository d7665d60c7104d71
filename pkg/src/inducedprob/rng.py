"""Counter-based SplitMix64 random source.

Output ``i`` of the stream seeded with ``s`` is ``mix(s + (i + 1) * GAMMA)``
modulo 2**64, where ``mix`` is the SplitMix64 finaliser.  This is exactly
the sequence produced by the usual sequential SplitMix64 generator, but any
position can be computed directly, so a trial's random numbers depend only on
``(seed, stream, trial index)`` and never on how trials are batched.

Reference outputs for seed 0 are the first values of the published
SplitMix64 sequence: ``0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_U = np.uint64


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int, count: int) -> list[int]:
    """First ``count`` outputs, computed the slow sequential way."""
    state = seed & MASK64
    out = []
    for _ in range(count):
        state = (state + GAMMA) & MASK64
        out.append(mix64(state))
    return out


def derive(seed: int, *keys: int) -> int:
    """Stream seed for ``keys`` under ``seed``."""
    s = seed & MASK64
    for k in keys:
        s = mix64(s + ((k & MASK64) + 1) * GAMMA)
    return s


def block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the stream as a uint64 array."""
    with np.errstate(over="ignore"):
        i = np.arange(start + 1, start + count + 1, dtype=_U)
        z = _U(seed & MASK64) + i * _U(GAMMA)
        z = (z ^ (z >> _U(30))) * _U(_M1)
        z = (z ^ (z >> _U(27))) * _U(_M2)
        return z ^ (z >> _U(31))


def mulhi(x: np.ndarray, m) -> np.ndarray:
    """High 64 bits of the 128-bit product ``x * m`` (elementwise, exact)."""
    m = np.asarray(m, dtype=_U)
    lo32 = _U(0xFFFFFFFF)
    s32 = _U(32)
    with np.errstate(over="ignore"):
        xh, xl = x >> s32, x & lo32
        mh, ml = m >> s32, m & lo32
        t = xl * ml
        u = xh * ml + (t >> s32)
        v = xl * mh + (u & lo32)
        return xh * mh + (u >> s32) + (v >> s32)


def below(x: np.ndarray, m) -> np.ndarray:
    """Map uniform 64-bit words to integers in ``[0, m)`` by multiply-shift."""
    return mulhi(x, m)

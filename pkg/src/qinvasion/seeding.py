"""Stateless 64-bit seed mixing.

Per-node random draws are a pure function of (run seed, generation, node,
stream), so the order in which nodes are processed never changes a result.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on Python ints."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed; order matters."""
    h = GOLDEN
    for p in parts:
        h = mix64(h ^ mix64((int(p) + GOLDEN) & MASK64))
    return h


def numpy_rng(seed: int, purpose: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & MASK64, purpose])))


_U_GOLDEN = np.uint64(GOLDEN)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _mix64_u(z):
    z = (z ^ (z >> _S30)) * _U_M1
    z = (z ^ (z >> _S27)) * _U_M2
    return z ^ (z >> _S31)


@njit(cache=True)
def generation_key(seed, generation):
    return _mix64_u(np.uint64(seed) ^ _mix64_u(np.uint64(generation) + _U_GOLDEN))


@njit(cache=True)
def node_uniform(key, node, stream):
    """Uniform double in [0, 1) for one (generation key, node, stream) triple."""
    z = _mix64_u(key ^ _mix64_u(np.uint64(node) * np.uint64(4) + np.uint64(stream) + _U_GOLDEN))
    return np.float64(z >> _S11) * _INV53

"""Deterministic counter-based random streams keyed by lattice index.

Perturbation generators need a draw that depends only on
``(seed, m, n, draw_label, slot)`` so that point sets are reproducible
across window sizes and enumeration orders.  numpy's ``Philox`` cannot be
keyed per element of a vectorized index array, so we use the SplitMix64
output function as a keyed mixer: it is a bijective avalanche permutation
of 64-bit words, which is plenty for geometric sampling (no cryptographic
claim).  Monte Carlo experiments, which need bulk i.i.d. streams rather
than per-index addressing, use ``numpy.random.Generator(Philox(seed))``
directly (see :mod:`fockpr.sampler`).
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer applied elementwise to a uint64 array.

    Wraparound modulo 2**64 is the point of the arithmetic.
    """
    with np.errstate(over="ignore"):
        z = (x + _GOLDEN).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def _as_u64(values: np.ndarray | int) -> np.ndarray:
    """Map (possibly negative) integers to uint64 by two's complement."""
    arr = np.asarray(values, dtype=np.int64)
    return arr.view(np.uint64) if arr.dtype == np.int64 else arr.astype(np.uint64)


def keyed_uniform(seed: int, m: np.ndarray, n: np.ndarray, label: int, slot: int) -> np.ndarray:
    """Uniform [0, 1) samples addressed by (seed, m, n, label, slot).

    ``m`` and ``n`` are integer arrays of equal shape (lattice indices);
    ``label`` distinguishes independent draws at the same index and
    ``slot`` distinguishes scalar components of one draw.  The value at a
    given key never depends on the array shapes or on any other key.
    """
    m64 = _as_u64(m)
    n64 = _as_u64(n)
    h = _mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ np.uint64(0xA076_1D64_78BD_642F))
    h = _mix(h ^ m64)
    h = _mix(h ^ n64)
    h = _mix(h ^ np.uint64((label & 0xFFFF) << 16 | (slot & 0xFFFF)))
    # 53 high-quality bits -> double in [0, 1)
    return (h >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def keyed_disk(seed: int, m: np.ndarray, n: np.ndarray, label: int) -> np.ndarray:
    """Uniform samples on the closed unit disk, keyed like :func:`keyed_uniform`.

    Area-uniform: radius sqrt(u1), angle 2*pi*u2.
    """
    u1 = keyed_uniform(seed, m, n, label, 0)
    u2 = keyed_uniform(seed, m, n, label, 1)
    r = np.sqrt(u1)
    return r * np.exp(2j * np.pi * u2)

"""Recursive Hamiltonian cycles of Q_{2^r}.

Cycle ``delta`` of ``Q_{2^r}`` is a bijection from positions
``[0, 2**(2**r))`` onto the vertices.  ``delta`` is an (r-1)-bit vector
``(d_1, ..., d_{r-1})`` packed with ``d_1`` in bit 0, so the cycles whose
first index bit is 0 are exactly the even integers.

For ``r >= 2`` with ``delta = (eta, d)`` and ``w = L*u + v`` where ``L`` is
the sub-cycle length::

    d == 0:  g(w) = (g_eta(v - u), g_eta(u))
    d == 1:  g(w) = (g_eta(u), g_eta(v - u))

with the first component in the low half of the bit vector.  Every function
accepts either a Python int or a uint64 array for positions/vertices.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .cube_core import VERTEX_DTYPE, CycleEmbedding, as_vertices
from .errors import InvalidIndex, InvalidParameter, ResourceLimit

MAX_R = 5
TABLE_MAX_R = 4

# positions 0..3 -> (0,0), (1,0), (1,1), (0,1); the table is its own inverse
_BASE = np.array([0, 1, 3, 2], dtype=VERTEX_DTYPE)


def cycle_length(r: int) -> int:
    return 1 << (1 << r)


def num_cycles(r: int) -> int:
    return 1 << (r - 1)


def delta_index(bits: Sequence[int]) -> int:
    """Pack ``(d_1, ..., d_{r-1})`` into the integer used everywhere else."""
    return sum((b & 1) << i for i, b in enumerate(bits))


def delta_bits(delta: int, r: int) -> tuple[int, ...]:
    return tuple(delta >> i & 1 for i in range(r - 1))


def _check(r: int, delta: int) -> None:
    if not 1 <= r <= MAX_R:
        raise InvalidParameter(f"r must be in [1, {MAX_R}], got {r}")
    if not 0 <= delta < num_cycles(r):
        raise InvalidIndex(f"delta {delta} out of range for r={r}")


def _split(r: int, delta: int) -> tuple[int, int, int, int]:
    half = 1 << (r - 1)
    return half, (1 << half) - 1, delta & ((1 << (r - 2)) - 1), delta >> (r - 2) & 1


def _eval(r: int, delta: int, w: np.ndarray) -> np.ndarray:
    if r == 1:
        return _BASE[w & 3]
    half, mask, sub, last = _split(r, delta)
    u = w >> half
    v = w & mask
    # add L instead of subtracting so unsigned scalars never wrap
    a = _sub_eval(r - 1, sub, (v + (mask + 1) - u) & mask)
    b = _sub_eval(r - 1, sub, u)
    if last:
        a, b = b, a
    return a | (b << half)


def _inv(r: int, delta: int, x: np.ndarray) -> np.ndarray:
    if r == 1:
        return _BASE[x & 3]
    half, mask, sub, last = _split(r, delta)
    lo = x & mask
    hi = x >> half
    if last:
        lo, hi = hi, lo
    u = _sub_inv(r - 1, sub, hi)
    v = (_sub_inv(r - 1, sub, lo) + u) & mask
    return (u << half) | v


def _sub_eval(r, delta, w):
    if r <= TABLE_MAX_R:
        return cycle_table(r, delta)[w]
    return _eval(r, delta, w)


def _sub_inv(r, delta, x):
    if r <= TABLE_MAX_R:
        return inverse_table(r, delta)[x]
    return _inv(r, delta, x)


@lru_cache(maxsize=None)
def cycle_table(r: int, delta: int) -> np.ndarray:
    """Vertex at each position of cycle ``delta`` (read-only, r <= 4)."""
    _check(r, delta)
    if r > TABLE_MAX_R:
        raise ResourceLimit(f"cycle tables are only built for r <= {TABLE_MAX_R}")
    t = _eval(r, delta, np.arange(cycle_length(r), dtype=VERTEX_DTYPE))
    t.flags.writeable = False
    return t


@lru_cache(maxsize=None)
def inverse_table(r: int, delta: int) -> np.ndarray:
    t = cycle_table(r, delta)
    inv = np.empty_like(t)
    inv[t] = np.arange(len(t), dtype=VERTEX_DTYPE)
    inv.flags.writeable = False
    return inv


def _wrap(fn, r, delta, x, limit):
    _check(r, delta)
    arr = as_vertices(x)
    if np.any(arr >= limit):
        raise InvalidIndex(f"argument out of range for r={r}")
    out = fn(r, delta, arr)
    return int(out) if out.ndim == 0 else out


def g_eval(r: int, delta: int, w):
    """Vertex at position ``w`` of cycle ``delta`` in Q_{2^r}."""
    return _wrap(_sub_eval, r, delta, w, cycle_length(r))


def g_inverse(r: int, delta: int, v):
    """Position of vertex ``v`` on cycle ``delta``."""
    return _wrap(_sub_inv, r, delta, v, cycle_length(r))


def advance(r: int, delta: int, v, direction: int = 1):
    """Step one edge along cycle ``delta``; ``direction`` is +1 or -1."""
    if direction not in (1, -1):
        raise InvalidParameter("direction must be +1 or -1")
    _check(r, delta)
    arr = as_vertices(v)
    mask = VERTEX_DTYPE(cycle_length(r) - 1)
    pos = _sub_inv(r, delta, arr)
    step = VERTEX_DTYPE(1) if direction == 1 else mask
    pos = (pos + step) & mask
    out = _sub_eval(r, delta, pos)
    return int(out) if out.ndim == 0 else out


def ham_cycle(r: int, delta: int) -> CycleEmbedding:
    return CycleEmbedding(1 << r, cycle_table(r, delta))


def ham_decomposition(r: int) -> list[CycleEmbedding]:
    """All 2**(r-1) cycles of Q_{2^r}; only materializable for r <= 4."""
    if r > TABLE_MAX_R:
        raise ResourceLimit(f"Q_{1 << r} cycles are not materialized; use point-wise evaluation")
    if r < 1:
        raise InvalidParameter("r must be >= 1")
    return [ham_cycle(r, d) for d in range(num_cycles(r))]


def rho1(v, dim: int):
    """Sum of base-cycle positions of consecutive 2-bit blocks, mod 4."""
    if dim < 2 or dim % 2:
        raise InvalidParameter(f"1-value needs an even dimension, got {dim}")
    arr = as_vertices(v)
    total = np.zeros_like(arr)
    for i in range(dim // 2):
        total += _BASE[(arr >> VERTEX_DTYPE(2 * i)) & VERTEX_DTYPE(3)]
    out = total & VERTEX_DTYPE(3)
    return int(out) if out.ndim == 0 else out


def rho2(v, dim: int):
    """Sum of cycle-0 positions in Q_4 of consecutive 4-bit blocks, mod 16."""
    if dim < 4 or dim % 4:
        raise InvalidParameter(f"2-value needs a dimension divisible by 4, got {dim}")
    arr = as_vertices(v)
    inv = inverse_table(2, 0)
    total = np.zeros_like(arr)
    for i in range(dim // 4):
        total += inv[(arr >> VERTEX_DTYPE(4 * i)) & VERTEX_DTYPE(15)]
    out = total & VERTEX_DTYPE(15)
    return int(out) if out.ndim == 0 else out

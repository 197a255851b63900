"""Disjoint vertex-originating path systems (DVOP[k]) on Q_{2^r} and Q_{2n}.

A DVOP[k] assigns to every vertex ``v`` a length-``k`` path starting at
``v`` such that all the paths are pairwise edge-disjoint.  The Hamiltonian
based systems walk one edge along each of ``k`` distinct cycles from
:mod:`cubepaths.ham`; the unused cycles form the complement.

Paths are computed on demand (``path_of`` / ``paths``); nothing is tabulated
beyond the cycle tables for r <= 4, so r = 5 stays usable point-wise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ham
from .cube_core import VERTEX_DTYPE, CycleEmbedding, PathEmbedding, as_vertices, parity_array, staircase
from .errors import InvalidParameter, ResourceLimit, Unsupported

# step directions for the seven-cycle walk (second and sixth cycles reversed)
MID_DIRECTIONS = (1, -1, 1, 1, 1, -1, 1)

# (family, index within family, direction); family 0 = cycles with d_1 = 0
WIDE_STEPS = (
    (0, 0, 1), (0, 1, -1), (0, 2, 1), (0, 3, 1),
    (1, 0, 1), (1, 1, -1), (1, 2, 1), (1, 3, 1),
    (0, 4, 1), (0, 5, -1), (0, 6, 1), (0, 7, 1),
    (1, 4, 1), (1, 5, -1), (1, 6, 1),
)


@dataclass(frozen=True, eq=False)
class Dvop:
    """A DVOP[k] on Q_dim plus the Hamiltonian cycles left over.

    ``steps`` lists ``(delta, direction)`` for cycle-walking systems and is
    empty for the half-dimension construction (``kind == "half"``).
    ``complement`` holds the cycle indices of the unused cycles.
    """

    dim: int
    k: int
    kind: str
    r: int | None
    steps: tuple[tuple[int, int], ...]
    complement: tuple[int, ...]

    def vertices(self) -> np.ndarray:
        if self.dim > 30:
            raise ResourceLimit(f"cannot enumerate the vertices of Q_{self.dim}")
        return np.arange(1 << self.dim, dtype=VERTEX_DTYPE)

    def paths(self, vs) -> np.ndarray:
        """Paths from each vertex in ``vs`` as an array of shape ``(len(vs), k + 1)``."""
        vs = as_vertices(vs).reshape(-1)
        if self.kind == "half":
            return _half_paths(vs, self.dim // 2)
        out = np.empty((len(vs), self.k + 1), dtype=VERTEX_DTYPE)
        out[:, 0] = vs
        cur = vs
        for i, (delta, direction) in enumerate(self.steps):
            cur = ham.advance(self.r, delta, cur, direction)
            out[:, i + 1] = cur
        return out

    def path_of(self, v: int) -> PathEmbedding:
        return PathEmbedding(self.dim, tuple(self.paths([v])[0].tolist()))

    def complement_cycles(self) -> list[CycleEmbedding]:
        return [ham.ham_cycle(self.r, d) for d in self.complement]

    @property
    def used_cycles(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.steps)


def _half_paths(vs: np.ndarray, n: int) -> np.ndarray:
    """Walk the staircase in the low half from even vertices, in the high half from odd ones."""
    stairs = staircase(n)
    lowmask = VERTEX_DTYPE((1 << n) - 1)
    alpha = vs & lowmask
    beta = vs >> VERTEX_DTYPE(n)
    even = (parity_array(vs) == 0)[:, None]
    low_walk = (alpha[:, None] ^ stairs[None, :]) | (beta[:, None] << VERTEX_DTYPE(n))
    high_walk = alpha[:, None] | ((beta[:, None] ^ stairs[None, :]) << VERTEX_DTYPE(n))
    return np.where(even, low_walk, high_walk)


def _check_r(r: int) -> None:
    if not 1 <= r <= ham.MAX_R:
        raise InvalidParameter(f"r must be in [1, {ham.MAX_R}], got {r}")


def _ham_dvop(r: int, kind: str, steps: list[tuple[int, int]]) -> Dvop:
    used = {d for d, _ in steps}
    rest = tuple(d for d in range(ham.num_cycles(r)) if d not in used)
    return Dvop(1 << r, len(steps), kind, r, tuple(steps), rest)


def dvop_basic(r: int, k: int) -> Dvop:
    """Forward steps along cycles 0, 1, ..., k-1 (k <= 3)."""
    _check_r(r)
    if not 0 <= k <= min(3, ham.num_cycles(r)):
        raise InvalidParameter(f"dvop_basic needs 0 <= k <= min(3, {ham.num_cycles(r)}), got {k}")
    return _ham_dvop(r, "basic", [(d, 1) for d in range(k)])


def dvop_half(n: int) -> Dvop:
    """DVOP[n] on Q_{2n} with empty complement."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    r = n.bit_length() if n & (n - 1) == 0 else None
    return Dvop(2 * n, n, "half", r, (), ())


def dvop_mid(r: int, k: int) -> Dvop:
    """Up to seven steps along cycles 0..6 with directions (+,-,+,+,+,-,+)."""
    _check_r(r)
    if r < 4:
        raise InvalidParameter(f"dvop_mid needs r >= 4, got {r}")
    if not 0 <= k <= 7:
        raise InvalidParameter(f"dvop_mid needs 0 <= k <= 7, got {k}")
    return _ham_dvop(r, "mid", [(d, MID_DIRECTIONS[d]) for d in range(k)])


def dvop_wide(r: int, k: int) -> Dvop:
    """Up to fifteen steps alternating blocks of d_1 = 0 and d_1 = 1 cycles."""
    _check_r(r)
    if r < 5:
        raise InvalidParameter(f"dvop_wide needs r >= 5, got {r}")
    if not 0 <= k <= 15:
        raise InvalidParameter(f"dvop_wide needs 0 <= k <= 15, got {k}")
    steps = [(2 * idx + family, direction) for family, idx, direction in WIDE_STEPS[:k]]
    return _ham_dvop(r, "wide", steps)


def dvop_for(r: int, k: int) -> Dvop:
    """Pick a construction for DVOP[k] on Q_{2^r}."""
    _check_r(r)
    half = ham.num_cycles(r)
    if 0 <= k <= min(3, half):
        return dvop_basic(r, k)
    if k == half:
        return dvop_half(half)
    if r >= 4 and k <= 7:
        return dvop_mid(r, k)
    if r >= 5 and k <= 15:
        return dvop_wide(r, k)
    raise Unsupported(f"no DVOP[{k}] construction for Q_{1 << r}")


def supported_k(r: int) -> list[int]:
    out = []
    for k in range(ham.num_cycles(r) + 1):
        try:
            dvop_for(r, k)
        except Unsupported:
            continue
        out.append(k)
    return out

"""Hypercube vertex/edge model.

Vertices of Q_q are unsigned integers below ``2**q``.  Coordinate ``i``
(1-based, as written in the literature) lives in bit ``i - 1``, so
coordinate 1 is the least significant bit.  An edge is identified by the
endpoint whose varying bit is clear, together with that bit's index.

Translation table::

    coordinate 1  <->  bit 0   (mask 0b1)
    coordinate 2  <->  bit 1   (mask 0b10)
    coordinate q  <->  bit q-1
    the tuple (a1, ..., aq)  <->  sum(a_i << (i - 1))

Bulk operations work on ``numpy.uint64`` arrays; a block of paths is a 2-D
array with one path per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import InvalidIndex, InvalidParameter, ResourceLimit

VERTEX_DTYPE = np.uint64

#: Largest dimension for which edges may be materialized.
MAX_MATERIAL_DIM = 30
#: Default cap on the number of edges an operation may materialize.
DEFAULT_MAX_EDGES = 1 << 28
#: Target number of vertex entries per emitted block.
BLOCK_ENTRIES = 1 << 21

_max_edges = DEFAULT_MAX_EDGES


def set_max_edges(n: int) -> None:
    """Override the global materialization cap (used by the CLI)."""
    global _max_edges
    if n < 1:
        raise InvalidParameter("max edges must be positive")
    _max_edges = int(n)


def get_max_edges() -> int:
    return _max_edges


def num_edges(q: int) -> int:
    return q << (q - 1) if q > 0 else 0


def require_materializable(q: int, max_edges: int | None = None) -> None:
    """Raise ResourceLimit unless all edges of Q_q may be materialized."""
    cap = _max_edges if max_edges is None else max_edges
    if q > MAX_MATERIAL_DIM:
        raise ResourceLimit(f"Q_{q} exceeds the materialization limit (q <= {MAX_MATERIAL_DIM})")
    if num_edges(q) > cap:
        raise ResourceLimit(f"Q_{q} has {num_edges(q)} edges, above the cap of {cap}")


def _check_dim(q: int) -> None:
    if not 1 <= q <= 64:
        raise InvalidParameter(f"dimension must be in [1, 64], got {q}")


def _check_vertex(v: int, q: int) -> None:
    if not 0 <= v < (1 << q):
        raise InvalidIndex(f"vertex {v:#x} is not in Q_{q}")


# ---------------------------------------------------------------------------
# point-wise operations


def parity(v: int, q: int | None = None) -> int:
    """Coordinate sum mod 2."""
    if q is not None:
        _check_vertex(v, q)
    return int(v).bit_count() & 1


class EdgeRef(NamedTuple):
    base: int
    j: int

    def endpoints(self) -> tuple[int, int]:
        return self.base, self.base | (1 << self.j)


class CoordOps(NamedTuple):
    flip: int
    even: int
    odd: int
    edge: EdgeRef


def flip(v: int, j: int) -> int:
    return v ^ (1 << j)


def to_even(v: int, j: int) -> int:
    """Adjust bit ``j`` so that the result has parity 0."""
    return v ^ (parity(v) << j)


def to_odd(v: int, j: int) -> int:
    return to_even(v, j) ^ (1 << j)


def edge_ref(v: int, j: int) -> EdgeRef:
    return EdgeRef(v & ~(1 << j), j)


def coord_ops(v: int, j: int, q: int) -> CoordOps:
    _check_vertex(v, q)
    if not 0 <= j < q:
        raise InvalidIndex(f"coordinate {j} not in [0, {q})")
    return CoordOps(flip(v, j), to_even(v, j), to_odd(v, j), edge_ref(v, j))


def edge_between(a: int, b: int) -> EdgeRef:
    d = a ^ b
    if d == 0 or d & (d - 1):
        raise InvalidIndex(f"{a:#x} and {b:#x} are not adjacent")
    return EdgeRef(min(a, b), d.bit_length() - 1)


def edge_index(e: EdgeRef, q: int) -> int:
    base, j = e
    if not 0 <= j < q or base >> j & 1:
        raise InvalidIndex(f"{e} is not a canonical edge of Q_{q}")
    _check_vertex(base, q)
    return base * q + j


def edge_from_index(idx: int, q: int) -> EdgeRef:
    base, j = divmod(idx, q)
    return EdgeRef(base, j)


# ---------------------------------------------------------------------------
# vectorized helpers


def as_vertices(x) -> np.ndarray:
    return np.asarray(x, dtype=VERTEX_DTYPE)


def parity_array(v: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(as_vertices(v)) & 1).astype(VERTEX_DTYPE)


def low_bit_index(d: np.ndarray) -> np.ndarray:
    """Index of a single set bit (``d`` must be a power of two)."""
    return (np.frexp(d.astype(np.float64))[1] - 1).astype(VERTEX_DTYPE)


def edge_indices(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Edge indices of adjacent vertex pairs (no adjacency check)."""
    return np.minimum(a, b) * VERTEX_DTYPE(q) + low_bit_index(a ^ b)


def even_vertices(q: int) -> np.ndarray:
    """All parity-0 vertices of Q_q in increasing order."""
    v = np.arange(1 << q, dtype=VERTEX_DTYPE)
    return v[parity_array(v) == 0]


def all_edges(q: int) -> np.ndarray:
    """Every edge of Q_q as a ``(q * 2**(q-1), 2)`` array, ordered by edge index."""
    require_materializable(q)
    base = np.repeat(np.arange(1 << q, dtype=VERTEX_DTYPE), q)
    j = np.tile(np.arange(q, dtype=VERTEX_DTYPE), 1 << q)
    keep = ((base >> j) & 1) == 0
    base, j = base[keep], j[keep]
    return np.stack([base, base | (VERTEX_DTYPE(1) << j)], axis=1)


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class PathEmbedding:
    dim: int
    verts: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.verts) - 1

    def edges(self) -> list[EdgeRef]:
        return [edge_between(a, b) for a, b in zip(self.verts, self.verts[1:])]

    def is_valid(self) -> bool:
        vs = self.verts
        if len(set(vs)) != len(vs) or any(not 0 <= v < (1 << self.dim) for v in vs):
            return False
        return all((a ^ b).bit_count() == 1 for a, b in zip(vs, vs[1:]))

    def reversed(self) -> PathEmbedding:
        return PathEmbedding(self.dim, self.verts[::-1])


@dataclass(frozen=True, eq=False)
class CycleEmbedding:
    """A closed walk stored as its vertex sequence (last vertex joins the first)."""

    dim: int
    verts: np.ndarray

    def __len__(self) -> int:
        return len(self.verts)

    def edge_array(self) -> np.ndarray:
        v = self.verts
        return np.stack([v, np.roll(v, -1)], axis=1)

    def is_valid(self) -> bool:
        v = self.verts
        if len(v) % 2 or len(np.unique(v)) != len(v):
            return False
        return bool(np.all(np.bitwise_count(v ^ np.roll(v, -1)) == 1))


def f_gamma(q: int, gamma: int, *, restrict: bool = True) -> PathEmbedding:
    """The length-q path whose k-th vertex is ``(2**k - 1) ^ gamma``.

    With ``restrict`` the translation must have even parity, which is what
    makes the family over all such gammas an edge partition.
    """
    _check_dim(q)
    _check_vertex(gamma, q)
    if restrict and parity(gamma):
        raise InvalidIndex(f"gamma={gamma:#x} has odd parity")
    return PathEmbedding(q, tuple(((1 << k) - 1) ^ gamma for k in range(q + 1)))


def staircase(q: int) -> np.ndarray:
    """The vertices ``2**k - 1`` for k = 0..q."""
    return (VERTEX_DTYPE(1) << np.arange(q + 1, dtype=VERTEX_DTYPE)) - VERTEX_DTYPE(1)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A claimed partition of E(Q_q) into paths of length m.

    Paths are produced lazily as 2-D blocks of shape ``(n, m + 1)``; the
    claim is only checked by :func:`cubepaths.verify.verify_decomposition`.
    """

    q: int
    m: int
    count: int
    _source: Callable[[], Iterable[np.ndarray]] = field(repr=False)

    def blocks(self) -> Iterator[np.ndarray]:
        for block in self._source():
            if len(block):
                yield block

    def __iter__(self) -> Iterator[PathEmbedding]:
        for block in self.blocks():
            for row in block.tolist():
                yield PathEmbedding(self.q, tuple(row))

    def __len__(self) -> int:
        return self.count

    def to_array(self) -> np.ndarray:
        parts = list(self.blocks())
        if not parts:
            return np.empty((0, self.m + 1), dtype=VERTEX_DTYPE)
        return np.concatenate(parts)

    @classmethod
    def from_array(cls, q: int, arr: np.ndarray) -> Decomposition:
        arr = as_vertices(arr)
        return cls(q, arr.shape[1] - 1, arr.shape[0], lambda: iter((arr,)))

    @classmethod
    def from_paths(cls, q: int, m: int, paths: Sequence[Sequence[int]]) -> Decomposition:
        arr = as_vertices(paths).reshape(len(paths), m + 1)
        return cls(q, m, len(paths), lambda: iter((arr,)))


def base_partition(q: int) -> Decomposition:
    """Q_q as 2**(q-1) translates of the staircase path."""
    _check_dim(q)
    require_materializable(q)
    stairs = staircase(q)
    gammas = even_vertices(q)
    rows = max(1, BLOCK_ENTRIES // (q + 1))

    def source():
        for i in range(0, len(gammas), rows):
            yield gammas[i:i + rows, None] ^ stairs[None, :]

    return Decomposition(q, q, 1 << (q - 1), source)


def edge_decomposition(q: int) -> Decomposition:
    """Every edge as its own length-1 path."""
    _check_dim(q)
    edges = all_edges(q)
    return Decomposition(q, 1, len(edges), lambda: iter((edges,)))

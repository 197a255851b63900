"""Stretch (m*G) and sharp (m#G) transforms of hypercubes and their embeddings.

Layouts:

* ``Q_{mq}`` is viewed as ``q`` blocks of ``m`` bits; block ``s`` occupies
  bits ``[s*m, (s+1)*m)``.
* ``Q_{2q}`` for the doubling maps is ``(first, second)`` with the first
  factor in the low ``q`` bits.
* ``Q_{m+q}`` for the sharp maps is ``(alpha, beta)`` with ``alpha`` in
  the low ``m`` bits.

Every map is available point-wise (``map(vertex)``) and as a vectorized
operation on blocks of paths, which is what the decomposition pipeline uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Sequence, Union

import numpy as np

from .cube_core import (
    BLOCK_ENTRIES,
    VERTEX_DTYPE,
    as_vertices,
    even_vertices,
    low_bit_index,
    parity,
    parity_array,
    require_materializable,
    staircase,
    to_even,
    to_odd,
)
from .errors import InvalidIndex, InvalidParameter

ONE = VERTEX_DTYPE(1)


# ---------------------------------------------------------------------------
# vertices of m*Q_q


@dataclass(frozen=True)
class Base:
    alpha: int


@dataclass(frozen=True)
class Inner:
    """Point ``k`` (``0 < k < m``) on the stretched edge at coordinate ``j``,
    counted from the even-parity endpoint ``alpha``."""

    j: int
    k: int
    alpha: int


StretchedVertex = Union[Base, Inner]


def stretched_vertex(m: int, j: int, k: int, alpha: int) -> StretchedVertex:
    """Normalize the ``k``-th point from ``alpha`` along coordinate ``j``."""
    if not 0 <= k <= m:
        raise InvalidIndex(f"k={k} outside [0, {m}]")
    if k == 0:
        return Base(alpha)
    if k == m:
        return Base(alpha ^ (1 << j))
    if parity(alpha):
        return Inner(j, m - k, alpha ^ (1 << j))
    return Inner(j, k, alpha)


def stretched_vertices(m: int, q: int) -> list[StretchedVertex]:
    """Every vertex of m*Q_q in canonical form."""
    out: list[StretchedVertex] = [Base(a) for a in range(1 << q)]
    for alpha in even_vertices(q).tolist():
        for j in range(q):
            out.extend(Inner(j, k, alpha) for k in range(1, m))
    return out


def stretched_edges(m: int, q: int) -> list[tuple[StretchedVertex, StretchedVertex]]:
    out = []
    for alpha in even_vertices(q).tolist():
        for j in range(q):
            pts = [stretched_vertex(m, j, k, alpha) for k in range(m + 1)]
            out.extend(zip(pts, pts[1:]))
    return out


# ---------------------------------------------------------------------------
# vectorized stretching of paths


def spread(alpha: np.ndarray, q: int, m: int) -> np.ndarray:
    """Replace each bit of ``alpha`` by ``m`` copies of itself."""
    ones = VERTEX_DTYPE((1 << m) - 1)
    out = np.zeros_like(alpha)
    for s in range(q):
        out |= ((alpha >> VERTEX_DTYPE(s)) & ONE) * (ones << VERTEX_DTYPE(s * m))
    return out


def odd_stretch_paths(paths: np.ndarray, q: int, m: int) -> np.ndarray:
    """Image of the m-stretch of each path under the gamma = 0 block map.

    ``paths`` has shape ``(n, L + 1)`` in Q_q; the result has shape
    ``(n, m*L + 1)`` in Q_{mq}.
    """
    paths = as_vertices(paths)
    n, width = paths.shape
    ones = VERTEX_DTYPE((1 << m) - 1)
    out = np.empty((n, m * (width - 1) + 1), dtype=VERTEX_DTYPE)
    spreads = spread(paths, q, m)
    for i in range(width - 1):
        a = paths[:, i]
        shift = low_bit_index(a ^ paths[:, i + 1]) * VERTEX_DTYPE(m)
        odd = parity_array(a).astype(bool)
        for k in range(m):
            from_even = VERTEX_DTYPE((1 << k) - 1)
            from_odd = ones ^ VERTEX_DTYPE((1 << (m - k)) - 1)
            mask = np.where(odd, from_odd, from_even)
            out[:, i * m + k] = spreads[:, i] ^ (mask << shift)
    out[:, -1] = spreads[:, -1]
    return out


def double_stretch_paths(paths: np.ndarray, q: int, eps: int) -> np.ndarray:
    """Image of the 2-stretch of each path under the gamma = 0 doubling map."""
    paths = as_vertices(paths)
    n, width = paths.shape
    qq = VERTEX_DTYPE(q)
    out = np.empty((n, 2 * width - 1), dtype=VERTEX_DTYPE)
    out[:, 0::2] = paths | (paths << qq)
    a, b = paths[:, :-1], paths[:, 1:]
    e0 = np.where(parity_array(a) == 0, a, b)
    e1 = e0 ^ a ^ b
    if eps:
        e0, e1 = e1, e0
    out[:, 1::2] = e0 | (e1 << qq)
    return out


def even_blocks(m: int) -> np.ndarray:
    return even_vertices(m)


def odd_gammas(m: int, q: int) -> np.ndarray:
    """All translations with every m-bit block of even parity, ascending block-major."""
    blocks = even_blocks(m)
    g = np.zeros(1, dtype=VERTEX_DTYPE)
    for s in range(q):
        g = ((blocks[:, None] << VERTEX_DTYPE(s * m)) | g[None, :]).ravel()
    return g


# ---------------------------------------------------------------------------
# embedding maps


class EmbeddingMap:
    """A vertex map from a transformed hypercube into a larger hypercube."""

    source: str
    target_dim: int

    def __call__(self, vertex):  # pragma: no cover - interface
        raise NotImplementedError


def _check_gamma_blocks(gamma: Sequence[int] | int, m: int, q: int) -> int:
    if isinstance(gamma, (int, np.integer)):
        gamma = int(gamma)
        blocks = [(gamma >> (s * m)) & ((1 << m) - 1) for s in range(q)]
        if gamma >> (m * q):
            raise InvalidIndex("gamma has bits beyond the target dimension")
    else:
        blocks = list(gamma)
        if len(blocks) != q:
            raise InvalidParameter(f"need {q} blocks, got {len(blocks)}")
    packed = 0
    for s, b in enumerate(blocks):
        if not 0 <= b < (1 << m):
            raise InvalidIndex(f"block {b:#x} is not an {m}-bit vector")
        if parity(b):
            raise InvalidIndex(f"block {s} ({b:#x}) has odd parity")
        packed |= b << (s * m)
    return packed


@dataclass(frozen=True)
class OddStretch(EmbeddingMap):
    """Block embedding of m*Q_q into Q_{mq} for odd m, translated by gamma."""

    m: int
    q: int
    gamma: int

    @property
    def target_dim(self) -> int:
        return self.m * self.q

    @property
    def source(self) -> str:
        return f"{self.m}*Q_{self.q}"

    def __call__(self, vertex: StretchedVertex) -> int:
        m, q = self.m, self.q
        ones = (1 << m) - 1
        if isinstance(vertex, Base):
            return sum(ones << (s * m) for s in range(q) if vertex.alpha >> s & 1) ^ self.gamma
        v = stretched_vertex(m, vertex.j, vertex.k, vertex.alpha)
        if isinstance(v, Base):
            return self(v)
        return self(Base(v.alpha)) ^ (((1 << v.k) - 1) << (v.j * m))

    def stretch_paths(self, paths: np.ndarray) -> np.ndarray:
        return odd_stretch_paths(paths, self.q, self.m) ^ VERTEX_DTYPE(self.gamma)


@dataclass(frozen=True)
class DoubleStretch(EmbeddingMap):
    """Embedding of 2*Q_q into Q_{2q}; ``eps`` picks which endpoint image the midpoint follows."""

    q: int
    gamma: int
    eps: int

    m = 2

    @property
    def target_dim(self) -> int:
        return 2 * self.q

    @property
    def source(self) -> str:
        return f"2*Q_{self.q}"

    def __call__(self, vertex: StretchedVertex) -> int:
        q = self.q
        if isinstance(vertex, Base):
            a = vertex.alpha
            return a | ((a ^ self.gamma) << q)
        if vertex.k != 1:
            raise InvalidIndex("2*Q_q has only midpoints (k = 1)")
        e0 = to_even(vertex.alpha, vertex.j)
        e1 = to_odd(vertex.alpha, vertex.j)
        if self.eps:
            e0, e1 = e1, e0
        return e0 | ((e1 ^ self.gamma) << q)

    def stretch_paths(self, paths: np.ndarray) -> np.ndarray:
        return double_stretch_paths(paths, self.q, self.eps) ^ (
            VERTEX_DTYPE(self.gamma) << VERTEX_DTYPE(self.q)
        )


@dataclass(frozen=True)
class ComposedStretch(EmbeddingMap):
    """An odd stretch followed by doublings, embedding m*Q_q into Q_{mq}."""

    stages: tuple[EmbeddingMap, ...]

    @property
    def m(self) -> int:
        return reduce(lambda x, s: x * s.m, self.stages, 1)

    @property
    def q(self) -> int:
        return self.stages[0].q

    @property
    def target_dim(self) -> int:
        return self.stages[-1].target_dim

    @property
    def source(self) -> str:
        return f"{self.m}*Q_{self.q}"

    def stretch_paths(self, paths: np.ndarray) -> np.ndarray:
        for st in self.stages:
            paths = st.stretch_paths(paths)
        return paths

    def __call__(self, vertex: StretchedVertex) -> int:
        if isinstance(vertex, Base):
            x = vertex.alpha
            for st in self.stages:
                x = st(Base(x))
            return x
        a = vertex.alpha
        edge = as_vertices([[a, a ^ (1 << vertex.j)]])
        return int(self.stretch_paths(edge)[0, vertex.k])


def stretch_map_odd(m: int, q: int, gamma: Sequence[int] | int) -> OddStretch:
    if m < 1 or m % 2 == 0:
        raise InvalidParameter(f"stretch_map_odd needs odd m, got {m}")
    if q < 1:
        raise InvalidParameter("q must be >= 1")
    return OddStretch(m, q, _check_gamma_blocks(gamma, m, q))


def stretch_map_two(q: int, gamma: int, eps: int) -> DoubleStretch:
    if q < 1:
        raise InvalidParameter("q must be >= 1")
    if not 0 <= gamma < (1 << q):
        raise InvalidIndex(f"gamma {gamma:#x} not in Q_{q}")
    if parity(gamma):
        raise InvalidIndex(f"gamma {gamma:#x} has odd parity")
    if eps not in (0, 1):
        raise InvalidParameter("eps must be 0 or 1")
    return DoubleStretch(q, gamma, eps)


def _two_adic(m: int) -> tuple[int, int]:
    a = 0
    while m % 2 == 0:
        m //= 2
        a += 1
    return a, m


@dataclass(frozen=True)
class StretchFamily:
    """The family of embeddings partitioning E(Q_{mq}) into copies of m*Q_q."""

    m: int
    q: int

    @property
    def target_dim(self) -> int:
        return self.m * self.q

    def _levels(self) -> tuple[int, list[int]]:
        a, m_odd = _two_adic(self.m)
        return m_odd, [m_odd * self.q * (1 << i) for i in range(a)]

    def __len__(self) -> int:
        m_odd, dims = self._levels()
        return (1 << ((m_odd - 1) * self.q)) * (1 << sum(dims))

    def maps(self) -> Iterator[ComposedStretch]:
        """Every member, odd translation major."""
        m_odd, dims = self._levels()
        stage_choices = [[OddStretch(m_odd, self.q, int(g)) for g in odd_gammas(m_odd, self.q)]]
        for n in dims:
            stage_choices.append(
                [DoubleStretch(n, int(g), e) for e in (0, 1) for g in even_vertices(n)]
            )

        def rec(i, acc):
            if i == len(stage_choices):
                yield ComposedStretch(tuple(acc))
                return
            for st in stage_choices[i]:
                yield from rec(i + 1, acc + [st])

        yield from rec(0, [])

    def stretch_blocks(self, blocks) -> Iterator[np.ndarray]:
        """Images of every path in ``blocks`` (paths of Q_q) under every member.

        Each input path of length L becomes paths of length m*L.
        """
        m_odd, dims = self._levels()
        for block in blocks:
            yield from _stretch_chain(as_vertices(block), self.q, m_odd, dims)

    def edge_images(self) -> Iterator[np.ndarray]:
        """Images of the stretched edges: a partition of E(Q_{mq}) into P_m's."""
        from .cube_core import all_edges

        require_materializable(self.target_dim)
        return self.stretch_blocks([all_edges(self.q)])


def _stretch_chain(block: np.ndarray, q: int, m_odd: int, dims: list[int]) -> Iterator[np.ndarray]:
    stage = odd_stretch_paths(block, q, m_odd)
    gammas = odd_gammas(m_odd, q)
    for g in _translate(stage, gammas):
        if dims:
            yield from _double_chain(g, dims)
        else:
            yield g


def _double_chain(block: np.ndarray, dims: list[int]) -> Iterator[np.ndarray]:
    n = dims[0]
    shifted = even_vertices(n) << VERTEX_DTYPE(n)
    for eps in (0, 1):
        img = double_stretch_paths(block, n, eps)
        for g in _translate(img, shifted):
            if len(dims) > 1:
                yield from _double_chain(g, dims[1:])
            else:
                yield g


def _translate(paths: np.ndarray, gammas: np.ndarray) -> Iterator[np.ndarray]:
    """XOR every translation into every path, translation-major, in bounded blocks."""
    per = max(1, BLOCK_ENTRIES // max(1, paths.size))
    for i in range(0, len(gammas), per):
        g = gammas[i:i + per]
        yield (g[:, None, None] ^ paths[None, :, :]).reshape(-1, paths.shape[1])


def stretch_decomposition(m: int, q: int) -> StretchFamily:
    """Edge partition of Q_{mq} into copies of m*Q_q (odd stretch, then doublings)."""
    if m < 1 or q < 1:
        raise InvalidParameter("m and q must be >= 1")
    require_materializable(m * q)
    return StretchFamily(m, q)


# ---------------------------------------------------------------------------
# m#Q_q


@dataclass(frozen=True)
class Prime:
    beta: int


@dataclass(frozen=True)
class DoublePrime:
    beta: int


@dataclass(frozen=True)
class Rung:
    beta: int
    j: int


SharpVertex = Union[Prime, DoublePrime, Rung]


def sharp_vertex(m: int, beta: int, j: int) -> SharpVertex:
    """Point ``j`` on the rung from ``beta'`` (j = 0) to ``beta''`` (j = m)."""
    if not 0 <= j <= m:
        raise InvalidIndex(f"rung position {j} outside [0, {m}]")
    if j == 0:
        return Prime(beta)
    if j == m:
        return DoublePrime(beta)
    return Rung(beta, j)


def rung_position(v: SharpVertex, m: int) -> tuple[int, int]:
    if isinstance(v, Prime):
        return 0, v.beta
    if isinstance(v, DoublePrime):
        return m, v.beta
    return v.j, v.beta


@dataclass(frozen=True)
class SharpMap(EmbeddingMap):
    """Embedding of m#Q_q into Q_{m+q}: ``beta_<j>`` goes to ``(f_gamma(j), beta)``."""

    m: int
    q: int
    gamma: int

    @property
    def target_dim(self) -> int:
        return self.m + self.q

    @property
    def source(self) -> str:
        return f"{self.m}#Q_{self.q}"

    def __call__(self, vertex: SharpVertex) -> int:
        j, beta = rung_position(vertex, self.m)
        return (((1 << j) - 1) ^ self.gamma) | (beta << self.m)

    def map_arrays(self, pos: np.ndarray, beta: np.ndarray) -> np.ndarray:
        return sharp_base_image(pos, beta, self.m) ^ VERTEX_DTYPE(self.gamma)


def sharp_base_image(pos: np.ndarray, beta: np.ndarray, m: int) -> np.ndarray:
    """Image under the gamma = 0 sharp map; other members differ by XOR with gamma."""
    pos = as_vertices(pos)
    return ((ONE << pos) - ONE) | (as_vertices(beta) << VERTEX_DTYPE(m))


def sharp_map(m: int, q: int, gamma: int) -> SharpMap:
    if m < 1 or m % 2 == 0:
        raise InvalidParameter(f"sharp_map needs odd m, got {m}")
    if not 0 <= gamma < (1 << m):
        raise InvalidIndex(f"gamma {gamma:#x} not in Q_{m}")
    if parity(gamma):
        raise InvalidIndex(f"gamma {gamma:#x} has odd parity")
    return SharpMap(m, q, gamma)


def sharp_family(m: int, q: int) -> list[SharpMap]:
    return [sharp_map(m, q, int(g)) for g in even_vertices(m)]


def sharp_edges(m: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Edges of m#Q_q as ``(pos, beta)`` arrays of shape ``(|E|, 2)``."""
    from .cube_core import all_edges

    e = all_edges(q)
    n = len(e)
    betas = np.arange(1 << q, dtype=VERTEX_DTYPE)
    rung_pos = np.arange(m + 1, dtype=VERTEX_DTYPE)
    rp = np.stack([rung_pos[:-1], rung_pos[1:]], axis=1)
    pos = np.concatenate([
        np.zeros((n, 2), dtype=VERTEX_DTYPE),
        np.full((n, 2), m, dtype=VERTEX_DTYPE),
        np.tile(rp, (len(betas), 1)),
    ])
    beta = np.concatenate([e, e, np.repeat(betas, m)[:, None].repeat(2, axis=1)])
    return pos, beta


def sharp_edge_images(m: int, q: int) -> Iterator[np.ndarray]:
    """Images of E(m#Q_q) under the whole family, as length-1 paths of Q_{m+q}."""
    if m < 1 or m % 2 == 0:
        raise InvalidParameter(f"sharp family needs odd m, got {m}")
    require_materializable(m + q)
    pos, beta = sharp_edges(m, q)
    base = sharp_base_image(pos, beta, m)
    return _translate(base, even_vertices(m))


# ---------------------------------------------------------------------------
# concatenating two DVOPs through m#G


@dataclass(frozen=True, eq=False)
class SharpPaths:
    """Paths of m#G as parallel ``(rung position, vertex of G)`` arrays."""

    m: int
    pos: np.ndarray
    vert: np.ndarray
    complement_prime: tuple
    complement_double_prime: tuple

    @property
    def length(self) -> int:
        return self.pos.shape[1] - 1

    def __len__(self) -> int:
        return self.pos.shape[0]

    def sharp_vertices(self, i: int) -> list[SharpVertex]:
        return [sharp_vertex(self.m, int(b), int(p)) for p, b in zip(self.pos[i], self.vert[i])]


def concat_dvop_paths(m: int, dvop_a, dvop_b) -> SharpPaths:
    """One path per vertex v of G through m#G.

    The path runs along ``dvop_a``'s path from v backwards inside G', up the
    rung from v' to v'', then along ``dvop_b``'s path from v inside G''.
    The DVOPs only need ``dim``, ``k``, ``vertices()``, ``paths(vs)`` and
    ``complement``.
    """
    if m < 1:
        raise InvalidParameter("m must be >= 1")
    if dvop_a.dim != dvop_b.dim:
        raise InvalidParameter("both DVOPs must live on the same graph")
    vs = dvop_a.vertices()
    left = dvop_a.paths(vs)[:, ::-1]
    right = dvop_b.paths(vs)
    n = len(vs)
    ka, kb = dvop_a.k, dvop_b.k
    vert = np.concatenate([left[:, :-1], np.repeat(vs[:, None], m + 1, axis=1), right[:, 1:]], axis=1)
    pos = np.concatenate([
        np.zeros((n, ka), dtype=VERTEX_DTYPE),
        np.broadcast_to(np.arange(m + 1, dtype=VERTEX_DTYPE), (n, m + 1)),
        np.full((n, kb), m, dtype=VERTEX_DTYPE),
    ], axis=1)
    return SharpPaths(m, pos, vert, tuple(dvop_a.complement), tuple(dvop_b.complement))

"""Independent checks for decompositions, DVOPs and cycle families.

Nothing here trusts the constructions: paths are re-checked vertex by
vertex and every edge is marked in a bitset indexed by ``base*q + j``.
The brute-force oracle searches exhaustively on tiny cubes.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

import numpy as np

from .cube_core import (
    VERTEX_DTYPE,
    Decomposition,
    PathEmbedding,
    as_vertices,
    edge_indices,
    num_edges,
    require_materializable,
)
from .errors import InvalidParameter, ResourceLimit

# traces of the stitched walks, relative to the starting value
MID_TRACE = (0, 1, 0, 1, 2, 3, 2, 3)
WIDE_TRACE = (0, 1, 0, 1, 2, 7, 2, 7, 4, 5, 4, 5, 6, 3, 6, 3)

DEFAULT_SEED = 20240601


class Failure(enum.Enum):
    NON_PATH = "NonPath"
    WRONG_LENGTH = "WrongLength"
    DUPLICATE_EDGE = "DuplicateEdge"
    INCOMPLETE_COVER = "IncompleteCover"
    NOT_ORIGINATING = "NotOriginating"
    TRACE_MISMATCH = "TraceMismatch"


@dataclass
class Report:
    ok: bool = True
    paths_seen: int = 0
    edges_seen: int = 0
    failure: Failure | None = None
    witness: dict[str, Any] = field(default_factory=dict)
    sampled: bool = False
    seed: int | None = None
    complement_cycles: int | None = None

    def fail(self, kind: Failure, **witness) -> Report:
        if self.ok:
            self.ok = False
            self.failure = kind
            self.witness = witness
        return self

    def summary(self) -> str:
        head = "ok" if self.ok else f"FAIL {self.failure.value}"
        text = f"{head}: {self.paths_seen} paths, {self.edges_seen} edges"
        if self.sampled:
            text += f" (sampled, seed={self.seed})"
        if not self.ok:
            text += f" {self.witness}"
        return text


class EdgeBitset:
    """One bit per edge index of Q_q; marks must never collide."""

    def __init__(self, q: int):
        self.q = q
        self.bits = np.zeros(((q << q) + 7) // 8, dtype=np.uint8)
        self.count = 0

    def mark(self, idx: np.ndarray) -> int | None:
        """Mark ``idx``; return the first already-present (or repeated) index, else None."""
        if idx.size == 0:
            return None
        idx = np.sort(idx, kind="stable")
        dup = np.flatnonzero(idx[1:] == idx[:-1])
        if dup.size:
            return int(idx[dup[0]])
        byte = (idx >> VERTEX_DTYPE(3)).astype(np.intp)
        bit = (np.uint8(1) << (idx & VERTEX_DTYPE(7)).astype(np.uint8))
        hit = np.flatnonzero(self.bits[byte] & bit)
        if hit.size:
            return int(idx[hit[0]])
        starts = np.flatnonzero(np.r_[True, byte[1:] != byte[:-1]])
        self.bits[byte[starts]] |= np.bitwise_or.reduceat(bit, starts)
        self.count += idx.size
        return None


def _blocks_of(paths, m: int) -> Iterator[np.ndarray]:
    if isinstance(paths, Decomposition):
        yield from paths.blocks()
        return
    pending: list = []
    for item in paths:
        if isinstance(item, np.ndarray) and item.ndim == 2:
            if pending:
                yield _ragged(pending)
                pending = []
            yield item
            continue
        verts = item.verts if isinstance(item, (PathEmbedding,)) else item
        pending.append(tuple(int(v) for v in verts))
        if len(pending) >= 65536:
            yield _ragged(pending)
            pending = []
    if pending:
        yield _ragged(pending)


def _ragged(rows: list[tuple[int, ...]]):
    widths = {len(r) for r in rows}
    if len(widths) == 1:
        return as_vertices(rows)
    return rows  # left for the length check to reject


def _check_block(block: np.ndarray, q: int, offset: int, report: Report) -> bool:
    """Adjacency, range and simplicity of every row; records the first failure."""
    limit = VERTEX_DTYPE(1) << VERTEX_DTYPE(q)
    bad_range = np.any(block >= limit, axis=1)
    d = block[:, 1:] ^ block[:, :-1]
    bad_step = np.any(np.bitwise_count(d) != 1, axis=1)
    s = np.sort(block, axis=1)
    bad_repeat = np.any(s[:, 1:] == s[:, :-1], axis=1)
    bad = np.flatnonzero(bad_range | bad_step | bad_repeat)
    if bad.size:
        i = int(bad[0])
        reason = "range" if bad_range[i] else "step" if bad_step[i] else "repeat"
        report.fail(Failure.NON_PATH, path=offset + i, verts=block[i].tolist(), reason=reason)
        return False
    return True


def verify_decomposition(paths: Decomposition | Iterable, q: int | None = None, m: int | None = None) -> Report:
    """Check that ``paths`` partition E(Q_q) into simple paths of length ``m``."""
    if isinstance(paths, Decomposition):
        q = paths.q if q is None else q
        m = paths.m if m is None else m
    if q is None or m is None:
        raise InvalidParameter("q and m are required")
    require_materializable(q)
    report = Report()
    seen = EdgeBitset(q)
    offset = 0
    for block in _blocks_of(paths, m):
        if not isinstance(block, np.ndarray) or block.shape[1] != m + 1:
            rows = block if isinstance(block, list) else block.tolist()
            i = next(i for i, r in enumerate(rows) if len(r) != m + 1)
            return report.fail(Failure.WRONG_LENGTH, path=offset + i, length=len(rows[i]) - 1)
        block = as_vertices(block)
        if not _check_block(block, q, offset, report):
            return report
        idx = edge_indices(block[:, :-1], block[:, 1:], q).ravel()
        dup = seen.mark(idx)
        if dup is not None:
            where = np.flatnonzero(idx == dup)[0] // m
            base, j = divmod(dup, q)
            report.fail(Failure.DUPLICATE_EDGE, edge=(base, j), path=offset + int(where))
            report.paths_seen = offset + block.shape[0]
            report.edges_seen = seen.count
            return report
        offset += block.shape[0]
        report.paths_seen = offset
        report.edges_seen = seen.count
    if seen.count != num_edges(q):
        report.fail(Failure.INCOMPLETE_COVER, covered=seen.count, expected=num_edges(q))
    return report


def verify_cycles(cycles, q: int) -> Report:
    """Check a family of closed walks: each a simple cycle, jointly an edge partition."""
    report = Report()
    seen = EdgeBitset(q)
    for i, c in enumerate(cycles):
        v = as_vertices(c.verts if hasattr(c, "verts") else c)
        nxt = np.roll(v, -1)
        if len(np.unique(v)) != len(v) or np.any(np.bitwise_count(v ^ nxt) != 1):
            return report.fail(Failure.NON_PATH, cycle=i)
        dup = seen.mark(edge_indices(v, nxt, q))
        if dup is not None:
            return report.fail(Failure.DUPLICATE_EDGE, edge=divmod(dup, q), cycle=i)
        report.paths_seen += 1
        report.edges_seen = seen.count
    if seen.count != num_edges(q):
        report.fail(Failure.INCOMPLETE_COVER, covered=seen.count, expected=num_edges(q))
    return report


def _trace_ok(d, paths: np.ndarray) -> tuple[bool, int]:
    from . import ham

    if d.kind == "mid":
        vals = ham.rho1(paths, d.dim).astype(np.int64)
        want, mod = MID_TRACE, 4
    elif d.kind == "wide":
        vals = ham.rho2(paths, d.dim).astype(np.int64)
        want, mod = WIDE_TRACE, 8
    else:
        return True, -1
    rel = (vals - vals[:, :1]) % mod
    expected = np.array(want[: paths.shape[1]]) % mod
    bad = np.flatnonzero(np.any(rel != expected, axis=1))
    return (bad.size == 0), int(bad[0]) if bad.size else -1


def verify_dvop(d, *, sample: int | None = None, seed: int = DEFAULT_SEED, max_dim: int = 16) -> Report:
    """Check origination, simplicity, disjointness and the complement partition.

    Above ``max_dim`` (or when ``sample`` is given) only ``sample`` random
    vertices are checked and the report is flagged as partial.
    """
    sampled = sample is not None or d.dim > max_dim
    report = Report(sampled=sampled, seed=seed if sampled else None,
                    complement_cycles=len(d.complement))
    if sampled:
        rng = np.random.default_rng(seed)
        n = sample or 10_000
        vs = rng.integers(0, 1 << d.dim, size=n, dtype=np.uint64)
    else:
        vs = np.arange(1 << d.dim, dtype=VERTEX_DTYPE)
    paths = d.paths(vs)
    if paths.shape[1] != d.k + 1:
        return report.fail(Failure.WRONG_LENGTH, length=paths.shape[1] - 1)
    bad = np.flatnonzero(paths[:, 0] != vs)
    if bad.size:
        return report.fail(Failure.NOT_ORIGINATING, vertex=int(vs[bad[0]]))
    if not _check_block(paths, d.dim, 0, report):
        return report
    ok, i = _trace_ok(d, paths)
    if not ok:
        return report.fail(Failure.TRACE_MISMATCH, vertex=int(vs[i]), verts=paths[i].tolist())
    report.paths_seen = len(vs)
    idx = edge_indices(paths[:, :-1], paths[:, 1:], d.dim)
    if sampled:
        # edges inside one path must be distinct; global disjointness needs the full set
        s = np.sort(idx, axis=1)
        rep = np.flatnonzero(np.any(s[:, 1:] == s[:, :-1], axis=1))
        if rep.size:
            return report.fail(Failure.DUPLICATE_EDGE, vertex=int(vs[rep[0]]))
        report.edges_seen = int(idx.size)
        return report
    require_materializable(d.dim)
    seen = EdgeBitset(d.dim)
    dup = seen.mark(idx.ravel())
    if dup is not None:
        return report.fail(Failure.DUPLICATE_EDGE, edge=divmod(dup, d.dim))
    for c in d.complement_cycles():
        v = c.verts
        dup = seen.mark(edge_indices(v, np.roll(v, -1), d.dim))
        if dup is not None:
            return report.fail(Failure.DUPLICATE_EDGE, edge=divmod(dup, d.dim), complement=True)
    report.edges_seen = seen.count
    if seen.count != num_edges(d.dim):
        report.fail(Failure.INCOMPLETE_COVER, covered=seen.count, expected=num_edges(d.dim))
    return report


# ---------------------------------------------------------------------------
# brute force oracle


def _simple_paths(q: int, m: int) -> list[int]:
    """Edge bitmasks of all simple length-m paths of Q_q (each path once)."""
    n = 1 << q
    eid = {}
    for v in range(n):
        for j in range(q):
            if not v >> j & 1:
                eid[(v, j)] = len(eid)

    def edge_bit(a, b):
        d = a ^ b
        return 1 << eid[(min(a, b), d.bit_length() - 1)]

    found = set()

    def extend(path, mask):
        if len(path) == m + 1:
            found.add(mask)
            return
        last = path[-1]
        for j in range(q):
            nxt = last ^ (1 << j)
            if nxt not in path:
                path.append(nxt)
                extend(path, mask | edge_bit(last, nxt))
                path.pop()

    for v in range(n):
        extend([v], 0)
    return sorted(found)


def _mask_to_path(mask: int, q: int) -> tuple[int, ...]:
    edges = []
    for v in range(1 << q):
        for j in range(q):
            if not v >> j & 1:
                edges.append((v, v | 1 << j))
    chosen = [edges[i] for i in range(len(edges)) if mask >> i & 1]
    deg: dict[int, list[int]] = {}
    for a, b in chosen:
        deg.setdefault(a, []).append(b)
        deg.setdefault(b, []).append(a)
    start = next((v for v, nb in sorted(deg.items()) if len(nb) == 1), min(deg))
    path, prev = [start], None
    while len(path) < len(chosen) + 1:
        cur = path[-1]
        nxt = next(x for x in deg[cur] if x != prev)
        prev = cur
        path.append(nxt)
    return tuple(path)


def brute_force_decompose(q: int, m: int) -> Decomposition | None:
    """Exhaustively search for a partition of E(Q_q) into length-m paths."""
    if q < 1 or m < 1:
        raise InvalidParameter("q and m must be >= 1")
    total = num_edges(q)
    if total > 32:
        raise ResourceLimit(f"oracle limited to q*2^(q-1) <= 32 edges, Q_{q} has {total}")
    if total % m:
        return None
    candidates = _simple_paths(q, m) if m <= total else []
    by_edge: list[list[int]] = [[] for _ in range(total)]
    for mask in candidates:
        for i in range(total):
            if mask >> i & 1:
                by_edge[i].append(mask)
                break  # index each path by its lowest edge only
    full = (1 << total) - 1
    chosen: list[int] = []

    def search(covered: int) -> bool:
        if covered == full:
            return True
        low = (~covered & (covered + 1)).bit_length() - 1
        for mask in by_edge[low]:
            if not mask & covered:
                chosen.append(mask)
                if search(covered | mask):
                    return True
                chosen.pop()
        return False

    if not search(0):
        return None
    return Decomposition.from_paths(q, m, [_mask_to_path(mk, q) for mk in chosen])

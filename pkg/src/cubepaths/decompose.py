"""Explicit decompositions of Q_q (q odd) into paths of length m.

The pipeline first builds a :class:`Plan` (a small recursion tree, cheap for
any q < 2**32) and then emits paths from it lazily:

* ``m == q``: the staircase partition.
* ``d = gcd(m, q) > 1``: decompose Q_{q/d} into P_{m/d} and push it through
  every odd-stretch embedding of d*Q_{q/d} into Q_q.
* ``m = 2**t`` with ``q > m``: a base cube ``Q_{2^t + s}`` built inside
  ``m'#Q_{2^r}`` from two DVOPs, then Cartesian products with ``Q_{2^r}``
  cut into arcs of its Hamiltonian cycles until the dimension reaches q.

Hub table (``r`` for each ``t``): t=1 uses the fixed P_2 partition of Q_3
with stride 2; t in {2,3} -> r=2; t in [4,8) -> r=3; [8,16) -> r=4;
[16,32) -> r=5 (plan only; never materializable).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

import numpy as np

from . import ham
from .cube_core import (
    BLOCK_ENTRIES,
    VERTEX_DTYPE,
    Decomposition,
    base_partition,
    edge_decomposition,
    even_vertices,
    num_edges,
    require_materializable,
)
from .dvop import dvop_for
from .errors import InvalidParameter, NotDivisible, ResourceLimit, Unsupported
from .transforms import (
    StretchFamily,
    concat_dvop_paths,
    sharp_base_image,
)


def check_divisibility(m: int, q: int) -> bool:
    """The necessary condition ``m <= q`` and ``m | q * 2**(q-1)``, q odd."""
    if q < 1 or m < 1:
        raise InvalidParameter("m and q must be >= 1")
    if q % 2 == 0:
        raise InvalidParameter(f"q must be odd, got {q}")
    # m | q * 2^(q-1)  <=>  the odd part of m divides q and its 2-power is at most 2^(q-1)
    a = (m & -m).bit_length() - 1
    return m <= q and q % (m >> a) == 0 and a <= q - 1


def divisibility_reason(m: int, q: int) -> str:
    if m > q:
        return f"{m} > {q}"
    return f"{m} does not divide {q}·2^{q - 1}"


# ---------------------------------------------------------------------------
# plan


@dataclass(frozen=True)
class Trivial:
    q: int
    m: int = 1


@dataclass(frozen=True)
class BasePartition:
    q: int

    @property
    def m(self) -> int:
        return self.q


@dataclass(frozen=True)
class P2Q3:
    q: int = 3
    m: int = 2


@dataclass(frozen=True)
class PowerOfTwoBase:
    """Q_{2^t + s} = sharp_m # Q_{2^r} with DVOP[k1] in G' and DVOP[k2] in G''."""

    t: int
    s: int
    sharp_m: int
    k1: int
    k2: int
    r: int

    @property
    def q(self) -> int:
        return self.sharp_m + (1 << self.r)

    @property
    def m(self) -> int:
        return 1 << self.t


@dataclass(frozen=True)
class Stride:
    """``base`` combined ``repeats`` times with Q_{2^r} split into P_{2^t}."""

    t: int
    base: "Plan"
    r: int
    repeats: int

    @property
    def q(self) -> int:
        return self.base.q + self.repeats * (1 << self.r)

    @property
    def m(self) -> int:
        return 1 << self.t


@dataclass(frozen=True)
class GcdReduce:
    d: int
    m_prime: int
    q_prime: int
    child: "Plan"

    @property
    def q(self) -> int:
        return self.d * self.q_prime

    @property
    def m(self) -> int:
        return self.d * self.m_prime


Plan = Union[Trivial, BasePartition, P2Q3, PowerOfTwoBase, Stride, GcdReduce]


def default_hub(t: int) -> int:
    if t < 1:
        raise InvalidParameter("t must be >= 1")
    if t == 1:
        return 1
    if t < 4:
        return 2
    if t < 8:
        return 3
    if t < 16:
        return 4
    if t < 32:
        return 5
    raise Unsupported(f"P_(2^{t}) is beyond the supported range (t < 32)")


def _max_dvop_k(r: int) -> int:
    return {2: 2, 3: 4, 4: 8, 5: 16}[r]


def plan_power2(t: int, q: int, hub: int | None = None) -> Plan:
    """Plan for P_{2^t} dividing Q_q, q odd and q > 2^t (or t = 0)."""
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    if t >= 32:
        raise Unsupported("t >= 32 is outside the proven range")
    if q % 2 == 0:
        raise InvalidParameter(f"q must be odd, got {q}")
    if t == 0:
        return Trivial(q)
    if q <= 1 << t:
        raise InvalidParameter(f"need q > 2^{t}, got q={q}")
    r = default_hub(t) if hub is None else hub
    if t == 1 and r != 1:
        raise InvalidParameter("t = 1 only supports hub r = 1")
    if t > 1 and not (2 <= r <= 5 and r <= t < (1 << r)):
        raise InvalidParameter(f"hub r={r} cannot carry P_(2^{t}); need r <= t < 2^r")
    stride = 1 << r
    s = ((q - (1 << t) - 1) % stride) + 1
    q0 = (1 << t) + s
    if t == 1:
        base: Plan = P2Q3()
    else:
        half = stride // 2
        k1 = half if s < half else 0
        k2 = stride - s - k1
        base = PowerOfTwoBase(t, s, q0 - stride, k1, k2, r)
    repeats = (q - q0) // stride
    return Stride(t, base, r, repeats) if repeats else base


def build_plan(m: int, q: int, hub: int | None = None) -> Plan:
    """Recursion tree for P_m dividing Q_q; raises NotDivisible if impossible."""
    if not check_divisibility(m, q):
        raise NotDivisible(f"P_{m} cannot divide Q_{q}: {divisibility_reason(m, q)}")
    if m == q:
        return BasePartition(q)
    d = gcd(m, q)
    if d == 1:
        return plan_power2(m.bit_length() - 1, q, hub)
    mp, qp = m // d, q // d
    child = plan_power2(mp.bit_length() - 1, qp, hub)
    return GcdReduce(d, mp, qp, child)


def validate_plan(plan: Plan) -> list[str]:
    """Structural problems in ``plan`` (empty list when well formed)."""
    problems: list[str] = []

    def walk(p: Plan) -> None:
        if isinstance(p, GcdReduce):
            if p.d % 2 == 0 or p.m_prime & (p.m_prime - 1):
                problems.append(f"bad gcd reduction {p}")
            if p.child.q != p.q_prime or p.child.m != p.m_prime:
                problems.append(f"child of {p} has the wrong shape")
            walk(p.child)
        elif isinstance(p, Stride):
            cycle = ham.cycle_length(p.r) if p.r <= 5 else 0
            if not (p.t < (1 << p.r) and cycle % (1 << p.t) == 0):
                problems.append(f"stride cycle C_{cycle} cannot be cut into P_(2^{p.t})")
            if p.base.m != p.m:
                problems.append(f"stride base of {p} has the wrong path length")
            walk(p.base)
        elif isinstance(p, PowerOfTwoBase):
            n = 1 << p.r
            if p.sharp_m < 1 or p.sharp_m % 2 == 0:
                problems.append(f"sharp length must be odd, got {p.sharp_m}")
            if p.k1 + p.sharp_m + p.k2 != 1 << p.t:
                problems.append(f"path length mismatch in {p}")
            if p.k1 not in (0, n // 2) or not 0 <= p.k2 <= _max_dvop_k(p.r):
                problems.append(f"no DVOP pair for {p}")
            if (p.k1 < n // 2 or p.k2 < n // 2) and ham.cycle_length(p.r) % (1 << p.t):
                problems.append(f"complement cycles of {p} cannot be cut")
            if p.q != (1 << p.t) + p.s:
                problems.append(f"dimension mismatch in {p}")

    walk(plan)
    return problems


# ---------------------------------------------------------------------------
# building blocks


def split_cycle(cycle, m: int) -> np.ndarray:
    """Cut a cycle of length n into n/m consecutive arcs starting at position 0."""
    v = np.asarray(cycle.verts if hasattr(cycle, "verts") else cycle, dtype=VERTEX_DTYPE)
    n = len(v)
    if m < 1 or n % m:
        raise InvalidParameter(f"cannot cut C_{n} into paths of length {m}")
    idx = (np.arange(n // m)[:, None] * m + np.arange(m + 1)[None, :]) % n
    return v[idx]


def p2_in_q3() -> Decomposition:
    """Two P_2's in the inner square (bit 2 clear) and four outer-edge/matching pairs."""
    inner = [(0b000, 0b001, 0b011), (0b011, 0b010, 0b000)]
    outer = []
    # outer square 4-5-7-6-4; pair each outer edge with the matching edge at its first end
    ring = [0b100, 0b101, 0b111, 0b110]
    for i, a in enumerate(ring):
        b = ring[(i + 1) % 4]
        outer.append((a ^ 0b100, a, b))
    return Decomposition.from_paths(3, 2, inner + outer)


def ham_paths(r: int, t: int) -> Decomposition:
    """Q_{2^r} as its Hamiltonian cycles cut into P_{2^t}."""
    cycles = ham.ham_decomposition(r)
    arr = np.concatenate([split_cycle(c, 1 << t) for c in cycles])
    return Decomposition.from_array(1 << r, arr)


def cartesian_combine(d1: Decomposition, d2: Decomposition) -> Decomposition:
    """P_m partitions of Q_{q1} and Q_{q2} give one of Q_{q1+q2}.

    ``d1`` is placed in the low ``q1`` bits and translated by every high
    vertex; ``d2`` goes in the high bits, translated by every low vertex.
    """
    if d1.m != d2.m:
        raise InvalidParameter(f"path lengths differ: {d1.m} vs {d2.m}")
    q1, q2, m = d1.q, d2.q, d1.m
    q = q1 + q2
    require_materializable(q)
    shift = VERTEX_DTYPE(q1)

    def source():
        ys = np.arange(1 << q2, dtype=VERTEX_DTYPE) << shift
        for block in d1.blocks():
            per = max(1, BLOCK_ENTRIES // block.size)
            for i in range(0, len(ys), per):
                y = ys[i:i + per]
                yield (block[None, :, :] | y[:, None, None]).reshape(-1, m + 1)
        xs = np.arange(1 << q1, dtype=VERTEX_DTYPE)
        for block in d2.blocks():
            high = block << shift
            per = max(1, BLOCK_ENTRIES // block.size)
            for i in range(0, len(xs), per):
                x = xs[i:i + per]
                yield (high[None, :, :] | x[:, None, None]).reshape(-1, m + 1)

    return Decomposition(q, m, d1.count * (1 << q2) + d2.count * (1 << q1), source)


def sharp_base_paths(t: int, r: int, sharp_m: int, k1: int, k2: int) -> np.ndarray:
    """Paths of P_{2^t} covering sharp_m#Q_{2^r}, mapped with the gamma = 0 sharp map."""
    g1 = dvop_for(r, k1)
    g2 = dvop_for(r, k2)
    sp = concat_dvop_paths(sharp_m, g1, g2)
    parts = [sharp_base_image(sp.pos, sp.vert, sharp_m)]
    m = 1 << t
    for pos, comp in ((0, sp.complement_prime), (sharp_m, sp.complement_double_prime)):
        for delta in comp:
            arcs = split_cycle(ham.cycle_table(r, delta), m)
            parts.append(sharp_base_image(np.full(arcs.shape, pos, dtype=VERTEX_DTYPE), arcs, sharp_m))
    return np.concatenate(parts)


def _translated(q: int, m: int, paths: np.ndarray, gammas: np.ndarray) -> Decomposition:
    per = max(1, BLOCK_ENTRIES // max(1, paths.size))

    def source():
        for i in range(0, len(gammas), per):
            g = gammas[i:i + per]
            yield (g[:, None, None] ^ paths[None, :, :]).reshape(-1, m + 1)

    return Decomposition(q, m, len(gammas) * len(paths), source)


def emit(plan: Plan) -> Decomposition:
    """Turn a plan into a lazily produced decomposition."""
    require_materializable(plan.q)
    if isinstance(plan, Trivial):
        return edge_decomposition(plan.q)
    if isinstance(plan, BasePartition):
        return base_partition(plan.q)
    if isinstance(plan, P2Q3):
        return p2_in_q3()
    if isinstance(plan, PowerOfTwoBase):
        if plan.r > ham.TABLE_MAX_R:
            raise ResourceLimit("bases over Q_32 are not materializable")
        paths = sharp_base_paths(plan.t, plan.r, plan.sharp_m, plan.k1, plan.k2)
        return _translated(plan.q, plan.m, paths, even_vertices(plan.sharp_m))
    if isinstance(plan, Stride):
        out = emit(plan.base)
        piece = ham_paths(plan.r, plan.t)
        for _ in range(plan.repeats):
            out = cartesian_combine(out, piece)
        return out
    if isinstance(plan, GcdReduce):
        child = emit(plan.child)
        fam = StretchFamily(plan.d, plan.q_prime)
        count = child.count * len(fam)
        return Decomposition(plan.q, plan.m, count, lambda: fam.stretch_blocks(child.blocks()))
    raise TypeError(f"unknown plan node {plan!r}")


def power2_decompose(t: int, q: int, hub: int | None = None) -> Decomposition:
    """P_{2^t} partition of Q_q for odd q > 2^t."""
    return emit(plan_power2(t, q, hub))


def decompose(m: int, q: int, hub: int | None = None) -> Decomposition:
    """Explicit partition of E(Q_q) into q*2^(q-1)/m paths of length m (q odd)."""
    plan = build_plan(m, q, hub)
    require_materializable(q)
    out = emit(plan)
    assert out.count * m == num_edges(q)
    return out

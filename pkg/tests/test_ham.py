import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubepaths import ham
from cubepaths.errors import InvalidParameter, ResourceLimit
from cubepaths.verify import verify_cycles


def oracle_cycles(r):
    """The recursive construction written directly on coordinate tuples."""
    if r == 1:
        return {(): [(0, 0), (1, 0), (1, 1), (0, 1)]}
    prev = oracle_cycles(r - 1)
    out = {}
    for d, g in prev.items():
        n = len(g)
        out[d + (0,)] = [g[(v - u) % n] + g[u] for u in range(n) for v in range(n)]
        out[d + (1,)] = [g[u] + g[(v - u) % n] for u in range(n) for v in range(n)]
    return out


def to_int(coords):
    return sum(a << i for i, a in enumerate(coords))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_matches_tuple_oracle(r):
    for bits, cycle in oracle_cycles(r).items():
        delta = ham.delta_index(bits)
        got = ham.cycle_table(r, delta).tolist()
        assert got == [to_int(c) for c in cycle]


def test_examples():
    assert ham.g_eval(1, 0, 2) == 0b11
    # (g(0), g(1)): low block 00, high block with coordinate 3 set
    assert ham.g_eval(2, 1, 1) == 0b0100
    assert ham.g_eval(2, 0, 5) == 0b0100
    assert ham.g_inverse(1, 0, 0b01) == 1
    assert ham.advance(1, 0, 0b00, +1) == 0b01
    assert ham.advance(1, 0, 0b00, -1) == 0b10


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_bijective_and_hamiltonian(r):
    n = ham.cycle_length(r)
    w = np.arange(n, dtype=np.uint64)
    for delta in range(ham.num_cycles(r)):
        v = ham.g_eval(r, delta, w)
        assert len(np.unique(v)) == n
        assert np.all(np.bitwise_count(v ^ np.roll(v, -1)) == 1)
        assert np.array_equal(ham.g_inverse(r, delta, v), w)
        fwd = ham.advance(r, delta, v, 1)
        assert np.array_equal(ham.advance(r, delta, fwd, -1), v)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_decomposition_partitions(r):
    cycles = ham.ham_decomposition(r)
    assert len(cycles) == 1 << (r - 1)
    assert all(len(c) == 1 << (1 << r) for c in cycles)
    report = verify_cycles(cycles, 1 << r)
    assert report.ok, report.summary()
    assert report.edges_seen == (1 << (r - 1)) * (1 << (1 << r))


def test_r5_not_materialized():
    with pytest.raises(ResourceLimit):
        ham.ham_decomposition(5)
    with pytest.raises(InvalidParameter):
        ham.g_eval(6, 0, 0)


@settings(max_examples=200)
@given(st.integers(0, 15), st.integers(0, (1 << 32) - 1))
def test_r5_round_trip_property(delta, w):
    v = ham.g_eval(5, delta, w)
    assert 0 <= v < 1 << 32
    assert ham.g_inverse(5, delta, v) == w
    nxt = ham.advance(5, delta, v, 1)
    assert (v ^ nxt).bit_count() == 1
    assert nxt == ham.g_eval(5, delta, (w + 1) % (1 << 32))


def test_r5_sampled():
    rng = np.random.default_rng(5)
    w = rng.integers(0, 1 << 32, 100_000, dtype=np.uint64)
    for delta in (0, 7, 15):
        v = ham.g_eval(5, delta, w)
        assert np.array_equal(ham.g_inverse(5, delta, v), w)
        nxt = ham.advance(5, delta, v, 1)
        assert np.all(np.bitwise_count(v ^ nxt) == 1)


def test_rho_examples():
    assert ham.rho1(0, 4) == 0
    assert ham.rho2(0, 8) == 0
    assert ham.rho2(ham.g_eval(2, 1, 1), 4) == 5
    with pytest.raises(InvalidParameter):
        ham.rho1(0, 3)
    with pytest.raises(InvalidParameter):
        ham.rho2(0, 6)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_rho1_law(r):
    w = np.arange(ham.cycle_length(r), dtype=np.uint64)
    for delta in range(ham.num_cycles(r)):
        v = ham.cycle_table(r, delta)
        assert np.array_equal(ham.rho1(v, 1 << r), w % 4)
        step = ham.rho1(ham.advance(r, delta, v, 1), 1 << r)
        assert np.array_equal(step, (ham.rho1(v, 1 << r) + 1) % 4)


def test_rho2_base_values():
    w = np.arange(16, dtype=np.uint64)
    assert np.array_equal(ham.rho2(ham.g_eval(2, 0, w), 4), w % 16)
    assert np.array_equal(ham.rho2(ham.g_eval(2, 1, w), 4) % 8, (5 * w) % 8)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_rho2_laws(r):
    dim = 1 << r
    w = np.arange(ham.cycle_length(r), dtype=np.uint64)
    for delta in range(ham.num_cycles(r)):
        v = ham.cycle_table(r, delta)
        vals = ham.rho2(v, dim)
        nxt = ham.rho2(ham.advance(r, delta, v, 1), dim)
        if delta & 1 == 0:
            assert np.array_equal(vals, w % 16)
            assert np.all((nxt - vals) % 8 == 1)
        else:
            assert np.array_equal(vals % 8, (5 * w) % 8)
            assert np.all((nxt - vals) % 8 == 5)


def test_delta_packing_round_trip():
    for r in range(1, 6):
        for d in range(ham.num_cycles(r)):
            assert ham.delta_index(ham.delta_bits(d, r)) == d

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubepaths.cube_core import all_edges, base_partition, even_vertices, parity
from cubepaths.dvop import dvop_basic, dvop_half
from cubepaths.errors import InvalidIndex, InvalidParameter
from cubepaths.transforms import (
    Base,
    DoublePrime,
    Inner,
    Prime,
    Rung,
    StretchFamily,
    concat_dvop_paths,
    sharp_edge_images,
    sharp_family,
    sharp_map,
    stretch_decomposition,
    stretch_map_odd,
    stretch_map_two,
    stretched_edges,
    stretched_vertex,
    stretched_vertices,
)
from cubepaths.verify import verify_decomposition


def adjacent(a, b):
    return (a ^ b).bit_count() == 1


def test_odd_stretch_examples():
    f = stretch_map_odd(3, 1, 0)
    assert f(Base(0)) == 0b000
    assert f(Base(1)) == 0b111
    assert f(Inner(0, 1, 0)) == 0b001
    assert f(Inner(0, 2, 0)) == 0b011

    g = stretch_map_odd(3, 2, [0b000, 0b011])
    assert g(Base(0b01)) == 0b011_111
    assert g(Inner(1, 1, 0b00)) == 0b010_000


def test_odd_alpha_normalizes():
    # the k-th point from the odd end is the (m-k)-th from the even end
    assert stretched_vertex(3, 0, 1, 0b1) == Inner(0, 2, 0b0)
    assert stretched_vertex(3, 0, 0, 0b1) == Base(0b1)
    assert stretched_vertex(3, 0, 3, 0b1) == Base(0b0)
    f = stretch_map_odd(5, 2, 0)
    for j, k in itertools.product(range(2), range(6)):
        assert f(Inner(j, k, 0b01) if 0 < k < 5 else stretched_vertex(5, j, k, 0b01)) == f(
            stretched_vertex(5, j, k, 0b01))


def test_double_stretch_examples():
    f = stretch_map_two(1, 0, 0)
    assert f(Base(0)) == 0b00
    assert f(Base(1)) == 0b11
    assert f(Inner(0, 1, 0)) == 0b10
    assert stretch_map_two(1, 0, 1)(Inner(0, 1, 0)) == 0b01


def test_map_argument_errors():
    with pytest.raises(InvalidParameter):
        stretch_map_odd(2, 3, 0)
    with pytest.raises(InvalidIndex):
        stretch_map_odd(3, 2, [0b001, 0])
    with pytest.raises(InvalidParameter):
        stretch_map_odd(3, 2, [0])
    with pytest.raises(InvalidIndex):
        stretch_map_two(3, 0b001, 0)
    with pytest.raises(InvalidParameter):
        stretch_map_two(3, 0, 2)
    with pytest.raises(InvalidParameter):
        sharp_map(4, 3, 0)
    with pytest.raises(InvalidIndex):
        sharp_map(3, 3, 0b100)
    with pytest.raises(InvalidIndex):
        stretched_vertex(3, 0, 4, 0)


SMALL_STRETCH = [(m, q) for m in range(1, 7) for q in range(1, 7) if m * q <= 12]


@pytest.mark.parametrize("m,q", [(m, q) for m, q in SMALL_STRETCH if m % 2])
def test_odd_stretch_is_embedding(m, q):
    rng = np.random.default_rng(m * 100 + q)
    gammas = [0, int(rng.choice(even_vertices(m))) << ((q - 1) * m)]
    for gamma in gammas:
        f = stretch_map_odd(m, q, gamma)
        images = [f(v) for v in stretched_vertices(m, q)]
        assert len(set(images)) == len(images)
        for a, b in stretched_edges(m, q):
            assert adjacent(f(a), f(b))


@pytest.mark.parametrize("q", range(1, 7))
def test_double_stretch_is_embedding(q):
    for gamma in (0, int(even_vertices(q)[-1])):
        for eps in (0, 1):
            f = stretch_map_two(q, gamma, eps)
            images = [f(v) for v in stretched_vertices(2, q)]
            assert len(set(images)) == len(images)
            for a, b in stretched_edges(2, q):
                assert adjacent(f(a), f(b))


@pytest.mark.parametrize("m,q", SMALL_STRETCH)
def test_vectorized_matches_pointwise(m, q):
    fam = StretchFamily(m, q)
    edges = all_edges(q)
    maps = list(fam.maps())
    stream = np.concatenate(list(fam.stretch_blocks([edges])))
    assert len(stream) == len(maps) * len(edges)
    rows = {tuple(r) for r in stream.tolist()}
    assert len(rows) == len(stream)
    for f in maps[:: max(1, len(maps) // 8)]:
        for a, b in edges.tolist():
            j = (a ^ b).bit_length() - 1
            expect = tuple(f(stretched_vertex(m, j, k, a)) for k in range(m + 1))
            assert expect in rows


@pytest.mark.parametrize("m,q", SMALL_STRETCH)
def test_family_partitions_edges(m, q):
    fam = stretch_decomposition(m, q)
    assert len(fam) * m * q * (1 << (q - 1)) == m * q * (1 << (m * q - 1))
    report = verify_decomposition(fam.edge_images(), m * q, m)
    assert report.ok, report.summary()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_STRETCH), st.data())
def test_stretched_path_is_path(mq, data):
    m, q = mq
    paths = base_partition(q).to_array()
    i = data.draw(st.integers(0, len(paths) - 1))
    maps = list(StretchFamily(m, q).maps())
    f = data.draw(st.sampled_from(maps))
    row = f.stretch_paths(paths[i:i + 1])[0].tolist()
    assert len(row) == m * q + 1
    assert len(set(row)) == len(row)
    assert all(adjacent(a, b) for a, b in zip(row, row[1:]))


def test_sharp_examples():
    f = sharp_map(3, 2, 0)
    assert f(Prime(0b10)) == 0b10_000
    assert f(DoublePrime(0b10)) == 0b10_111
    assert f(Rung(0b01, 2)) == 0b01_011
    g = sharp_map(3, 2, 0b101)
    assert g(Rung(0b01, 1)) == 0b01_100
    assert len(sharp_family(5, 2)) == 16


@pytest.mark.parametrize("m,q", [(m, q) for m in (1, 3, 5, 7) for q in range(1, 7) if m + q <= 12])
def test_sharp_family_partitions_edges(m, q):
    report = verify_decomposition(sharp_edge_images(m, q), m + q, 1)
    assert report.ok, report.summary()
    assert report.edges_seen == (m + q) << (m + q - 1)


def test_sharp_map_is_embedding():
    m, q = 3, 3
    for f in sharp_family(m, q):
        seen = set()
        for beta in range(1 << q):
            col = [f(Prime(beta))] + [f(Rung(beta, j)) for j in range(1, m)] + [f(DoublePrime(beta))]
            assert all(adjacent(a, b) for a, b in zip(col, col[1:]))
            seen.update(col)
            for j in range(q):
                nb = beta ^ (1 << j)
                assert adjacent(f(Prime(beta)), f(Prime(nb)))
                assert adjacent(f(DoublePrime(beta)), f(DoublePrime(nb)))
        assert len(seen) == (m + 1) << q


@pytest.mark.parametrize("m", [1, 3, 5])
def test_concat_examples(m):
    a, b = dvop_basic(2, 1), dvop_half(2)
    sp = concat_dvop_paths(m, a, b)
    assert len(sp) == 16
    assert sp.length == a.k + m + b.k
    f = sharp_map(m, 4, 0)
    edges = set()
    for i in range(len(sp)):
        verts = [f(x) for x in sp.sharp_vertices(i)]
        assert all(adjacent(x, y) for x, y in zip(verts, verts[1:]))
        assert len(set(verts)) == len(verts)
        # the rung of vertex i is used in full, from position 0 to m
        assert sp.sharp_vertices(i)[a.k] == Prime(i)
        assert sp.sharp_vertices(i)[a.k + m] == DoublePrime(i)
        new = {frozenset(e) for e in zip(verts, verts[1:])}
        assert not new & edges
        edges |= new
    assert sp.complement_prime == a.complement
    assert sp.complement_double_prime == b.complement


def test_concat_rejects_mismatched_graphs():
    with pytest.raises(InvalidParameter):
        concat_dvop_paths(3, dvop_basic(2, 1), dvop_half(4))


def test_even_gamma_required_for_blocks():
    for g in range(8):
        if parity(g):
            with pytest.raises(InvalidIndex):
                stretch_map_odd(3, 1, g)
        else:
            stretch_map_odd(3, 1, g)

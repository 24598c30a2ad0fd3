import itertools
import random

import pytest
from hypothesis import given, strategies as st

from trifam import gf2
from trifam.gf2 import GF2Map


def test_inner_examples():
    assert gf2.inner(5, 3) == 1
    assert gf2.inner(1, 3) == 1
    assert all(gf2.inner(x, 0) == 0 for x in range(16))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_inner_bilinear_exhaustive(m):
    q = 1 << m
    for x, y, z in itertools.product(range(q), repeat=3):
        assert gf2.inner(x, y) == gf2.inner(y, x)
        assert gf2.inner(x ^ y, z) == gf2.inner(x, z) ^ gf2.inner(y, z)


def test_orth():
    assert gf2.orth(1) == [0, 2, 4, 6]
    assert gf2.orth(7) == [0, 3, 5, 6]
    assert gf2.orth(0) == list(range(8))
    assert all(len(gf2.orth(x)) == 4 for x in range(1, 8))
    assert all(len(gf2.orth(x, 4)) == 8 for x in range(1, 16))


def test_is_regular_examples():
    assert gf2.is_regular(GF2Map.identity(3))
    f = GF2Map(3, (4, 6, 5))
    assert gf2.is_regular(f)
    # exhaustive image check as the independent oracle
    assert sorted(f(x) for x in range(8)) == list(range(8))
    assert not gf2.is_regular(GF2Map(3, (1, 2, 3)))
    assert sorted(GF2Map(3, (1, 2, 3)).table()) != list(range(8))


@pytest.mark.parametrize("m, count", [(1, 1), (2, 6), (3, 168), (4, 20160)])
def test_enumerate_regular_counts(m, count):
    maps = gf2.enumerate_regular(m)
    assert len(maps) == count == gf2.regular_count(m)
    assert len({f.images for f in maps}) == count
    assert all(gf2.is_regular(f) for f in maps)


def test_regular_matches_bijective_tables():
    by_table = [f for f in (GF2Map(3, imgs) for imgs in itertools.product(range(8), repeat=3))
                if sorted(f.table()) == list(range(8))]
    assert {f.images for f in by_table} == {f.images for f in gf2.enumerate_regular(3)}


@pytest.mark.parametrize("m", [3, 4])
def test_inverse_exhaustive(m):
    for f in gf2.enumerate_regular(m):
        g = f.inverse()
        assert all(f(g(x)) == x and g(f(x)) == x for x in range(1 << m))


def test_inverse_of_singular_map_raises():
    with pytest.raises(ValueError):
        GF2Map(3, (1, 2, 3)).inverse()


def test_group_closure_spot_check():
    maps = gf2.enumerate_regular(4)
    members = {f.images for f in maps}
    rng = random.Random(7)
    for _ in range(500):
        f, g = rng.choice(maps), rng.choice(maps)
        h = f.compose(g)
        assert h.images in members
        assert all(h(x) == f(g(x)) for x in range(16))


def test_from_table_rejects_nonlinear():
    assert GF2Map.from_table(GF2Map(3, (4, 6, 5)).table(), 3).images == (4, 6, 5)
    with pytest.raises(ValueError):
        GF2Map.from_table((0, 1, 2, 4, 3, 5, 6, 7), 3)


def test_bad_maps_rejected():
    with pytest.raises(ValueError):
        GF2Map(3, (1, 2))
    with pytest.raises(ValueError):
        GF2Map(3, (1, 2, 8))
    with pytest.raises(ValueError):
        GF2Map(5, (1, 2, 4, 8, 16))


def test_subspace_counts():
    # Gaussian binomials [4 choose k]_2
    assert [len(gf2.subspaces(4, k)) for k in (1, 2, 3)] == [15, 35, 15]
    assert len(gf2.subspaces(3, 2)) == 7


@given(st.lists(st.integers(0, 15), max_size=6))
def test_rank_matches_span_size(vectors):
    assert len(gf2.span(vectors)) == 2 ** gf2.rank(vectors)

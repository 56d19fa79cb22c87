import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhcycle.topology import (
    backup_vertex,
    build_direct,
    build_recursive,
    compose,
    decode,
    decompose,
    encode,
    frame_map,
    insert_digit,
    drop_digit,
    invert,
    is_automorphism,
    reflect_map,
    rotate_map,
    swap_digits_map,
    swap_inner_map,
)


def test_encode_decode_examples():
    assert encode([0]) == 0
    assert encode([1, 2]) == 1 + 4 * 2
    assert decode(9, 2) == (1, 2)
    with pytest.raises(ValueError):
        encode([4])
    with pytest.raises(ValueError):
        encode([])


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_encode_roundtrip(digits):
    assert decode(encode(digits), len(digits)) == tuple(digits)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sizes(n):
    t = build_direct(n)
    assert t.order == 4 ** n
    assert len(t.edges) == n * 4 ** n
    assert all(len(t.dimension_edges(i)) == 4 ** n for i in range(n))


def test_bh1_is_a_four_cycle():
    t = build_direct(1)
    assert t.edges == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_bh2_neighbours_of_origin():
    # (0,0) reaches (1,0),(3,0) in dimension 0 and (1,1),(3,1) in dimension 1
    t = build_direct(2)
    assert sorted(t.neighbors[0]) == [(1, 0), (3, 0), (5, 1), (7, 1)]


def test_bad_n():
    with pytest.raises(ValueError):
        build_direct(0)
    with pytest.raises(ValueError):
        build_recursive(-1)


def test_dimension_of_non_edge():
    t = build_direct(2)
    with pytest.raises(ValueError):
        t.dimension(0, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_decompose_parts(n):
    t = build_direct(n)
    for i in range(1, n):
        dec = decompose(t, i)
        assert sorted(v for p in dec.parts for v in p) == list(t.vertices)
        assert len(dec.cross_edges) == 4 ** n
        for v in t.vertices:
            j, x = dec.to_local(v)
            assert dec.to_global(j, x) == v
    with pytest.raises(ValueError):
        decompose(t, 0)


@given(st.integers(0, 4 ** 4 - 1), st.integers(1, 3), st.integers(0, 3))
def test_drop_insert_digit(v, i, value):
    w = insert_digit(drop_digit(v, i), i, value)
    assert drop_digit(w, i) == drop_digit(v, i)
    assert decode(w, 4)[i] == value


def test_backup_vertex():
    assert backup_vertex(0) == 2
    assert backup_vertex(3) == 1
    assert backup_vertex(backup_vertex(13)) == 13


@pytest.mark.parametrize("n", [2, 3])
def test_symmetries_are_automorphisms(n):
    t = build_direct(n)
    assert is_automorphism(t, reflect_map(n))
    for k in range(1, n):
        assert is_automorphism(t, swap_inner_map(n, k))
        assert is_automorphism(t, rotate_map(n, k, 1))
        for i in range(1, n):
            assert is_automorphism(t, swap_digits_map(n, i, k))


@pytest.mark.parametrize("n", [2, 3])
def test_swap_inner_exchanges_dimensions(n):
    t = build_direct(n)
    top = n - 1
    perm = swap_inner_map(n, top)
    for (u, v), d in t.edge_dim.items():
        want = {0: top, top: 0}.get(d, d)
        assert t.dimension(perm[u], perm[v]) == want


@pytest.mark.parametrize("n", [2, 3])
def test_frame_map_puts_split_on_top(n):
    t = build_direct(n)
    top = n - 1
    for split in range(n):
        for rotate in range(4):
            for reflect in (False, True):
                perm = frame_map(n, split, rotate, reflect)
                assert is_automorphism(t, perm)
                for (u, v), d in t.edge_dim.items():
                    assert (t.dimension(perm[u], perm[v]) == top) == (d == split)


def test_compose_invert():
    p = rotate_map(2, 1, 1)
    assert compose(p, invert(p)) == tuple(range(16))


def test_not_automorphism():
    t = build_direct(1)
    assert not is_automorphism(t, (0, 2, 1, 3))
    assert not is_automorphism(t, (0, 0, 1, 2))


@settings(max_examples=50)
@given(st.integers(1, 3))
def test_json_export(n):
    doc = json.loads(build_direct(n).to_json())
    assert doc["n"] == n and len(doc["vertices"]) == 4 ** n and len(doc["edges"]) == n * 4 ** n


def test_dot_export_bh1():
    dot = build_direct(1).to_dot()
    lines = dot.splitlines()
    assert sum("--" in x for x in lines) == 4
    assert sum("[label=" in x and "--" not in x for x in lines) == 4

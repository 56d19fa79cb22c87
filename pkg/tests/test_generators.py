import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhcycle.constructor import check_preconditions
from bhcycle.faults import find_f4_cycles, isolated_vertices, partition, pivot_vertices
from bhcycle.harness.generators import GENERATORS, GeneratorError, generate_faults
from bhcycle.topology import build_direct

T2, T3, T4 = build_direct(2), build_direct(3), build_direct(4)


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_deterministic(name):
    a = generate_faults(name, 3, 8, seed=7, index=3)
    b = generate_faults(name, 3, 8, seed=7, index=3)
    assert a == b and len(a) == 8
    assert check_preconditions(T3, a).ok


def test_index_changes_the_draw():
    draws = {tuple(generate_faults("uniform", 3, 8, seed=0, index=i).sorted_edges()) for i in range(10)}
    assert len(draws) == 10


def test_f4_forge_exact_n2():
    f = generate_faults("f4-forge", 2, 4, exact=True, variant="full", require_ok=False)
    assert f.sorted_edges() == [(0, 5), (0, 7), (2, 5), (2, 7)]
    assert len(find_f4_cycles(T2, f)) == 2


def test_f4_forge_mixed_n2():
    f = generate_faults("f4-forge", 2, 4, exact=True, mixed=True, variant="full", require_ok=False)
    assert f.sorted_edges() == [(0, 3), (0, 7), (2, 3), (2, 7)]
    assert [c.pair for c in find_f4_cycles(T2, f)] == [(0, 2)]


def test_f4_forge_too_few_faults():
    with pytest.raises(GeneratorError):
        generate_faults("f4-forge", 3, 3, exact=True, variant="full", require_ok=False)


def test_star_isolates_a_vertex_n3():
    f = generate_faults("star", 3, 2 * 3 - 2, seed=0, centers=1, mode="isolated")
    assert any(isolated_vertices(T3, f.edges, s) for s in (1, 2))


def test_star_pivot_mode():
    f = generate_faults("star", 3, 8, seed=0, centers=1, mode="pivot")
    assert any(pivot_vertices(T3, f.edges, s) for s in (1, 2))


def test_dim_heavy_n4():
    f = generate_faults("dim-heavy", 4, 13, seed=0, dim=2, heavy=4)
    assert len(f.slice(2)) >= 4


def test_subcube_heavy_hits_threshold():
    f = generate_faults("subcube-heavy", 4, 13, seed=0, inside=9, split=3)
    assert max(partition(f, 3).counts) >= 9


def test_subcube_heavy_small_k():
    # the requested inside count is clamped to k
    f = generate_faults("subcube-heavy", 2, 2, seed=0, inside=5, split=1, require_ok=False)
    assert len(f) == 2


def test_unknown_generator():
    with pytest.raises(GeneratorError, match="unknown generator"):
        generate_faults("nope", 3, 4)


def test_k_out_of_range():
    with pytest.raises(GeneratorError):
        generate_faults("uniform", 2, 33)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(GENERATORS)), st.integers(0, 10 ** 6), st.integers(0, 8))
def test_outputs_meet_preconditions(name, index, k):
    try:
        f = generate_faults(name, 3, k, seed=1, index=index)
    except GeneratorError:
        return
    assert len(f) == k and check_preconditions(T3, f).ok

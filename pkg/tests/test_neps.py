from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import certification_corpus
from pstneps.neps import (
    NepsSpec,
    SizeCapError,
    SpecError,
    adjacency_from_definition,
    adjacency_from_kron,
    c_of,
    check_size,
    degree,
    embed,
    fiber,
    hamming_weight,
    index_vertex,
    is_standard_basis,
    neps_adjacency,
    project_star,
    shift_matrix,
    size_cap,
    split_parts,
    standard_basis,
    validate_spec,
    vertex_add,
    vertex_coords,
    vertex_index,
    vertex_sub,
    xor,
)


def adjacency_by_pairs(spec):
    verts = list(itertools.product(*(range(n) for n in spec.factors)))
    n = len(verts)
    out = np.zeros((n, n))
    for i, u in enumerate(verts):
        for j, v in enumerate(verts):
            pattern = tuple(int(a != b) for a, b in zip(u, v))
            if pattern in spec.basis:
                out[i, j] = 1
    return out


@st.composite
def small_specs(draw, max_n=64):
    m = draw(st.integers(1, 4))
    factors = tuple(draw(st.sampled_from([2, 2, 3, 4, 5])) for _ in range(m))
    if np.prod(factors) > max_n:
        factors = factors[:1]
        m = 1
    patterns = [p for p in itertools.product((0, 1), repeat=m) if any(p)]
    basis = draw(st.lists(st.sampled_from(patterns), min_size=1, max_size=len(patterns), unique=True))
    return NepsSpec(factors, basis)


# validation -----------------------------------------------------------------

@pytest.mark.parametrize(
    "raw, fragment",
    [
        ({"factors": [3, 1], "basis": [[1, 0]]}, "factor 1"),
        ({"factors": [3, 2], "basis": [[1, 2]]}, "basis row 0"),
        ({"factors": [3, 2], "basis": [[1, 0, 1]]}, "basis row 0"),
        ({"factors": [3, 2], "basis": [[1, 0], [0, 0]]}, "basis row 1: zero"),
        ({"factors": [3, 2], "basis": [[1, 0], [1, 1], [1, 0]]}, "basis row 2: duplicate of row 0"),
        ({"factors": [3, 2], "basis": []}, "empty"),
        ({"factors": [3, 2]}, "missing"),
        ({"factors": [3, 2], "basis": [[1, 0]], "extra": 1}, "unknown keys"),
        ({"factors": [3, 2.5], "basis": [[1, 0]]}, "factor 1"),
        ({"factors": [3, 2], "basis": [[True, 0]]}, "basis row 0"),
    ],
)
def test_validation_errors_name_the_row(raw, fragment):
    with pytest.raises(SpecError, match=fragment):
        validate_spec(raw)


def test_spec_properties():
    spec = NepsSpec((2, 6, 3, 2), [(0, 1, 1, 0), (1, 0, 0, 1)])
    assert spec.large_indices == (1, 2)
    assert spec.binary_indices == (0, 3)
    assert (spec.d, spec.r, spec.h, spec.n_vertices) == (2, 2, 3, 72)
    assert NepsSpec((2, 2), [(1, 0)]).h is None
    assert validate_spec(spec.to_dict()) == spec


def test_size_cap(monkeypatch):
    spec = NepsSpec((4, 4, 4), [(1, 0, 0)])
    assert check_size(spec, 64) == 64
    with pytest.raises(SizeCapError):
        check_size(spec, 63)
    monkeypatch.setenv("PSTNEPS_SIZE_CAP", "10")
    assert size_cap() == 10
    with pytest.raises(SizeCapError):
        neps_adjacency(spec)
    monkeypatch.setenv("PSTNEPS_SIZE_CAP", "lots")
    with pytest.raises(SpecError):
        size_cap()


# vertices --------------------------------------------------------------------

def test_vertex_index_example():
    spec = NepsSpec((3, 2), [(1, 0)])
    assert vertex_index(spec, (2, 1)) == 5
    assert index_vertex(spec, 5) == (2, 1)
    with pytest.raises(SpecError):
        vertex_index(spec, (3, 0))


@given(small_specs())
def test_vertex_index_bijection(spec):
    coords = vertex_coords(spec)
    for k in range(spec.n_vertices):
        v = index_vertex(spec, k)
        assert vertex_index(spec, v) == k
        assert tuple(coords[k]) == v


def test_vertex_arithmetic():
    spec = NepsSpec((3, 2), [(1, 0)])
    assert vertex_add(spec, (2, 1), (1, 1)) == (0, 0)
    assert vertex_sub(spec, (0, 0), (2, 1)) == (1, 1)


# basis combinatorics ---------------------------------------------------------

def test_c_of_examples():
    assert c_of([(1, 0, 1), (1, 1, 0)]) == (0, 1, 1)
    assert c_of([], 3) == (0, 0, 0)
    assert xor((1, 1), (0, 1)) == (1, 0)


def test_hamming_triangle_exhaustive():
    vectors = list(itertools.product((0, 1), repeat=4))
    for a, b in itertools.product(vectors, repeat=2):
        assert hamming_weight(xor(a, b)) <= hamming_weight(a) + hamming_weight(b)


def test_project_star_and_fiber():
    spec = NepsSpec((3, 2, 2), [(1, 0, 0), (0, 1, 0), (1, 1, 1), (1, 0, 1)])
    assert project_star(spec) == {(0,), (1,)}
    assert fiber(spec, (1,)) == {(0, 0), (1, 1), (0, 1)}
    assert fiber(spec, (0,)) == {(1, 0)}
    a1, a2, a3 = split_parts(spec)
    assert a1 == ((1, 0, 0),)
    assert a2 == ((0, 1, 0),)
    assert set(a3) == {(1, 1, 1), (1, 0, 1)}


def test_fiber_of_single_large_vector():
    spec = NepsSpec((3, 2, 2), [(1, 0, 0), (0, 1, 0)])
    assert fiber(spec, (1,)) == {(0, 0)}


def test_embed_and_standard_basis():
    spec = NepsSpec((2, 3, 2), [(0, 1, 0)])
    assert embed(spec, (1, 1), spec.binary_indices) == (1, 0, 1)
    assert standard_basis(3) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert is_standard_basis(NepsSpec((3, 2), [(0, 1), (1, 0)]))
    assert not is_standard_basis(spec)


# adjacency -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(small_specs())
def test_adjacency_paths_agree_with_pair_loop(spec):
    ref = adjacency_by_pairs(spec)
    assert np.array_equal(adjacency_from_definition(spec).real, ref)
    assert np.array_equal(adjacency_from_kron(spec).real, ref)


def test_adjacency_paths_agree_on_corpus():
    for spec in certification_corpus():
        assert spec.n_vertices <= 256
        assert np.array_equal(adjacency_from_definition(spec), adjacency_from_kron(spec)), spec


@settings(max_examples=30, deadline=None)
@given(small_specs(), st.randoms(use_true_random=False))
def test_cayley_invariance(spec, rnd):
    adj = neps_adjacency(spec)
    w = tuple(rnd.randrange(n) for n in spec.factors)
    perm = [vertex_index(spec, vertex_add(spec, index_vertex(spec, k), w)) for k in range(spec.n_vertices)]
    assert np.array_equal(adj[np.ix_(perm, perm)], adj)


@given(small_specs())
def test_regular_with_product_degree(spec):
    adj = neps_adjacency(spec).real
    assert np.array_equal(adj, adj.T)
    assert np.all(np.diag(adj) == 0)
    assert set(adj.sum(axis=1)) == {degree(spec)}


def test_degree_example():
    assert degree(NepsSpec((3, 6, 2, 2), [(1, 1, 0, 0), (1, 0, 0, 0)])) == 12


def test_shift_matrix():
    spec = NepsSpec((3, 2), [(1, 0)])
    s = shift_matrix(spec, (0, 1))
    for k in range(6):
        u = index_vertex(spec, k)
        assert s[k, vertex_index(spec, vertex_add(spec, u, (0, 1)))] == 1
    assert np.array_equal(s @ s, np.eye(6))
    with pytest.raises(SpecError):
        shift_matrix(spec, (1, 0))


def test_random_specs_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        m = rng.randint(1, 4)
        factors = [rng.choice([2, 3, 4]) for _ in range(m)]
        patterns = [p for p in itertools.product((0, 1), repeat=m) if any(p)]
        spec = NepsSpec(factors, rng.sample(patterns, rng.randint(1, len(patterns))))
        assert validate_spec(spec.to_dict()) == spec

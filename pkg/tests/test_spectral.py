import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genutil import random_connected_multigraph, random_tree
from oracles import charpoly_oracle
from treespectra import (
    GaussianRational,
    Multigraph,
    MultigraphError,
    eig_hermitian,
    forest_spectrum,
    gauge_normalize,
    isolate_real_roots,
    jacobi_matrix,
    parse_graph,
    tree_char_poly,
)

P4_TEXT = """\
vertex p0
vertex p1
vertex p2
vertex p3
edge p0 p1 weight 1
edge p1 p2 weight 1
edge p2 p3 weight 1
"""


def test_jacobi_entries_k23():
    g = parse_graph(
        "vertex a potential 1/2\nvertex b\nedge a b weight 1/3+2i\n"
    )
    m = jacobi_matrix(g)
    rows = m.entries
    assert rows[0][0] == GaussianRational(Fraction(1, 2))
    assert rows[1][0] == GaussianRational(Fraction(1, 3), 2)
    assert rows[0][1] == GaussianRational(Fraction(1, 3), -2)


def test_loop_convention_doubles_real_part():
    g = parse_graph("vertex a\nedge a a weight 3+5i\n")
    m = jacobi_matrix(g)
    assert m.entries[0][0] == GaussianRational(6)
    arr = jacobi_matrix(g).as_numpy()
    assert arr[0, 0] == 6.0 + 0.0j


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_jacobi_always_hermitian(seed):
    g = random_connected_multigraph(random.Random(seed), complex_ok=True)
    arr = jacobi_matrix(g).as_numpy()
    assert np.abs(arr - arr.conj().T).max() == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_tree_char_poly_matches_sympy(seed):
    t = random_tree(random.Random(seed), max_vertices=6, complex_ok=True)
    ours = tree_char_poly(t)
    assert list(ours.coeffs) == charpoly_oracle(t)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_tree_char_poly_radical_weights(seed):
    t = random_tree(
        random.Random(seed), max_vertices=5, complex_ok=True, radical_ok=True
    )
    assert list(tree_char_poly(t).coeffs) == charpoly_oracle(t)


def test_tree_char_poly_rejects_cycles():
    g = parse_graph("vertex a\nvertex b\nedge a b weight 1\nedge a b weight 1\n")
    with pytest.raises(MultigraphError):
        tree_char_poly(g)


def test_forest_spectrum_p4_golden():
    g = parse_graph(P4_TEXT)
    spec = forest_spectrum(g)
    floats = sorted(r.float_hint for r, _ in spec)
    phi = (1 + 5**0.5) / 2
    expect = sorted([-phi, -phi + 1, phi - 1, phi])
    assert len(floats) == 4
    assert max(abs(a - b) for a, b in zip(floats, expect)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_forest_spectrum_counts_vertices(seed):
    t = random_tree(random.Random(seed), max_vertices=6)
    assert sum(m for _, m in forest_spectrum(t)) == t.vertex_count


def test_gauge_normalize_makes_moduli():
    g = parse_graph("vertex a\nvertex b\nvertex c\nedge a b weight 3+4i\nedge b c weight -2i\n")
    gn = gauge_normalize(g)
    for e in gn.graph.edges():
        w = gn.graph.weight(e)
        assert w.im == 0 and w.re > 0
    ws = sorted(complex(gn.graph.weight(e)).real for e in gn.graph.pair_representatives())
    assert ws == [2.0, 5.0]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_gauge_normalize_preserves_tree_spectrum(seed):
    t = random_tree(random.Random(seed), max_vertices=6, complex_ok=True)
    gn = gauge_normalize(t)
    assert tree_char_poly(gn.graph) == tree_char_poly(t)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_eig_hermitian_matches_exact_roots(seed):
    t = random_tree(random.Random(seed), max_vertices=6, complex_ok=True)
    w, v = eig_hermitian(jacobi_matrix(t).as_numpy())
    exact = []
    for root, mult in forest_spectrum(t):
        exact.extend([root.float_hint] * mult)
    exact.sort()
    assert max(abs(a - b) for a, b in zip(w, exact)) < 1e-8
    m = jacobi_matrix(t).as_numpy()
    assert np.abs(m @ v - v * w).max() < 1e-9 * max(1.0, np.linalg.norm(m, 2))


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0.0, 1.0], [0.5, 0.0]]))

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rootgrade import borel, weylgraph
from rootgrade.rootsys import system_from_label


def test_g2_large_spectrum():
    spectrum = weylgraph.laplacian_spectrum(weylgraph.large_weyl_graph(system_from_label("G2")))
    assert spectrum.eigenvalues == [(0, 1), (10, 6), (12, 5)]


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_small_graph_is_a_subgraph_of_the_large_graph(label):
    enum = borel.enumerate_borel_sets(system_from_label(label))
    large, small = weylgraph.large_weyl_graph(enum), weylgraph.small_weyl_graph(enum)
    assert set(small.edges) <= set(large.edges)
    assert small.is_connected()


def test_reference_path_constants_are_reproduced():
    for label, value in weylgraph.REFERENCE_PATH_CONSTANTS.items():
        pc = weylgraph.path_constant(system_from_label(label))
        assert pc.constant == value
        assert pc.a_constant == pc.constant
        assert pc.b_constant == pc.constant * pc.edge_factor


def test_other_routings_are_weaker_but_valid():
    system = system_from_label("G2")
    optimal = weylgraph.path_constant(system).constant
    assert weylgraph.path_constant(system, "uniform").constant >= optimal
    assert weylgraph.path_constant(system, "lowest").constant >= optimal


def test_laplacian_is_adjoint_of_difference():
    graph = weylgraph.large_weyl_graph(system_from_label("B2"))
    g = np.arange(graph.order, dtype=float) ** 2
    assert np.allclose(graph.adjoint_difference(graph.difference(g)), graph.laplacian_apply(g))


def test_exact_and_identity_routes_agree():
    graph = weylgraph.large_weyl_graph(system_from_label("B3"))
    exact = weylgraph.laplacian_spectrum(graph)
    via_identity = weylgraph.laplacian_spectrum(graph, exact_limit=0)
    assert exact.eigenvalues == via_identity.eigenvalues
    assert exact.method != via_identity.method


def test_dot_output_lists_every_edge():
    graph = weylgraph.small_weyl_graph(system_from_label("A2"))
    dot = graph.to_dot()
    assert dot.startswith("graph")
    assert dot.count("style=solid") == len(graph.edges)
    assert dot.count("style=dotted") == graph.order // 2  # opposite pairs


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_half_edge_and_union_cover_claims(label):
    graph = weylgraph.large_weyl_graph(system_from_label(label))
    for v in range(graph.order):
        assert all(2 * missing == total for missing, total in weylgraph.claim_half_edges(graph, v))
        assert weylgraph.claim_union_cover(graph, v)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "BC2", "G2"]), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_path_constant_inequality_on_random_functions(label, seed, width):
    enum = borel.enumerate_borel_sets(system_from_label(label))
    large, small = weylgraph.large_weyl_graph(enum), weylgraph.small_weyl_graph(enum)
    C = float(weylgraph.path_constant(enum).constant)
    g = weylgraph.random_vertex_function(large.order, width, np.random.default_rng(seed))
    ds = small.edge_norm_sq(small.difference(g))
    dl = large.edge_norm_sq(large.difference(g))
    assert ds <= dl * (1 + 1e-12) + 1e-12
    assert dl <= C * ds * (1 + 1e-9) + 1e-9


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_exact_rational_functions_keep_the_inequality_exactly(values):
    enum = borel.enumerate_borel_sets(system_from_label("A2"))
    large, small = weylgraph.large_weyl_graph(enum), weylgraph.small_weyl_graph(enum)
    g = np.array([Fraction(v) for v in values], dtype=object)
    ds = small.edge_norm_sq(small.difference(g))
    dl = large.edge_norm_sq(large.difference(g))
    assert ds <= dl <= 5 * ds

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from rootgrade import borel
from rootgrade.rootsys import system_from_label


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "BC2", "A3", "C3"])
def test_lp_route_agrees_with_reflection_route(label):
    system = system_from_label(label)
    fast = {b.positives for b in borel.BorelEnumeration(system, "reflection").borel_sets}
    exact = {b.positives for b in borel.BorelEnumeration(system, "lp").borel_sets}
    assert fast == exact


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "BC2", "A3", "B3"])
def test_borel_set_structure(label):
    system = system_from_label(label)
    enum = borel.enumerate_borel_sets(system)
    for b in enum.borel_sets:
        assert borel.positive_mask(system, b.representative) == b.positives
        assert enum.core(b.id) | enum.boundary(b.id) == b.positives
        assert enum.core(b.id) & enum.boundary(b.id) == 0
        # exactly one of each pair of opposite roots
        for i in range(len(system.roots)):
            assert (b.positives >> i & 1) != (b.positives >> system.negation[i] & 1)


def test_opposite_is_an_involution():
    enum = borel.enumerate_borel_sets(system_from_label("B3"))
    assert all(enum.opposite[enum.opposite[v]] == v for v in range(len(enum)))
    assert all(enum.are_opposite(v, enum.opposite[v]) for v in range(len(enum)))


def test_comaximal_neighbours_in_a2():
    enum = borel.enumerate_borel_sets(system_from_label("A2"))
    assert all(len(enum.comaximal_neighbors(v)) == 2 for v in range(len(enum)))


def test_induced_ordering_is_by_functional_value():
    system = system_from_label("G2")
    enum = borel.enumerate_borel_sets(system)
    b = enum.borel_sets[0]
    order = enum.induced_ordering(b.id)
    assert sorted(order) == system.members(b.positives)


def test_json_is_deterministic():
    system = system_from_label("B2")
    assert borel.enumerate_borel_sets(system).to_json() == borel.enumerate_borel_sets(system).to_json()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "BC2", "A3"]), st.integers(0, 10_000))
def test_generic_functional_lands_in_a_known_borel_set(label, seed):
    system = system_from_label(label)
    enum = borel.enumerate_borel_sets(system)
    f = borel.generic_functional(system, seed=seed)
    assert f.is_generic_for(system)
    assert enum.find(borel.positive_mask(system, f.covector)) is not None

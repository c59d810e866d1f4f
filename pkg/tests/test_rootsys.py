from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from rootgrade.rootsys import RootSystem, build_classical, direct_sum, standard_count, system_from_label

CLASSICAL = [("A", 2), ("A", 4), ("B", 3), ("C", 3), ("D", 4), ("BC", 2), ("BC", 3), ("G", 2), ("F", 4),
             ("E", 6), ("E", 7), ("E", 8)]


@pytest.mark.parametrize("family,n", CLASSICAL)
def test_root_counts_and_rank(family, n):
    system = build_classical(family, n)
    assert len(system.roots) == standard_count(family, n)
    assert system.rank == n


@pytest.mark.parametrize("family,n", CLASSICAL)
def test_symmetric_and_form_is_admissible(family, n):
    system = build_classical(family, n)
    assert all(system.roots[system.negation[i]] == tuple(-x for x in r) for i, r in enumerate(system.roots))
    assert system.form.problems(system) == []


def test_reducedness_and_regularity():
    assert build_classical("B", 3).is_reduced()
    assert not build_classical("BC", 2).is_reduced()
    assert build_classical("A", 2).is_regular()
    assert not build_classical("A", 1).is_regular()
    assert not direct_sum(build_classical("A", 1), build_classical("A", 1)).is_regular()


def test_irreducible_components_of_a_direct_sum():
    system = direct_sum(build_classical("A", 2), build_classical("B", 2))
    assert not system.is_irreducible()
    assert sorted(len(c.roots) for c in system.irreducible_components()) == [6, 8]


def test_json_round_trip():
    system = system_from_label("G2")
    assert RootSystem.from_json(system.to_json()).roots == system.roots


def test_unknown_label():
    with pytest.raises(ValueError):
        system_from_label("Q3")


def test_i2_labels():
    assert len(system_from_label("I2(6)").roots) == 12
    with pytest.raises(ValueError):
        system_from_label("I2(5)")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3", "G2", "BC2", "F4"]), st.data())
def test_pairings_are_integral(label, data):
    system = system_from_label(label)
    a = data.draw(st.integers(0, len(system.roots) - 1))
    b = data.draw(st.integers(0, len(system.roots) - 1))
    assert isinstance(system.pairing(system.roots[b], system.roots[a]), int)


def test_direct_sum_labels():
    system = system_from_label("A2xB2")
    assert system.label == "A2xB2" and len(system.roots) == 6 + 8
    assert sorted(len(c.roots) for c in system.irreducible_components()) == [6, 8]

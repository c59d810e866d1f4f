from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rootgrade import chevalley
from rootgrade.rootsys import build_classical, system_from_label


@pytest.fixture(scope="module")
def tables():
    return {label: chevalley.normalize_rank2_signs(chevalley.chevalley_basis(system_from_label(label)))
            for label in ("A2", "B2", "G2")}


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3", "B3", "C3", "D4"])
def test_chevalley_basis_is_consistent(label):
    table = chevalley.chevalley_basis(system_from_label(label))
    assert table.problems() == []
    assert table.jacobi_failures() == []


def test_bracket_is_antisymmetric(tables):
    for table in tables.values():
        n = len(table.roots)
        for a in range(n):
            for b in range(n):
                if table.sum_index(a, b) is not None:
                    assert table.bracket_constant(a, b) == -table.bracket_constant(b, a)


def test_a2_and_b2_catalog_identities_hold(tables):
    for label in ("A2", "B2"):
        assert all(check.holds for check in chevalley.verify_rank2_catalog(tables[label]))


def test_g2_catalog_identities_miss_a_factor(tables):
    failing = {c.identity.name for c in chevalley.verify_rank2_catalog(tables["G2"]) if not c.holds}
    assert failing == {"G2-1", "G2-3"}


def test_t2_identity(tables):
    assert chevalley.t2_identity_holds(tables["B2"])


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_one_parameter_identity(label, tables):
    group = chevalley.AdjointGroup(tables[label])
    assert all(chevalley.one_parameter_identity_holds(group, a) for a in range(len(tables[label].roots)))


def test_exponential_nilpotency_indices(tables):
    group = chevalley.AdjointGroup(tables["G2"])
    indices = {group.nilpotency_index(a) for a in range(12)}
    assert indices == {3, 4}  # long roots: ad^3 = 0; short roots: ad^4 = 0


def test_exponential_is_unipotent(tables):
    exp = chevalley.adjoint_exponential(tables["B2"], 0)
    m = exp.substitute(t=3)
    d = m.shape[0]
    assert np.allclose(np.linalg.matrix_power(m - np.eye(d), d), 0)
    assert round(np.linalg.det(m)) == 1


def test_weak_subsystem_consistency():
    table = chevalley.chevalley_basis(build_classical("B", 3))
    sub = build_classical("B", 3).subsystem([(1, -1, 0), (0, 1, 0)])
    assert chevalley.weak_subsystem_consistency(table, sub)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.data())
def test_commutator_leading_constant_is_the_structure_constant(label, data):
    table = chevalley.normalize_rank2_signs(chevalley.chevalley_basis(system_from_label(label)))
    n = len(table.roots)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    if table.roots[a] == tuple(-x for x in table.roots[b]) or a == b:
        return
    terms = chevalley.commutator_constants(table, [(a, b)])[(a, b)]
    leading = next((t.coefficient for t in terms if (t.i, t.j) == (1, 1)), 0)
    expected = table.bracket_constant(a, b) if table.sum_index(a, b) is not None else 0
    assert leading == expected

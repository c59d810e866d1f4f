from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from rootgrade import unitary
from rootgrade.rings import parse_ring


def _all_hold(model, relations):
    return all(r.failures == 0 for r in unitary.check_relations(model, relations))


@pytest.mark.parametrize("ring_label,omega", [("F9*", "1"), ("F9*", "-1"), ("Z/4*", "1"), ("Z/4*", "-1"), ("F4*", "1")])
def test_hyperbolic_relations_hold(ring_label, omega):
    model = unitary.unitary_steinberg_model(2, parse_ring(ring_label), omega)
    assert _all_hold(model, unitary.even_relations(model))


def test_hyperbolic_model_is_graded_and_strong():
    graded = unitary.unitary_steinberg_model(2, parse_ring("F9*"), 1).graded_model()
    assert graded.grading_holds()
    assert graded.strong_report()["strong"]


def test_small_form_parameter_loses_strongness_at_short_roots():
    # over Z/4 with omega = 1 the long parameters are {0, 2}, so long-short commutators only reach 2R
    graded = unitary.unitary_steinberg_model(2, parse_ring("Z/4*"), 1).graded_model()
    assert graded.grading_holds()
    report = graded.strong_report()
    assert not report["strong"]
    assert all(failure["gamma"] in ("(1,-1)", "(-1,1)", "(1,1)", "(-1,-1)") for failure in report["failures"])


def test_odd_relations_with_the_computed_factor():
    model = unitary.odd_unitary_model(2, parse_ring("F4*"))
    assert _all_hold(model, unitary.odd_relations(model, "st_star"))


def test_odd_relation_with_minus_st_fails_when_rr_star_is_nonzero():
    model = unitary.odd_unitary_model(2, parse_ring("F9*"))
    reports = {r.name: r for r in unitary.check_relations(model, unitary.odd_relations(model, "minus_st"))}
    assert reports["E3"].failures > 0
    assert all(r.failures == 0 for name, r in reports.items() if name != "E3")


def test_short_domain_of_the_odd_model():
    ring = parse_ring("F9*")
    model = unitary.odd_unitary_model(2, ring)
    for r, t in model.domain("short"):
        assert ring.mul(r, ring.conj(r)) == ring.add(t, ring.conj(t))


def test_invalid_parameters_are_rejected():
    ring = parse_ring("Z/4*")
    with pytest.raises(unitary.UnitaryError):
        unitary.unitary_steinberg_model(2, ring, 2)  # 2 is not a unit
    with pytest.raises(unitary.UnitaryError):
        unitary.unitary_steinberg_model(2, ring, 1, J=[1])  # 1 is not in Sym_{-1}
    with pytest.raises(unitary.UnitaryError):
        unitary.unitary_steinberg_model(1, ring, 1)


@pytest.mark.parametrize("n", [2, 3])
def test_symplectic_degeneration(n):
    report = unitary.degeneration_symplectic(n)
    assert report.holds and not report.magnitude_mismatches


@pytest.mark.parametrize("n", [3, 4])
def test_orthogonal_degeneration(n):
    report = unitary.degeneration_orthogonal(n)
    assert report.holds and not report.magnitude_mismatches


def test_rescaling_changes_omega_by_mu_star_over_mu():
    ring = parse_ring("F9*")
    report = unitary.rescaling_isomorphism(2, ring, "1", "x")
    assert report.holds
    assert ring.parse(report.omega_prime) == ring.neg(ring.one)


def test_solve_gf2():
    # x0 + x1 = 1, x1 = 1  ->  x0 = 0, x1 = 1
    assert unitary.solve_gf2([(0b11, 1), (0b10, 1)], 2) == [0, 1]
    assert unitary.solve_gf2([(0b1, 1), (0b1, 0)], 1) is None


def test_form_parameter_examples():
    ring = parse_ring("Z/4*")
    assert unitary.form_parameter_closure(ring, 1).labels() == ["0"]
    assert unitary.form_parameter_closure(ring, 1, ["2"]).labels() == ["0", "2"]
    with pytest.raises(unitary.UnitaryError):
        unitary.form_parameter_closure(ring, 1, ["1"])


def test_hyperbolic_reduction_induces_c_n():
    red = unitary.hyperbolic_reduction(3)
    assert len(red.induced.roots) == 18
    assert not red.kernel_roots


def test_build_model_kinds():
    assert unitary.build_model({"kind": "chevalley", "system": "A2", "ring": "F2"}).system.label == "A2"
    assert unitary.build_model({"kind": "linear", "n": 3, "ring": "Z/4"}).dim == 3
    assert unitary.build_model({"kind": "unitary", "n": 2, "ring": "F9*", "omega": 1}).dim == 4
    assert unitary.build_model({"kind": "odd_unitary", "n": 2, "ring": "F4*"}).dim == 5
    with pytest.raises(unitary.UnitaryError):
        unitary.build_model({"kind": "spin", "ring": "F2"})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z/4*", "F9*", "F4*", "F2[t]/(t^2)*"]), st.sampled_from(["1", "-1"]), st.data())
def test_form_parameter_closure_is_a_form_parameter_and_matches_the_normal_form(ring_label, omega, data):
    ring = parse_ring(ring_label)
    sym = [ring.label(a) for a in ring.sym(ring.parse(omega))]
    A = data.draw(st.lists(st.sampled_from(sym), max_size=3))
    closure = unitary.form_parameter_closure(ring, omega, A)
    assert closure.violations() == []
    assert {ring.parse(a) for a in A} <= closure.J
    assert unitary.form_parameter_closure(ring, omega, closure.labels()).J == closure.J
    assert unitary.form_parameter_normal_form(ring, omega, closure.labels()) == closure.J

from __future__ import annotations

import numpy as np
import pytest

from rootgrade import reduction, steinberg, unitary
from rootgrade.rings import parse_ring
from rootgrade.rootsys import system_from_label


@pytest.fixture(scope="module")
def a2_f2():
    return steinberg.elementary_chevalley_model(system_from_label("A2"), parse_ring("F2"))


def test_linear_and_adjoint_models_agree_in_order(a2_f2):
    linear = steinberg.elementary_linear_model(3, parse_ring("F2"))
    assert len(linear.full_group()) == len(a2_f2.full_group()) == 168


def test_root_subgroups_are_subgroups(a2_f2):
    assert a2_f2.subgroup_failures() == []
    assert a2_f2.grading_holds()
    assert a2_f2.core_normality_failures() == []


def test_g2_long_root_subgroups_form_an_a2_model():
    g2 = steinberg.elementary_chevalley_model(system_from_label("G2"), parse_ring("F2"))
    longest = max(g2.system.norm(r) for r in g2.system.roots)
    long_roots = [a for a, r in enumerate(g2.system.roots) if g2.system.norm(r) == longest]
    a2 = steinberg.elementary_chevalley_model(system_from_label("A2"), parse_ring("F2"))
    assert len(long_roots) == 6
    assert len(g2.closure(long_roots)) == len(a2.full_group()) == 168
    assert len(g2.full_group()) == 12096


def test_enlarged_root_subgroup_breaks_strongness():
    ring = parse_ring("F3")
    model = steinberg.elementary_linear_model(3, ring)
    gamma = model.root_index((1, 0, -1))
    flip = ring.identity_matrix(3)
    flip[0, 0] = ring.neg(ring.one)
    bigger = steinberg.subgroup_closure(ring, np.concatenate([model.subgroups[gamma].matrices, flip[None]]))
    broken = model.with_subgroup(gamma, steinberg.RootSubgroup(tuple(range(len(bigger))), bigger.matrices))
    assert model.strong_report()["strong"]
    report = broken.strong_report()
    assert not report["strong"]
    assert {f["gamma"] for f in report["failures"]} == {"(1,0,-1)"}


def test_closure_overflow_is_signalled():
    model = steinberg.elementary_chevalley_model(system_from_label("A2"), parse_ring("F3"))
    model.cap = 100
    with pytest.raises(steinberg.ClosureOverflow):
        model.full_group()


def test_standard_generators_need_t_for_dual_numbers():
    ring = parse_ring("F2[t]/(t^2)")
    model = steinberg.elementary_chevalley_model(system_from_label("A2"), ring)
    assert not steinberg.verify_generation(model, steinberg.standard_generators(model.system, ring, ["1"])).generated
    assert steinberg.verify_generation(model, steinberg.standard_generators(model.system, ring, ["1", "t"])).generated


def test_borel_route_agrees_with_closure_route():
    ring = parse_ring("F3")
    model = steinberg.elementary_chevalley_model(system_from_label("B2"), ring)
    sigma = steinberg.standard_generators(model.system, ring, ["1"])
    assert steinberg.verify_generation(model, sigma, "closure").generated
    assert steinberg.verify_generation(model, sigma, "borel").generated


def test_named_identities():
    results = {r.name: r for r in steinberg.verify_named_identities()}
    assert results["t2"].holds
    assert results["G2-bounded-six-factor"].holds
    assert results["G2-commutator-product"].holds
    # two of the B2 generation cases need a correction term in characteristic not 2
    assert {name for name, r in results.items() if not r.holds} == {"generatorsB2-case2b", "generatorsB2-case3b"}


def test_coarsening_along_a_reduction_keeps_strongness():
    ring = parse_ring("F2")
    model = steinberg.elementary_chevalley_model(system_from_label("B3"), ring)
    red = reduction.builtin("B-B2", 3)
    coarse = steinberg.coarsened_grading(model, red)
    assert coarse.absorbed
    assert coarse.model.grading_holds()
    assert coarse.model.strong_report()["strong"]


def test_unique_factorization_of_the_positive_unipotent():
    model = steinberg.elementary_chevalley_model(system_from_label("B2"), parse_ring("F3"))
    report = steinberg.unique_factorization_check(model)
    assert report.bijective and report.product_count == 3 ** 4


def test_factorization_through_the_hyperbolic_reduction():
    ring = parse_ring("F9")
    linear = steinberg.elementary_linear_model(4, ring)
    coarse = steinberg.coarsened_grading(linear, unitary.hyperbolic_reduction(2)).model
    report = steinberg.unique_factorization_check(coarse, unitary.standard_positive_mask(coarse.system))
    assert report.bijective and report.product_count == 9 ** 6


def test_fattening_only_changes_non_reduced_systems():
    a2 = steinberg.elementary_chevalley_model(system_from_label("A2"), parse_ring("F2"))
    assert {k: len(v) for k, v in a2.fattened().subgroups.items()} == {k: len(v) for k, v in a2.subgroups.items()}
    odd = unitary.build_model({"kind": "odd_unitary", "n": 2, "ring": "F4*", "fattened": True})
    assert odd.grading_holds()
    assert odd.strong_report()["strong"]

from __future__ import annotations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rootgrade import spectra, steinberg
from rootgrade.rings import parse_ring
from rootgrade.rootsys import system_from_label


def _random_basis(rng, n, k):
    q, _ = np.linalg.qr(rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))
    return q[:, :k]


def test_group_axioms_for_constructed_groups():
    for group in [spectra.symmetric_group(3), spectra.heisenberg_group(3)[0], spectra.FiniteGroup.abelian([2, 3])]:
        assert group.check_subgroup(group.all()) == group.all()
        assert all(group.table[g, group.inverse[g]] == group.identity for g in range(group.order))


def test_heisenberg_center_and_quotient():
    G, x12, x23, center = spectra.heisenberg_group(3)
    assert G.order == 27 and len(center) == 3 and set(G.center()) == set(center)
    Q, coset = G.quotient(center)
    assert Q.order == 9
    assert len(Q.generated(coset[list(x12)])) == 3


def test_regular_representation_is_unitary_and_projectors_are_idempotent():
    G = spectra.symmetric_group(3)
    rep = spectra.RepresentationModel.regular(G)
    assert rep.is_unitary()
    H = G.generated([1])
    P = rep.projector(H)
    assert np.allclose(P @ P, P) and np.allclose(P, P.conj().T)


def test_irreducible_blocks_of_s3():
    rep = spectra.RepresentationModel.regular(spectra.symmetric_group(3))
    dims = sorted(b.shape[1] for b in rep.irreducible_blocks())
    # each irreducible appears with multiplicity equal to its dimension
    assert sum(dims) == 6 and dims.count(2) in (1, 2)


def test_codistance_on_f3_squared_is_exactly_one_half():
    G = spectra.FiniteGroup.abelian([3, 3])
    subs = [G.generated([G.abelian_element([3, 3], [1, 0])]), G.generated([G.abelian_element([3, 3], [0, 1])])]
    report = spectra.group_codistance(G, subs, blocks=True)
    assert report.generates
    assert report.value == pytest.approx(0.5, abs=1e-12)
    assert spectra.exactly_pairwise_orthogonal(spectra.RepresentationModel.regular(G), subs)


def test_non_generating_subgroups_give_codistance_one():
    G = spectra.FiniteGroup.abelian([2, 2])
    h = G.generated([G.abelian_element([2, 2], [1, 0])])
    report = spectra.group_codistance(G, [h, h])
    assert not report.generates and report.value == pytest.approx(1.0)


def test_heisenberg_central_step_bound():
    G, x12, x23, center = spectra.heisenberg_group(3)
    Q, coset = G.quotient(center)
    images = [Q.generated(coset[list(x)]) for x in (x12, x23)]
    eps = 1 - spectra.group_codistance(Q, images).value
    rep = spectra.RepresentationModel.regular(G)
    z = [c for c in center if c != G.identity][0]
    m = min(b.shape[1] for b in rep.irreducible_blocks() if not np.allclose(rep.apply(z, b), b))
    assert eps == pytest.approx(0.5) and m == 3
    bound = spectra.evaluate_bound("central_codistance_step", {"m": m, "eps": sympy.Rational(1, 2)})
    assert bound == sympy.Rational(5, 6)
    assert spectra.group_codistance(G, [x12, x23]).value <= float(bound) + 1e-9
    assert spectra.group_codistance(G, [x12, x23]).value <= 7 / 8


def test_epsilon_of_rank_two_systems():
    assert spectra.epsilon_phi(system_from_label("A2")) == sympy.Rational(1, 32)
    assert spectra.epsilon_phi(system_from_label("B2")) == sympy.Rational(8, 6 * 4 ** 4)


def test_bound_constraints_are_reported():
    with pytest.raises(spectra.SpectraError, match="0 <= rho < 1"):
        spectra.evaluate_bound("orthogonality_kazhdan", {"rho": 1})
    with pytest.raises(spectra.SpectraError):
        spectra.evaluate_bound("kazhdan_table", {"family": "E", "n": 6, "d": 0})
    with pytest.raises(spectra.SpectraError):
        spectra.evaluate_bound("no_such_bound", {})


def test_pipeline_on_a2_over_f2():
    model = steinberg.elementary_chevalley_model(system_from_label("A2"), parse_ring("F2"))
    report = spectra.spectral_pipeline(model, seed=3, samples=10)
    assert report.holds
    assert all(check.margin >= -spectra.TOLERANCE for check in report.checks)
    assert report.check("vertex_codistance").worst == pytest.approx(0.5)


# -- property tests ---------------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 9), st.integers(2, 4))
def test_eigen_method_matches_alternating_oracle(seed, n, k):
    rng = np.random.default_rng(seed)
    spaces = [_random_basis(rng, n, int(rng.integers(1, n))) for _ in range(k)]
    assert spectra.codistance(spaces) == pytest.approx(spectra.codistance_alternating(spaces, seed=seed), abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 8))
def test_two_subspace_codistance_is_half_of_one_plus_orth(seed, n):
    rng = np.random.default_rng(seed)
    U = _random_basis(rng, n, int(rng.integers(1, n)))
    W = _random_basis(rng, n, int(rng.integers(1, n)))
    assert spectra.codistance([U, W]) == pytest.approx((1 + spectra.orth(U, W)) / 2, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 8))
def test_reduced_orth_is_invariant_under_complements(seed, n):
    rng = np.random.default_rng(seed)
    shared = _random_basis(rng, n, 1)
    U = np.linalg.qr(np.hstack([shared, rng.standard_normal((n, 1))]))[0]
    W = np.linalg.qr(np.hstack([shared, rng.standard_normal((n, 1))]))[0]
    direct = spectra.reduced_orth(U, W)
    via_complements = spectra.reduced_orth(spectra.complement(U), spectra.complement(W))
    assert direct == pytest.approx(via_complements, abs=1e-7)
    assert spectra.orth(U, W) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(spectra.BOUNDS)), st.data())
def test_bounds_are_monotone_in_their_declared_directions(name, data):
    formula = spectra.BOUNDS[name]
    base = _valid_inputs(name)
    if not formula.monotone:
        return
    parameter, direction = data.draw(st.sampled_from(formula.monotone))
    step = data.draw(st.sampled_from([sympy.Rational(1, 100), sympy.Rational(1, 10), sympy.Rational(1, 3)]))
    if parameter in ("n", "d", "m", "N", "roots", "c", "k") and name != "generalized_spectral_criterion":
        step = 1
    bigger = dict(base, **{parameter: base[parameter] + step})
    try:
        low = spectra.evaluate_bound(name, base)
        high = spectra.evaluate_bound(name, bigger)
    except spectra.SpectraError:
        return
    difference = sympy.nsimplify(high - low) if direction > 0 else sympy.nsimplify(low - high)
    assert float(difference) >= -1e-12


def _valid_inputs(name):
    R = sympy.Rational
    return {
        "orthogonality_kazhdan": {"rho": R(1, 2)},
        "spectral_criterion": {"lam1": 4, "p": R(1, 10), "k": 2},
        "generalized_spectral_criterion": {"eps": R(1, 4), "k": 3, "lam1": 4, "A": 2, "B": 3},
        "core_epsilon": {"N": 8, "roots": 8},
        "central_extension": {"eps": R(1, 2), "delta": R(1, 2), "A": 2, "B": 3},
        "bounded_generation": {"kappas": [R(1, 2), R(1, 3)]},
        "normal_subgroup_ratio": {"a": 2, "b": 3},
        "ratio_product": {"kappa": R(1, 2), "ratio": R(1, 3)},
        "nilpotent_codistance": {"c": 2, "k": 3},
        "central_codistance_step": {"m": 3, "eps": R(1, 2)},
        "kazhdan_table": {"family": "A", "n": 3, "d": 2},
        "relative_an": {"d": 2, "n": 3},
        "relative_b2": {"d": 2},
    }[name]


def test_abelian_codistance_bound_on_random_cyclic_families():
    rng = np.random.default_rng(0)
    for moduli in ([2, 2], [3, 3], [2, 3, 2], [4, 2], [5, 5]):
        G = spectra.FiniteGroup.abelian(moduli)
        k = len(moduli) + 1
        gens = [G.abelian_element(moduli, [int(rng.integers(0, m)) for m in moduli]) for _ in range(k)]
        subs = [G.generated([g]) for g in gens]
        report = spectra.group_codistance(G, subs)
        if report.generates:
            assert report.value <= 1 - 1 / k + 1e-9

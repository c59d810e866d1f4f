from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rootgrade.rings import RingError, galois_field, parse_ring, ring_from_json, zmod

RING_LABELS = ["Z/4", "F9", "F9*", "Z/4*", "F2[t]/(t^2)", "M2(F2)*", "F4"]


@pytest.mark.parametrize("label", RING_LABELS)
def test_parsed_rings_satisfy_axioms(label):
    ring = parse_ring(label)
    assert ring.axiom_failures() == []


def test_galois_field_has_inverses():
    field = galois_field(9)
    assert field.size == 9
    assert all(field.mul(a, field.inverse(a)) == field.one for a in field.elements if a != 0)


def test_zmod_units_and_center():
    ring = zmod(4)
    assert set(ring.units) == {1, 3}
    assert ring.is_commutative and set(ring.center) == set(ring.elements)


def test_matrix_ring_is_noncommutative_with_transpose_involution():
    ring = parse_ring("M2(F2)*")
    assert not ring.is_commutative
    assert ring.size == 16
    for a in ring.elements:
        for b in ring.elements:
            assert ring.conj(ring.mul(a, b)) == ring.mul(ring.conj(b), ring.conj(a))


def test_sym_contains_sym_min():
    ring = parse_ring("F9*")
    for omega in (ring.one, ring.neg(ring.one)):
        assert set(ring.sym_min(omega)) <= set(ring.sym(omega))


def test_unknown_ring_is_rejected():
    with pytest.raises((RingError, ValueError)):
        parse_ring("Q7")


def test_json_round_trip():
    ring = parse_ring("F9*")
    again = ring_from_json(ring.to_json())
    assert np.array_equal(again.add_table, ring.add_table)
    assert np.array_equal(again.mul_table, ring.mul_table)
    assert again.star == ring.star


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_batched_matmul_matches_scalar_products(data):
    ring = parse_ring(data.draw(st.sampled_from(["Z/4", "F9", "M2(F2)*"])))
    d = data.draw(st.integers(1, 3))
    elems = st.integers(0, ring.size - 1)
    a = np.array(data.draw(st.lists(elems, min_size=d * d, max_size=d * d))).reshape(d, d)
    b = np.array(data.draw(st.lists(elems, min_size=d * d, max_size=d * d))).reshape(d, d)
    got = ring.matmul(a[None], b[None])[0]
    for i in range(d):
        for j in range(d):
            assert got[i, j] == ring.sum(ring.mul(int(a[i, k]), int(b[k, j])) for k in range(d))

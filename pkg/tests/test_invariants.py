import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from kempfness.invariants import (
    compute_r,
    d4_invariant_set,
    evaluate_all,
    invariant_set_for,
    null_cone_test,
    pullback_via_spin,
)
from kempfness.kempf_ness import random_lie_coeffs
from kempfness.rep_model import exp_action, get_rep, so4_basis, tensor_to_matrix

from .conftest import crandn

D4 = d4_invariant_set()
D4_QUBIT = pullback_via_spin(D4)


def power_sums(d):
    """Oracle for diagonal X: (sum d^2, prod d, sum d^4, sum d^6)."""
    d = np.asarray(d, dtype=complex)
    return np.array([np.sum(d**2), np.prod(d), np.sum(d**4), np.sum(d**6)])


def random_so4c(rng, radius=0.5):
    a = sum(c * b for c, b in zip(rng.standard_normal(6) + 1j * rng.standard_normal(6), so4_basis()))
    return scipy.linalg.expm(radius * a / np.linalg.norm(a))


def test_degrees_and_domain():
    assert D4.degrees == (2, 4, 4, 6)
    assert D4.domain_label == "so4pair"
    assert D4_QUBIT.domain_label == "sl2x4" and D4_QUBIT.degrees == (2, 4, 4, 6)


def test_identity_values():
    vals, _ = evaluate_all(D4, np.eye(4))
    np.testing.assert_allclose(vals, [4, 1, 4, 4], atol=1e-12)


def test_diag_values(diag1234):
    expected = power_sums([1, 2, 3, 4])
    np.testing.assert_array_equal(expected, [30, 24, 354, 4890])
    vals, _ = evaluate_all(D4, diag1234)
    assert np.all(np.abs(vals - expected) <= 1e-10 * np.abs(expected))


def test_random_diagonals_match_oracle(rng):
    for _ in range(20):
        d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        vals, scales = evaluate_all(D4, np.diag(d))
        assert np.all(np.abs(vals - power_sums(d)) <= 1e-12 * scales)


def test_plain_transpose_matters(rng):
    x = crandn(rng, 4, 4)
    assert abs(D4.items[0](x) - np.trace(x @ x.conj().T)) > 1e-3


def test_zero_input():
    vals, scales = evaluate_all(D4, np.zeros((4, 4)))
    assert not vals.any() and not scales.any()
    assert null_cone_test(D4, np.zeros(16))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), re=st.floats(-2, 2), im=st.floats(-2, 2))
def test_homogeneity(seed, re, im):
    c = complex(re, im)
    x = crandn(np.random.default_rng(seed), 16)
    for inv in (D4, D4_QUBIT):
        vals, scales = evaluate_all(inv, x)
        scaled, _ = evaluate_all(inv, c * x)
        deg = np.array(inv.degrees)
        assert np.all(np.abs(scaled - c**deg * vals) <= 1e-9 * np.abs(c) ** deg * scales)


def test_scaling_by_two(rng):
    x = crandn(rng, 4, 4)
    vals, _ = evaluate_all(D4, x)
    vals2, _ = evaluate_all(D4, 2 * x)
    deg = np.array(D4.degrees)
    assert np.all(np.abs(vals2 - 2.0**deg * vals) <= 1e-10 * np.abs(2.0**deg * vals))


def test_so4pair_orbit_invariance(rng):
    for _ in range(20):
        x = crandn(rng, 4, 4)
        g, h = random_so4c(rng), random_so4c(rng)
        a, scales = evaluate_all(D4, x)
        b, _ = evaluate_all(D4, g @ x @ np.linalg.inv(h))
        assert np.all(np.abs(a - b) <= 1e-8 * scales)


def test_pullback_invariance_on_qubit_orbits(sl2x4, rng):
    for _ in range(20):
        t = crandn(rng, 16)
        gt = exp_action(sl2x4, random_lie_coeffs(sl2x4, rng, 1.0), t)
        a, scales = evaluate_all(D4_QUBIT, t)
        b, _ = evaluate_all(D4_QUBIT, gt)
        assert np.all(np.abs(a - b) <= 1e-8 * scales)


def test_pullback_is_composition(rng):
    t = crandn(rng, 16)
    a, _ = evaluate_all(D4_QUBIT, t)
    b, _ = evaluate_all(D4, tensor_to_matrix(t))
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_pullback_product_state_baseline():
    # regression baseline fixed by the first computation
    t = np.zeros(16)
    t[0] = 1
    vals, _ = evaluate_all(D4_QUBIT, t)
    np.testing.assert_allclose(vals, [0, 0, 0, 0], atol=1e-14)


def test_pullback_wrong_domain():
    with pytest.raises(ValueError):
        pullback_via_spin(D4_QUBIT)


def test_domain_mismatch():
    with pytest.raises(ValueError):
        evaluate_all(D4, np.ones(8))
    with pytest.raises(ValueError):
        evaluate_all(D4_QUBIT, np.eye(4))


def test_null_cone(diag1234, nilpotent):
    assert null_cone_test(D4_QUBIT, nilpotent)
    vals, scales = evaluate_all(D4_QUBIT, nilpotent)
    assert np.all(np.abs(vals) <= 1e-10 * scales)
    assert not null_cone_test(D4, diag1234)


def test_compute_r_generic(rng):
    assert compute_r(D4, crandn(rng, 16)) == 2


def test_compute_r_without_quadratic():
    # squares (1, 1, 1, -3): sum 0, cube sum -24, product nonzero
    d = np.array([1, 1, 1, np.sqrt(3) * 1j])
    vals, _ = evaluate_all(D4, np.diag(d))
    assert abs(vals[0]) < 1e-12 and abs(vals[1]) > 1 and abs(vals[3]) > 1
    assert compute_r(D4, np.diag(d)) == 2


def test_compute_r_degree_four_only():
    # squares (1, i, -1, -i) have vanishing power sums 1..3: only det survives
    d = np.exp(1j * np.pi * np.arange(4) / 4)
    assert compute_r(D4, np.diag(d)) == 4


def test_compute_r_null_cone(nilpotent):
    with pytest.raises(ValueError, match="null cone"):
        compute_r(D4_QUBIT, nilpotent)


def test_invariant_set_for():
    assert invariant_set_for("so4pair").domain_label == "so4pair"
    assert invariant_set_for("sl2x4+scalars").domain_label == "sl2x4"
    assert invariant_set_for("sl2x5") is None

import json

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from kempfness.invariants import invariant_set_for, null_cone_test
from kempfness.kempf_ness import (
    FlowConfig,
    FlowError,
    FlowStatus,
    OrbitKind,
    classify_orbit,
    criticality_rank,
    is_critical,
    minimize_norm,
    moment_components,
    random_lie_coeffs,
    symplectic_pairing,
    verify_kn_minimality,
)
from kempfness.rep_model import exp_action, get_rep

from .conftest import crandn


def g_direct(x, v):
    """Moment component straight from the definition, as an oracle."""
    return (np.vdot(v, x @ v) / 2j)


def test_moment_zero(rep):
    mv = moment_components(rep, np.zeros(rep.dim_v))
    assert not mv.components.any() and mv.norm_sq_v == 0


def test_moment_matches_definition(rep, rng):
    v = crandn(rng, rep.dim_v)
    ref = np.array([g_direct(x, v) for x in rep.k_basis])
    assert np.abs(ref.imag).max() <= 1e-12 * np.vdot(v, v).real
    np.testing.assert_allclose(moment_components(rep, v).components, ref.real, atol=1e-12)


def test_moment_so4pair_diagonal_vanishes(so4pair, diag1234):
    assert np.abs(moment_components(so4pair, diag1234).components).max() == 0


def test_moment_example2(sl2x5, v_e2):
    mv = moment_components(sl2x5, v_e2)
    assert np.abs(mv.components).max() <= 1e-12 * mv.norm_sq_v


def test_moment_dimension_mismatch(sl2x4):
    with pytest.raises(ValueError):
        moment_components(sl2x4, np.ones(8))


@settings(max_examples=40, deadline=None)
@given(re=st.floats(-3, 3), im=st.floats(-3, 3), seed=st.integers(0, 2**32 - 1))
def test_moment_scale_equivariance(re, im, seed):
    rep = get_rep("sl2x4")
    c = complex(re, im)
    v = crandn(np.random.default_rng(seed), 16)
    a = moment_components(rep, c * v).components
    b = abs(c) ** 2 * moment_components(rep, v).components
    assert np.abs(a - b).max() <= 1e-12 * max(np.abs(b).max(), abs(c) ** 2 * np.vdot(v, v).real)


def test_is_critical_cases(sl2x5, sl2x4, v_e2, nilpotent):
    assert is_critical(sl2x4, np.zeros(16))
    assert is_critical(sl2x5, v_e2, 1e-10)
    # the nilpotent point: computed, not assumed
    mv = moment_components(sl2x4, nilpotent)
    assert is_critical(sl2x4, nilpotent, 1e-10) == (mv.norm <= 1e-10 * mv.norm_sq_v)
    assert not is_critical(sl2x4, nilpotent, 1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_symplectic_pairing_alternating(seed):
    rng = np.random.default_rng(seed)
    x, y = crandn(rng, 8), crandn(rng, 8)
    assert symplectic_pairing(x, x) == pytest.approx(0, abs=1e-12)
    assert symplectic_pairing(x, y) == pytest.approx(-symplectic_pairing(y, x), abs=1e-12)


def test_symplectic_pairing_mismatch():
    with pytest.raises(ValueError):
        symplectic_pairing(np.ones(4), np.ones(8))


def test_differential_is_symplectic_pairing(rep, rng):
    h = 1e-5
    for _ in range(10):
        v, w = crandn(rng, rep.dim_v), crandn(rng, rep.dim_v)
        j = rng.integers(rep.group_dim)
        x = rep.k_basis[j]
        fd = (g_direct(x, v + h * w) - g_direct(x, v - h * w)).real / (2 * h)
        exact = symplectic_pairing(x @ v, w)
        assert abs(fd - exact) <= 1e-6 * abs(exact)


def test_descent_identity(rep, rng):
    h = 1e-5
    for _ in range(10):
        v = crandn(rng, rep.dim_v)
        g = moment_components(rep, v).components
        hmat = rep.element(1j * g)
        energy = lambda t: np.linalg.norm(scipy.linalg.expm(t * hmat) @ v) ** 2
        fd = (energy(h) - energy(-h)) / (2 * h)
        assert abs(fd - (-4 * g @ g)) <= 1e-6 * 4 * (g @ g)


# -- flow --------------------------------------------------------------------

def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(armijo_c=1.5)
    with pytest.raises(ValueError):
        FlowConfig(backtrack_factor=0)
    with pytest.raises(ValueError):
        FlowConfig(grad_tol=-1)
    with pytest.raises(ValueError):
        FlowConfig.from_dict({"max_iter": 3})
    cfg = FlowConfig.from_dict(json.loads(json.dumps(FlowConfig(max_iters=7).to_dict())))
    assert cfg.max_iters == 7


def test_flow_rejects_zero(sl2x4):
    with pytest.raises(ValueError):
        minimize_norm(sl2x4, np.zeros(16))


def test_flow_aborts_on_overflow(sl2x4):
    with pytest.raises(FlowError):
        minimize_norm(sl2x4, np.full(16, 1e200))


def test_flow_already_critical(sl2x5, v_e2):
    res = minimize_norm(sl2x5, v_e2)
    assert res.status is FlowStatus.CRITICAL
    assert res.iterations <= 1
    np.testing.assert_array_equal(res.final_vector, v_e2)


def test_flow_nilpotent_collapses(sl2x4, nilpotent):
    res = minimize_norm(sl2x4, nilpotent)
    assert res.status is FlowStatus.NULL_CONE
    assert np.linalg.norm(res.final_vector) <= 1e-8 * np.linalg.norm(nilpotent)


def test_flow_trace_monotone_and_log_reconstructs(rep, rng):
    v0 = crandn(rng, rep.dim_v)
    res = minimize_norm(rep, v0)
    assert res.status is FlowStatus.CRITICAL
    assert all(b <= a for a, b in zip(res.energy_trace, res.energy_trace[1:]))
    assert res.final_grad_norm <= 1e-10 * np.vdot(res.final_vector, res.final_vector).real
    np.testing.assert_allclose(res.group_matrix(rep) @ v0, res.final_vector, atol=1e-9 * np.linalg.norm(v0))


def test_flow_max_iterations(sl2x4, rng):
    res = minimize_norm(sl2x4, crandn(rng, 16), FlowConfig(max_iters=3))
    assert res.status is FlowStatus.MAX_ITERATIONS and res.iterations == 3
    assert len(res.energy_trace) == 4 and len(res.group_log) == 3


def test_flow_random_sl2x4_mostly_critical():
    rep = get_rep("sl2x4")
    hits = 0
    for seed in range(100):
        v = crandn(np.random.default_rng(seed), 16)
        res = minimize_norm(rep, v)
        nsq = np.vdot(res.final_vector, res.final_vector).real
        hits += res.status is FlowStatus.CRITICAL and res.final_grad_norm <= 1e-10 * nsq
    assert hits >= 95


def test_flow_result_json(sl2x4, rng):
    res = minimize_norm(sl2x4, crandn(rng, 16))
    d = res.to_dict()
    assert d["status"] == "Critical"
    assert d["energy_trace"] == res.energy_trace[::10]
    assert d["iterations"] == res.iterations


def test_k_equivariance_of_criticality(sl2x5, v_e2, rng):
    for _ in range(10):
        kv = exp_action(sl2x5, rng.standard_normal(15), v_e2)
        assert is_critical(sl2x5, kv, 1e-10)


def test_critical_norm_unique_in_orbit(sl2x4, rng):
    crit = minimize_norm(sl2x4, crandn(rng, 16)).final_vector
    for _ in range(3):
        w = exp_action(sl2x4, random_lie_coeffs(sl2x4, rng, 1.0), crit)
        assert np.linalg.norm(w) > np.linalg.norm(crit)
        w2 = minimize_norm(sl2x4, w)
        assert w2.status is FlowStatus.CRITICAL
        assert abs(np.linalg.norm(w2.final_vector) - np.linalg.norm(crit)) <= 1e-8 * np.linalg.norm(crit)


def test_invariants_constant_along_flow(rng):
    for label in ("sl2x4", "so4pair"):
        rep, inv = get_rep(label), invariant_set_for(label)
        v0 = crandn(rng, 16)
        res = minimize_norm(rep, v0)
        # replay a few intermediate points through the group log
        v = v0.copy()
        for step, coeffs in enumerate(res.group_log):
            v = exp_action(rep, coeffs, v)
            if step % 50 == 0:
                for it in inv.items:
                    scale = np.linalg.norm(v0) ** it.degree
                    assert abs(it(v) - it(v0)) <= 1e-8 * scale


# -- classification and rank -----------------------------------------------

def test_classify_example2(sl2x5, v_e2):
    assert classify_orbit(sl2x5, v_e2).kind is OrbitKind.CLOSED


def test_classify_nilpotent(sl2x4, nilpotent):
    verdict = classify_orbit(sl2x4, nilpotent, invariants=invariant_set_for("sl2x4"))
    assert verdict.kind is OrbitKind.NULL_CONE
    assert verdict.invariants_vanish
    assert all(abs(val) <= 1e-10 for val in verdict.invariant_values.values())


def test_classify_random_closed(so4pair, rng):
    v = crandn(rng, 16)
    verdict = classify_orbit(so4pair, v, invariants=invariant_set_for("so4pair"))
    assert verdict.kind is OrbitKind.CLOSED
    assert not null_cone_test(invariant_set_for("so4pair"), v)


def test_classify_undetermined_on_budget(sl2x4, nilpotent):
    verdict = classify_orbit(sl2x4, nilpotent, FlowConfig(max_iters=5))
    assert verdict.kind is OrbitKind.UNDETERMINED


def test_criticality_rank_cases(sl2x4, sl2x5, v_e2, rng):
    assert criticality_rank(sl2x4, np.zeros(16)) == 0
    assert criticality_rank(sl2x5, v_e2) == 15
    crit = minimize_norm(sl2x4, crandn(rng, 16)).final_vector
    assert criticality_rank(sl2x4, crit) == 12


def test_kn_minimality_example2(sl2x5, v_e2):
    rep = verify_kn_minimality(sl2x5, v_e2, n_samples=200, seed=3)
    assert rep.passed and rep.min_ratio >= 1 - 1e-9


def test_kn_minimality_unitary_ratio_one(sl2x5, v_e2):
    rep = verify_kn_minimality(sl2x5, v_e2, n_samples=50, seed=1, real=True)
    assert abs(rep.min_ratio - 1) <= 1e-12


def test_kn_minimality_requires_critical(sl2x4, rng):
    with pytest.raises(ValueError):
        verify_kn_minimality(sl2x4, crandn(rng, 16), 5)


def test_random_lie_coeffs_radius(sl2x4, rng):
    c = random_lie_coeffs(sl2x4, rng, 2.5)
    assert np.linalg.norm(sl2x4.element(c)) == pytest.approx(2.5)

"""Randomized orbit surveys and the built-in example scenarios."""

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import _kernels
from .invariants import (
    compute_r,
    d4_invariant_set,
    evaluate_all,
    invariant_dict,
    invariant_set_for,
    null_cone_test,
    pullback_via_spin,
)
from .kempf_ness import (
    FlowConfig,
    FlowStatus,
    OrbitKind,
    classify_orbit,
    criticality_rank,
    is_critical,
    minimize_norm,
    moment_components,
    verify_kn_minimality,
)
from .rep_model import get_rep, local_product
from .stabilizer import (
    central_sign_equivalence,
    extended_stabilizer_lie,
    phase_check,
    sign_diagonal_pairs,
    stabilizer_lie,
    verify_adjoint_closure,
    verify_finite_group,
)

EVIDENCE_NOTE = (
    "Sample statistics are evidence only: a survey can report that no exceptional "
    "stabilizer was observed among the drawn samples, never that none exists."
)


# -- example vectors ---------------------------------------------------------

def basis_tensor(bits: str) -> np.ndarray:
    """``e_{i1} x ... x e_{ik}`` from a string over {'1', '2'}."""
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int("".join("0" if b == "1" else "1" for b in bits), 2)] = 1.0
    return v


def principal_nilpotent() -> np.ndarray:
    """The 4-qubit principal nilpotent element of the D4 pair."""
    return sum(basis_tensor(b) for b in ("1122", "1211", "2112", "2121"))


def example2_vector() -> np.ndarray:
    """``e1^{x5} - w / sqrt(3)``; w sums the five tensors with a single index 1."""
    w = sum(basis_tensor("2" * p + "1" + "2" * (4 - p)) for p in range(5))
    return basis_tensor("11111") - w / np.sqrt(3)


def example2_phase_element():
    """``A^{x5}`` with ``A = diag(xi, 1/xi)``, xi = exp(i pi / 4)."""
    xi = np.exp(1j * np.pi / 4)
    return local_product([np.diag([xi, 1 / xi])] * 5), xi


def diagonal_example() -> np.ndarray:
    return np.diag([1.0, 2.0, 3.0, 4.0]).astype(np.complex128).reshape(16)


# -- survey ----------------------------------------------------------------

@dataclass(frozen=True)
class SurveyConfig:
    rep_label: str
    n_samples: int
    seed: int
    flow: FlowConfig = field(default_factory=FlowConfig)
    with_invariants: bool = False

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        get_rep(self.rep_label)  # raises KeyError on unknown labels


@dataclass
class SurveyReport:
    config: dict
    group_dim: int
    per_sample: list
    histogram: dict
    d_estimate: Optional[int]
    generic_stab_dim: Optional[int]
    n_critical: int
    note: str = EVIDENCE_NOTE
    backend: str = ""
    timestamp: str = ""

    def to_dict(self, with_timestamp: bool = True):
        d = asdict(self)
        if not with_timestamp:
            d.pop("timestamp")
        return d


def _thread_count(n_tasks: int) -> int:
    cap = os.environ.get("KN_THREADS")
    n = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n, n_tasks))


def _survey_sample(rep, cfg: SurveyConfig, inv_set, seed_seq) -> dict:
    rng = np.random.default_rng(seed_seq)
    n = rep.dim_v
    v0 = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    flow = minimize_norm(rep, v0, cfg.flow)
    critical = flow.status is FlowStatus.CRITICAL
    # dimensions are constant along an orbit; measure at the critical point when we have one
    where = flow.final_vector if critical else v0
    stab = stabilizer_lie(rep, where)
    sample = {
        "status": flow.status.value,
        "iterations": flow.iterations,
        "final_grad_norm": flow.final_grad_norm,
        "stabilizer_lie_dim": stab.lie_dim,
        "orbit_dim": stab.orbit_dim,
        "measured_at": "critical_point" if critical else "start",
        "criticality_rank": criticality_rank(rep, flow.final_vector) if critical else None,
    }
    if inv_set is not None:
        vals, _ = evaluate_all(inv_set, v0)
        sample["invariant_vector"] = [complex(x) for x in vals]
        if flow.status is FlowStatus.NULL_CONE:
            sample["null_cone_test"] = null_cone_test(inv_set, v0, 1e-8)
    return sample


def run_survey(cfg: SurveyConfig) -> SurveyReport:
    """Sample standard complex Gaussian vectors and record stabilizer data.

    Each sample draws from its own stream spawned from ``cfg.seed`` by index,
    so the report does not depend on the thread count.
    """
    rep = get_rep(cfg.rep_label)
    inv_set = invariant_set_for(cfg.rep_label) if cfg.with_invariants else None
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.n_samples)
    workers = _thread_count(cfg.n_samples)
    if workers == 1:
        samples = [_survey_sample(rep, cfg, inv_set, s) for s in streams]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda s: _survey_sample(rep, cfg, inv_set, s), streams))

    hist = Counter(f"{s['status']}:{s['stabilizer_lie_dim']}" for s in samples)
    crit = [s for s in samples if s["status"] == FlowStatus.CRITICAL.value]
    d_est = max((s["orbit_dim"] for s in crit), default=None)
    modal = None
    if crit:
        counts = Counter(s["stabilizer_lie_dim"] for s in crit)
        modal = min(counts, key=lambda k: (-counts[k], k))
    return SurveyReport(
        config={
            "rep_label": cfg.rep_label,
            "n_samples": cfg.n_samples,
            "seed": cfg.seed,
            "flow": cfg.flow.to_dict(),
            "with_invariants": cfg.with_invariants,
        },
        group_dim=rep.group_dim,
        per_sample=samples,
        histogram=dict(sorted(hist.items())),
        d_estimate=d_est,
        generic_stab_dim=modal,
        n_critical=len(crit),
        backend=_kernels.backend(),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


# -- example scenarios -----------------------------------------------------

@dataclass
class ScenarioReport:
    name: str
    checks: list = field(default_factory=list)

    def check(self, name, passed, **detail):
        self.checks.append({"check": name, "passed": bool(passed), **detail})

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "checks": self.checks}


def _e1_nilpotent() -> ScenarioReport:
    rep = get_rep("sl2x4")
    x = principal_nilpotent()
    inv = pullback_via_spin(d4_invariant_set())
    out = ScenarioReport("e1_nilpotent")
    stab = stabilizer_lie(rep, x)
    out.check("stabilizer_lie_dim == 0", stab.lie_dim == 0, lie_dim=stab.lie_dim)
    vals, scales = evaluate_all(inv, x)
    rel = np.abs(vals) / scales
    out.check("pulled-back invariants vanish (<= 1e-10 rel)", np.all(rel <= 1e-10),
              relative_values=rel.tolist())
    verdict = classify_orbit(rep, x, FlowConfig(), inv)
    out.check("classify_orbit == NullCone", verdict.kind is OrbitKind.NULL_CONE,
              verdict=verdict.kind.value, iterations=verdict.flow.iterations)
    mv = moment_components(rep, x)
    # not a claim of the construction; recorded for reference
    out.check("criticality computed", True, is_critical=mv.norm <= 1e-10 * mv.norm_sq_v,
              moment_norm=mv.norm)
    return out


def _e1_diag() -> ScenarioReport:
    rep = get_rep("so4pair")
    v = diagonal_example()
    out = ScenarioReport("e1_diag")
    out.check("is_critical", is_critical(rep, v, 1e-10))
    stab = stabilizer_lie(rep, v)
    out.check("stabilizer_lie_dim == 0", stab.lie_dim == 0, lie_dim=stab.lie_dim)
    grp = verify_finite_group(rep, sign_diagonal_pairs(), v, central_sign_equivalence)
    out.check("sign-diagonal group: closed, stabilizing, order 8",
              grp.passed and grp.order == 8, detail=grp.to_dict())
    r = compute_r(d4_invariant_set(), v)
    out.check("compute_r == 2", r == 2, r=r)
    out.check("invariants", True, values=invariant_dict(d4_invariant_set(), v))
    return out


def _e2_critical() -> ScenarioReport:
    rep = get_rep("sl2x5")
    v = example2_vector()
    out = ScenarioReport("e2_critical")
    mv = moment_components(rep, v)
    out.check("is_critical", is_critical(rep, v, 1e-10),
              max_abs_moment=float(np.abs(mv.components).max()))
    base = stabilizer_lie(rep, v)
    ext = extended_stabilizer_lie(rep, v)
    out.check("stabilizer_lie_dim == 0 (SL)", base.lie_dim == 0, lie_dim=base.lie_dim)
    out.check("stabilizer_lie_dim == 0 (GL)", ext.lie_dim == 0, lie_dim=ext.lie_dim)
    g, xi = example2_phase_element()
    hit = phase_check(g, v)
    ok = hit is not None and abs(hit.phase - xi**-3) <= 1e-12 and hit.phase_order == 8
    out.check("g v = xi^-3 v", ok, phase=None if hit is None else hit.phase,
              expected=xi**-3, phase_order=None if hit is None else hit.phase_order)
    adj = verify_adjoint_closure(rep, [g, g.adjoint()], v)
    out.check("adjoint closure", adj.passed, detail=adj.to_dict())
    kn = verify_kn_minimality(rep, v, n_samples=500, seed=0)
    out.check("||g v|| >= ||v|| on 500 samples", kn.passed, min_ratio=kn.min_ratio)
    return out


SCENARIOS = {
    "e1_nilpotent": _e1_nilpotent,
    "e1_diag": _e1_diag,
    "e2_critical": _e2_critical,
}


def run_example(name: str) -> ScenarioReport:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(SCENARIOS)}") from None
    return fn()

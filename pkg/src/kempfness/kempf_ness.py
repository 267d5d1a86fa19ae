"""Moment map, norm-minimizing flow and criticality checks."""

import enum
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .rep_model import Representation, as_state, exp_action, expm

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentValue:
    components: np.ndarray
    norm_sq_v: float
    imag_residue: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


def moment_components(rep: Representation, v) -> MomentValue:
    """``g_j(v) = <X_j v, v> / 2i`` for each Lie(K) basis element."""
    v = as_state(v, rep.dim_v)
    q = _kernels.quad_forms(rep.k_basis, v)
    # X_j skew-Hermitian => q_j = v^H X_j v is purely imaginary
    return MomentValue(
        components=0.5 * q.imag,
        norm_sq_v=float(np.vdot(v, v).real),
        imag_residue=float(0.5 * np.abs(q.real).max(initial=0.0)),
    )


def is_critical(rep: Representation, v, tol: float = 1e-10) -> bool:
    mv = moment_components(rep, v)
    return mv.norm <= tol * mv.norm_sq_v


def symplectic_pairing(x, y) -> float:
    """``omega(x, y) = Im <x, y>``."""
    x = as_state(x)
    y = as_state(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    return float(np.vdot(y, x).imag)


def descent_direction(rep: Representation, v) -> np.ndarray:
    """Coefficients ``i * g_j(v)`` so that ``H = sum_j g_j (i X_j)`` is Hermitian."""
    return 1j * moment_components(rep, v).components


def criticality_rank(rep: Representation, v, rel_tol: float = 1e-8) -> int:
    """Real rank of the functionals ``w -> omega(X_j v, w)`` on ``R^{2n}``.

    Equal to the real dimension of the tangent space of ``K v``.
    """
    v = as_state(v, rep.dim_v)
    if not np.any(v):
        return 0
    if not is_critical(rep, v, 1e-8):
        log.warning("criticality_rank called at a non-critical point (%s)", rep.label)
    cols = _kernels.action_columns(rep.k_basis, v)
    # omega(u, w) = sum(Im(u) Re(w) - Re(u) Im(w)); one row per generator
    rows = np.hstack([cols.T.imag, -cols.T.real])
    s = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0])) if s[0] > 0 else 0


# -- the flow ------------------------------------------------------------

class FlowStatus(str, enum.Enum):
    CRITICAL = "Critical"
    NULL_CONE = "NullCone"
    MAX_ITERATIONS = "MaxIterations"


class FlowError(ArithmeticError):
    pass


@dataclass(frozen=True)
class FlowConfig:
    max_iters: int = 10000
    grad_tol: float = 1e-10
    nullcone_tol: float = 1e-8
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0
    max_backtracks: int = 60

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        for name in ("grad_tol", "nullcone_tol", "initial_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("armijo_c", "backtrack_factor"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> "FlowConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown FlowConfig keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)


@dataclass
class FlowResult:
    status: FlowStatus
    final_vector: np.ndarray
    group_log: list = field(repr=False)
    energy_trace: list = field(repr=False)
    final_grad_norm: float
    iterations: int
    message: str = ""

    def group_matrix(self, rep: Representation) -> np.ndarray:
        """Product of the exponentials applied, so that ``final = M @ v0``."""
        out = np.eye(rep.dim_v, dtype=np.complex128)
        for coeffs in self.group_log:
            out = expm(rep.element(coeffs)) @ out
        return out

    def to_dict(self, trace_stride: int = 10):
        return {
            "status": self.status.value,
            "final_vector": self.final_vector,
            "final_grad_norm": self.final_grad_norm,
            "final_norm_sq": float(np.vdot(self.final_vector, self.final_vector).real),
            "iterations": self.iterations,
            "energy_trace": self.energy_trace[::trace_stride],
            "energy_trace_stride": trace_stride,
            "message": self.message,
        }


def minimize_norm(rep: Representation, v0, cfg: Optional[FlowConfig] = None) -> FlowResult:
    """Descend ``||g v||`` along ``v <- exp(s H(v)) v`` with Armijo backtracking.

    The trial step is ``initial_step / ||v||^2``: the moment map is quadratic,
    so this keeps the step scale-free and lets null-cone points collapse at a
    geometric rate rather than stalling as ``||v||`` shrinks.
    """
    cfg = cfg or FlowConfig()
    v = as_state(v0, rep.dim_v).copy()
    norm0 = float(np.linalg.norm(v))
    if norm0 == 0:
        raise ValueError("minimize_norm needs a nonzero starting vector")

    basis = rep.k_basis
    nsq = norm0**2
    energy = [nsq]
    group_log = []
    status = FlowStatus.MAX_ITERATIONS
    message = ""
    gnorm = np.inf
    it = 0
    while True:
        g = 0.5 * _kernels.quad_forms(basis, v).imag
        gnorm = float(np.sqrt(g @ g))
        if not np.isfinite(gnorm):
            raise FlowError(f"non-finite moment at iteration {it}")
        if gnorm <= cfg.grad_tol * nsq:
            status = FlowStatus.CRITICAL
            break
        if np.sqrt(nsq) <= cfg.nullcone_tol * norm0:
            status = FlowStatus.NULL_CONE
            break
        if it >= cfg.max_iters:
            break

        h = _kernels.combine(basis, (1j * g).astype(np.complex128))
        evals, evecs = np.linalg.eigh(0.5 * (h + h.conj().T))
        coord = evecs.conj().T @ v
        slope = -4.0 * gnorm**2
        s = cfg.initial_step / nsq
        for _ in range(cfg.max_backtracks):
            delta = _kernels.energy_delta(evals, coord, s)
            if delta <= cfg.armijo_c * s * slope:
                break
            s *= cfg.backtrack_factor
        else:
            message = f"line search failed at iteration {it}"
            break
        w = _kernels.exp_apply(evals.astype(np.complex128), evecs, coord, s)
        if not (np.isfinite(delta) and np.all(np.isfinite(w))):
            raise FlowError(f"non-finite iterate at iteration {it} (step {s:g})")
        # below rounding resolution, trust the cancellation-free increment
        v, nsq = w, (float(np.vdot(w, w).real) if -delta > 1e-12 * nsq else nsq + delta)
        energy.append(nsq)
        group_log.append(1j * s * g)
        it += 1

    if not message and status is FlowStatus.MAX_ITERATIONS:
        message = f"no verdict after {it} iterations"
    return FlowResult(
        status=status,
        final_vector=v,
        group_log=group_log,
        energy_trace=energy,
        final_grad_norm=gnorm,
        iterations=it,
        message=message,
    )


# -- classification ------------------------------------------------------

class OrbitKind(str, enum.Enum):
    CLOSED = "ClosedOrbit"
    NULL_CONE = "NullCone"
    UNDETERMINED = "Undetermined"


@dataclass
class OrbitVerdict:
    kind: OrbitKind
    flow: FlowResult
    invariant_values: Optional[dict] = None
    invariants_vanish: Optional[bool] = None
    reason: str = ""

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "reason": self.reason,
            "flow": self.flow.to_dict(),
            "invariant_values": self.invariant_values,
            "invariants_vanish": self.invariants_vanish,
        }


def classify_orbit(rep: Representation, v, cfg: Optional[FlowConfig] = None,
                   invariants=None, invariant_tol: float = 1e-8) -> OrbitVerdict:
    """Closed orbit vs null cone, cross-checked against invariants when given."""
    from .invariants import evaluate_all, null_cone_test

    v = as_state(v, rep.dim_v)
    flow = minimize_norm(rep, v, cfg)
    values = vanish = None
    if invariants is not None:
        vals, _ = evaluate_all(invariants, v)
        values = {f"{it.name} (deg {it.degree})": complex(x) for it, x in zip(invariants.items, vals)}
        vanish = null_cone_test(invariants, v, invariant_tol)

    if flow.status is FlowStatus.CRITICAL:
        if vanish:
            return OrbitVerdict(OrbitKind.UNDETERMINED, flow, values, vanish,
                                "flow reached a nonzero critical point but all invariants vanish")
        return OrbitVerdict(OrbitKind.CLOSED, flow, values, vanish, "flow reached a critical point")
    if flow.status is FlowStatus.NULL_CONE:
        if vanish is False:
            return OrbitVerdict(OrbitKind.UNDETERMINED, flow, values, vanish,
                                "norm collapsed but some invariant is nonzero")
        return OrbitVerdict(OrbitKind.NULL_CONE, flow, values, vanish, "norm collapsed toward 0")
    return OrbitVerdict(OrbitKind.UNDETERMINED, flow, values, vanish, flow.message)


# -- Kempf-Ness minimality ---------------------------------------------------

@dataclass
class MinimalityReport:
    n_samples: int
    min_ratio: float
    passed: bool
    tol: float

    def to_dict(self):
        return asdict(self)


def random_lie_coeffs(rep: Representation, rng, radius: float, real: bool = False) -> np.ndarray:
    """Gaussian coefficients scaled so the Lie element has Frobenius norm ``radius``."""
    c = rng.standard_normal(rep.group_dim)
    if not real:
        c = c + 1j * rng.standard_normal(rep.group_dim)
    c = c.astype(np.complex128)
    return c * (radius / np.linalg.norm(rep.element(c)))


def verify_kn_minimality(rep: Representation, v, n_samples: int = 500, seed: int = 0,
                         real: bool = False, tol: float = 1e-9,
                         max_radius: float = 3.0) -> MinimalityReport:
    """Sample ``g = exp(Z)`` and check ``||g v|| >= ||v|| (1 - tol)``."""
    v = as_state(v, rep.dim_v)
    if not is_critical(rep, v, 1e-10):
        raise ValueError("verify_kn_minimality requires a critical vector")
    rng = np.random.default_rng(seed)
    nv = np.linalg.norm(v)
    ratios = []
    for _ in range(n_samples):
        coeffs = random_lie_coeffs(rep, rng, rng.uniform(0.0, max_radius), real=real)
        ratios.append(np.linalg.norm(exp_action(rep, coeffs, v)) / nv)
    min_ratio = float(min(ratios)) if ratios else 1.0
    return MinimalityReport(n_samples, min_ratio, min_ratio >= 1 - tol, tol)

"""Infinitesimal stabilizers, phase stabilizers and finite-group checks."""

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .kempf_ness import is_critical
from .rep_model import GroupElement, Representation, as_state, extend_with_scalars, so4pair_element

RANK_TOL = 1e-8


@dataclass
class StabilizerReport:
    lie_dim: int
    kernel_basis: np.ndarray
    orbit_dim: int
    singular_values: np.ndarray
    group_dim: int
    label: str = ""

    def to_dict(self):
        return {
            "label": self.label,
            "group_dim": self.group_dim,
            "lie_dim": self.lie_dim,
            "orbit_dim": self.orbit_dim,
            "kernel_basis": self.kernel_basis,
            "singular_values": np.asarray(self.singular_values).tolist(),
        }


def stabilizer_lie(rep: Representation, v, rel_tol: float = RANK_TOL) -> StabilizerReport:
    """Kernel of ``X -> X v`` on the complex span of the Lie(K) basis."""
    v = as_state(v, rep.dim_v)
    m = rep.group_dim
    if not np.any(v):
        return StabilizerReport(m, np.eye(m, dtype=np.complex128), 0, np.zeros(0), m, rep.label)
    cols = _kernels.action_columns(rep.k_basis, v)
    _, s, vh = np.linalg.svd(cols, full_matrices=True)
    rank = int(np.sum(s > rel_tol * s[0])) if s[0] > 0 else 0
    kernel = vh[rank:].conj()
    return StabilizerReport(m - rank, kernel, rank, s, m, rep.label)


def extended_stabilizer_lie(rep: Representation, v, rel_tol: float = RANK_TOL) -> StabilizerReport:
    """Same as :func:`stabilizer_lie` for the C^x-extended group."""
    return stabilizer_lie(extend_with_scalars(rep), v, rel_tol)


def kernel_residual(rep: Representation, report: StabilizerReport, v) -> float:
    """Worst ``||(sum c_j X_j) v|| / (||v|| ||c||)`` over the kernel basis."""
    v = as_state(v, rep.dim_v)
    nv = np.linalg.norm(v)
    if nv == 0 or len(report.kernel_basis) == 0:
        return 0.0
    basis = rep.k_basis
    if report.group_dim != rep.group_dim:
        raise ValueError("report does not belong to this representation")
    return max(
        float(np.linalg.norm(_kernels.combine(basis, c) @ v) / (nv * np.linalg.norm(c)))
        for c in report.kernel_basis
    )


# -- phase stabilizers -----------------------------------------------------

@dataclass
class PhaseStabilizerHit:
    element: GroupElement
    phase: complex
    phase_order: int
    residual: float

    def to_dict(self):
        return {
            "phase": self.phase,
            "phase_order": self.phase_order,
            "residual": self.residual,
            "element": self.element.matrix,
        }


def root_of_unity_order(z: complex, tol: float = 1e-9, max_order: int = 64) -> int:
    """Smallest ``p <= max_order`` with ``z^p = 1``, else 0."""
    for p in range(1, max_order + 1):
        if abs(z**p - 1) <= tol:
            return p
    return 0


def phase_check(g, v, tol: float = 1e-9) -> Optional[PhaseStabilizerHit]:
    """Return the hit if ``g v = chi v`` for a scalar ``chi``."""
    if not isinstance(g, GroupElement):
        g = GroupElement(g)
    v = as_state(v, g.matrix.shape[0])
    nsq = float(np.vdot(v, v).real)
    if nsq == 0:
        raise ValueError("phase_check needs a nonzero vector")
    w = g.matrix @ v
    chi = complex(np.vdot(v, w) / nsq)
    residual = float(np.linalg.norm(w - chi * v) / np.sqrt(nsq))
    if residual > tol:
        return None
    return PhaseStabilizerHit(g, chi, root_of_unity_order(chi), residual)


@dataclass
class AdjointClosureEntry:
    applicable: bool
    passed: Optional[bool]
    phase: Optional[complex] = None
    adjoint_phase: Optional[complex] = None

    def to_dict(self):
        return {
            "applicable": self.applicable,
            "passed": self.passed,
            "phase": self.phase,
            "adjoint_phase": self.adjoint_phase,
        }


@dataclass
class AdjointClosureReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries if e.applicable)

    def to_dict(self):
        return {"passed": self.passed, "entries": [e.to_dict() for e in self.entries]}


def verify_adjoint_closure(rep: Representation, candidates, v, tol: float = 1e-9) -> AdjointClosureReport:
    """At a critical ``v``: if ``g v = chi v`` then ``g^* v = conj(chi) v``."""
    v = as_state(v, rep.dim_v)
    if not is_critical(rep, v, 1e-10):
        raise ValueError("adjoint closure is only claimed at critical vectors")
    report = AdjointClosureReport()
    for g in candidates:
        if not isinstance(g, GroupElement):
            g = GroupElement(g)
        hit = phase_check(g, v, tol)
        if hit is None:
            report.entries.append(AdjointClosureEntry(False, None))
            continue
        adj = phase_check(g.adjoint(), v, tol)
        ok = adj is not None and bool(abs(adj.phase - np.conj(hit.phase)) <= tol)
        report.entries.append(
            AdjointClosureEntry(True, ok, hit.phase, None if adj is None else adj.phase)
        )
    return report


# -- finite groups ---------------------------------------------------------

def matrix_equivalence(a: GroupElement, b: GroupElement, tol: float = 1e-9) -> bool:
    return bool(np.abs(a.matrix - b.matrix).max() <= tol)


def central_sign_equivalence(a: GroupElement, b: GroupElement, tol: float = 1e-9) -> bool:
    """Equality of ``(g, h)`` pairs modulo ``+-(I, I)``.

    Elements without pair provenance fall back to operator equality.
    """
    pa = (a.provenance or {}).get("pair")
    pb = (b.provenance or {}).get("pair")
    if pa is None or pb is None:
        return matrix_equivalence(a, b, tol)
    for sign in (1, -1):
        if all(np.abs(x - sign * y).max() <= tol for x, y in zip(pa, pb)):
            return True
    return False


def _pair_product(a: GroupElement, b: GroupElement) -> GroupElement:
    pa = (a.provenance or {}).get("pair")
    pb = (b.provenance or {}).get("pair")
    prov = None
    if pa is not None and pb is not None:
        prov = {"pair": (pa[0] @ pb[0], pa[1] @ pb[1])}
    return GroupElement(a.matrix @ b.matrix, prov)


@dataclass
class FiniteGroupReport:
    order: int
    closed_under_product: bool
    all_stabilize: bool
    max_residual: float

    @property
    def passed(self) -> bool:
        return self.closed_under_product and self.all_stabilize

    def to_dict(self):
        return {
            "order": self.order,
            "closed_under_product": self.closed_under_product,
            "all_stabilize": self.all_stabilize,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def verify_finite_group(rep: Representation, elements, v,
                        equivalent: Optional[Callable] = None, tol: float = 1e-9) -> FiniteGroupReport:
    """Check that ``elements`` form a finite group fixing ``v``.

    ``equivalent`` identifies elements of the quotient actually meant (for the
    M_4 scenario, pairs modulo ``+-(I, I)``); the order counts its classes.
    """
    if not elements:
        raise ValueError("need at least one element")
    equivalent = equivalent or matrix_equivalence
    v = as_state(v, rep.dim_v)
    elements = [g if isinstance(g, GroupElement) else GroupElement(g) for g in elements]

    classes: list[GroupElement] = []
    for g in elements:
        if not any(equivalent(g, c) for c in classes):
            classes.append(g)

    closed = all(
        any(equivalent(_pair_product(a, b), c) for c in classes)
        for a in classes for b in classes
    )
    nv = np.linalg.norm(v)
    residual = max(float(np.linalg.norm(g.matrix @ v - v)) for g in classes)
    return FiniteGroupReport(len(classes), closed, bool(residual <= tol * nv), residual)


def sign_diagonal_pairs() -> list:
    """All 16 pairs ``(diag(eps), diag(eps))`` with ``eps_j = +-1``."""
    out = []
    for eps in product((1.0, -1.0), repeat=4):
        d = np.diag(eps)
        out.append(so4pair_element(d, d))
    return out

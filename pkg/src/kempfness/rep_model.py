"""Matrix realizations of the groups acting on small tensor spaces.

A :class:`Representation` stores a basis of the compact Lie algebra
``Lie(K)`` as skew-Hermitian ``n x n`` matrices.  The complexified Lie
algebra ``Lie(G) = Lie(K) + i Lie(K)`` is the complex span of that basis.

Conventions used throughout the package:

* inner product ``<x, y> = sum_i x_i conj(y_i)`` (conjugate-linear in the
  second slot);
* ``M_4(C)`` is flattened row-major, so ``vec(A M B) = kron(A, B.T) vec(M)``;
* qubit 1 is the most significant tensor factor.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Optional

import numpy as np
import scipy.linalg

from . import _kernels

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# compact sl(2) generators, (i/2) * Pauli: [E_a, E_b] = -eps_abc E_c
SU2_BASIS = tuple(0.5j * s for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))

MAX_DIM = 64
SCALAR_SUFFIX = "+scalars"


@dataclass(frozen=True, eq=False)
class Representation:
    """Lie(K) basis acting on ``C^dim_v``."""

    k_basis: np.ndarray
    label: str

    def __post_init__(self):
        basis = np.array(self.k_basis, dtype=np.complex128)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2] or basis.shape[0] == 0:
            raise ValueError(f"k_basis must be a nonempty stack of square matrices, got {basis.shape}")
        if basis.shape[1] > MAX_DIM:
            raise ValueError(f"dimension {basis.shape[1]} exceeds {MAX_DIM}")
        for j, x in enumerate(basis):
            if not np.array_equal(x.conj().T, -x):
                raise ValueError(f"basis element {j} is not skew-Hermitian")
        basis.setflags(write=False)
        object.__setattr__(self, "k_basis", basis)

    @property
    def dim_v(self) -> int:
        return self.k_basis.shape[1]

    @property
    def group_dim(self) -> int:
        return self.k_basis.shape[0]

    def element(self, coeffs) -> np.ndarray:
        """``sum_j coeffs_j X_j`` as a dense matrix."""
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (self.group_dim,):
            raise ValueError(f"expected {self.group_dim} coefficients, got {coeffs.shape}")
        return _kernels.combine(self.k_basis, coeffs)

    def __repr__(self):
        return f"Representation({self.label!r}, dim_v={self.dim_v}, group_dim={self.group_dim})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    matrix: np.ndarray
    provenance: Optional[dict[str, Any]] = field(default=None)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("group element must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("group element has non-finite entries")
        if np.linalg.cond(m) > 1e12:
            raise ValueError("group element is numerically singular (condition number > 1e12)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def adjoint(self) -> "GroupElement":
        prov = None if self.provenance is None else {**self.provenance, "adjoint": True}
        return GroupElement(self.matrix.conj().T, prov)

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement(self.matrix @ other.matrix)
        return self.matrix @ other


def as_state(v, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to a finite complex vector, optionally checking its length."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("state vector has non-finite entries")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"state vector has length {v.shape[0]}, expected {dim}")
    return v


# -- builders ------------------------------------------------------------

def _local_operator(op, position, k):
    mats = [np.eye(2, dtype=np.complex128)] * k
    mats[position] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def build_sl2_tensor_rep(k: int) -> Representation:
    """SL(2)^{x k} acting on (C^2)^{x k}; basis ordered by position, then x, y, z."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 2 <= k <= 6:
        raise ValueError(f"k must be an integer in 2..6, got {k!r}")
    basis = [_local_operator(e, p, k) for p in range(k) for e in SU2_BASIS]
    return Representation(np.array(basis), f"sl2x{k}")


def extend_with_scalars(rep: Representation) -> Representation:
    """Append ``i * Identity``, turning K into S^1 K (and G into C^x G)."""
    ident = 1j * np.eye(rep.dim_v)
    if rep.label.endswith(SCALAR_SUFFIX) or any(np.array_equal(x, ident) for x in rep.k_basis):
        raise ValueError(f"{rep.label} already contains the scalar generator")
    return Representation(np.concatenate([rep.k_basis, ident[None]]), rep.label + SCALAR_SUFFIX)


def so4_basis() -> np.ndarray:
    """The six elementary antisymmetric 4x4 matrices ``E_ab - E_ba``, a < b."""
    out = []
    for a in range(4):
        for b in range(a + 1, 4):
            m = np.zeros((4, 4))
            m[a, b], m[b, a] = 1.0, -1.0
            out.append(m)
    return np.array(out)


def build_so4_pair_rep() -> Representation:
    """SO(4) x SO(4) on M_4(C) by ``(g, h) X = g X h^{-1}``.

    Left generators act as ``M -> A M``, right ones as ``M -> -M B``; on the
    row-major flattening these are ``kron(A, I)`` and ``kron(I, B)``.
    """
    eye = np.eye(4)
    left = [np.kron(a, eye) for a in so4_basis()]
    right = [-np.kron(eye, b.T) for b in so4_basis()]
    return Representation(np.array(left + right, dtype=np.complex128), "so4pair")


# Rows are the magic basis vectors (|00>+|11>, i(|00>-|11>), i(|01>+|10>), |01>-|10>)/sqrt2,
# conjugated, so that MAGIC @ psi gives magic-basis coordinates.
MAGIC = (
    np.array(
        [
            [1, 0, 0, 1],
            [1j, 0, 0, -1j],
            [0, 1j, 1j, 0],
            [0, 1, -1, 0],
        ],
        dtype=np.complex128,
    ).conj()
    / np.sqrt(2)
)


@lru_cache(maxsize=None)
def _spin_matrix():
    phi = np.kron(MAGIC, MAGIC)
    phi.setflags(write=False)
    return phi


def spin_isomorphism() -> np.ndarray:
    """Unitary ``Phi`` taking 4-qubit tensors to row-major flattened M_4(C).

    Qubits (1, 2) become the row index and (3, 4) the column index, each pair
    written in the magic basis, under which SU(2) x SU(2) acts by SO(4).
    """
    return _spin_matrix()


def tensor_to_matrix(t) -> np.ndarray:
    return (spin_isomorphism() @ as_state(t, 16)).reshape(4, 4)


def matrix_to_tensor(m) -> np.ndarray:
    return spin_isomorphism().conj().T @ np.asarray(m, dtype=np.complex128).reshape(16)


def spin_lie_map() -> np.ndarray:
    """Real 12x12 matrix ``L`` with ``Phi X_j Phi^H = sum_k L[j, k] Y_k``.

    ``X_j`` is the sl2x4 basis and ``Y_k`` the so4pair basis.
    """
    return _spin_lie_map_cached().copy()


@lru_cache(maxsize=None)
def _spin_lie_map_cached():
    src = build_sl2_tensor_rep(4)
    dst = build_so4_pair_rep()
    phi = spin_isomorphism()
    images = np.array([phi @ x @ phi.conj().T for x in src.k_basis])
    flat_dst = dst.k_basis.reshape(dst.group_dim, -1).T
    coeffs, *_ = np.linalg.lstsq(flat_dst, images.reshape(src.group_dim, -1).T, rcond=None)
    return np.real_if_close(coeffs.T, tol=1e6)


def intertwining_residual(tensors) -> float:
    """Max of ``||Phi X t - X' Phi t||`` over generators and the given tensors."""
    src = build_sl2_tensor_rep(4)
    dst = build_so4_pair_rep()
    phi = spin_isomorphism()
    lmap = _spin_lie_map_cached()
    worst = 0.0
    for t in np.atleast_2d(tensors):
        t = as_state(t, 16)
        for j, x in enumerate(src.k_basis):
            xprime = dst.element(lmap[j])
            worst = max(worst, float(np.linalg.norm(phi @ (x @ t) - xprime @ (phi @ t))))
    return worst


# -- exponentials --------------------------------------------------------

def expm(z: np.ndarray) -> np.ndarray:
    """Dense matrix exponential.

    Hermitian and skew-Hermitian inputs go through ``eigh``; everything else
    through scipy's scaling-and-squaring Pade routine.
    """
    z = np.asarray(z, dtype=np.complex128)
    scale = max(np.abs(z).max(initial=0.0), 1.0)
    if np.abs(z - z.conj().T).max(initial=0.0) <= 1e-15 * scale:
        w, u = np.linalg.eigh(0.5 * (z + z.conj().T))
        return (u * np.exp(w)) @ u.conj().T
    if np.abs(z + z.conj().T).max(initial=0.0) <= 1e-15 * scale:
        h = -0.5j * (z - z.conj().T)
        w, u = np.linalg.eigh(h)
        return (u * np.exp(1j * w)) @ u.conj().T
    return scipy.linalg.expm(z)


def exp_action(rep: Representation, coeffs, v) -> np.ndarray:
    """``exp(sum_j coeffs_j X_j) v``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("coefficients must be finite")
    v = as_state(v, rep.dim_v)
    return expm(rep.element(coeffs)) @ v


def group_element(rep: Representation, coeffs) -> GroupElement:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("coefficients must be finite")
    return GroupElement(expm(rep.element(coeffs)), {"rep": rep.label, "coeffs": coeffs.tolist()})


def local_product(mats) -> GroupElement:
    """``A_1 (x) A_2 (x) ... (x) A_k`` for 2x2 factors."""
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=np.complex128))
    return GroupElement(out, {"factors": [np.asarray(m).tolist() for m in mats]})


def so4pair_element(g, h) -> GroupElement:
    """Operator of ``X -> g X h^{-1}`` on flattened M_4(C)."""
    g = np.asarray(g, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    return GroupElement(np.kron(g, np.linalg.inv(h).T), {"pair": (g, h)})


# -- validation ----------------------------------------------------------

@dataclass
class RepDiagnostics:
    label: str
    skew_hermitian: bool
    bracket_residual: float
    bracket_closed: bool
    min_singular_value: float
    independent: bool

    @property
    def ok(self) -> bool:
        return self.skew_hermitian and self.bracket_closed and self.independent

    def to_dict(self):
        return {
            "label": self.label,
            "skew_hermitian": self.skew_hermitian,
            "bracket_residual": self.bracket_residual,
            "bracket_closed": self.bracket_closed,
            "min_singular_value": self.min_singular_value,
            "independent": self.independent,
            "ok": self.ok,
        }


def validate_rep(rep: Representation, bracket_tol=1e-10, independence_tol=1e-8) -> RepDiagnostics:
    basis = rep.k_basis
    skew = all(np.array_equal(x.conj().T, -x) for x in basis)
    flat = basis.reshape(rep.group_dim, -1).T
    smin = float(np.linalg.svd(flat, compute_uv=False).min())
    residual = 0.0
    for a in range(rep.group_dim):
        for b in range(a + 1, rep.group_dim):
            br = basis[a] @ basis[b] - basis[b] @ basis[a]
            c, *_ = np.linalg.lstsq(flat, br.reshape(-1), rcond=None)
            residual = max(residual, float(np.linalg.norm(flat @ c - br.reshape(-1))))
    return RepDiagnostics(
        label=rep.label,
        skew_hermitian=skew,
        bracket_residual=residual,
        bracket_closed=residual <= bracket_tol,
        min_singular_value=smin,
        independent=smin > independence_tol,
    )


# -- registry ------------------------------------------------------------

@lru_cache(maxsize=None)
def get_rep(label: str) -> Representation:
    """Look up a built-in representation by CLI label (``sl2x4``, ``so4pair+scalars``...)."""
    base, scalars = label, False
    if label.endswith(SCALAR_SUFFIX):
        base, scalars = label[: -len(SCALAR_SUFFIX)], True
    if base == "so4pair":
        rep = build_so4_pair_rep()
    elif base.startswith("sl2x") and base[4:].isdigit() and 2 <= int(base[4:]) <= 6:
        rep = build_sl2_tensor_rep(int(base[4:]))
    else:
        raise KeyError(f"unknown representation label {label!r}")
    return extend_with_scalars(rep) if scalars else rep


REGISTRY_LABELS = tuple(
    lab + suffix
    for lab in ("sl2x2", "sl2x3", "sl2x4", "sl2x5", "sl2x6", "so4pair")
    for suffix in ("", SCALAR_SUFFIX)
)

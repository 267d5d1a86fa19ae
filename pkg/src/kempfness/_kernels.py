"""Inner-loop kernels shared by the flow and stabilizer code.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy
version.  The numba path is used by default; set ``KN_DISABLE_NUMBA=1`` to
force the numpy path (useful for debugging and for the benchmark).
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_FALSY = ("", "0", "false", "no", "off")
USE_NUMBA = numba is not None and os.environ.get("KN_DISABLE_NUMBA", "0").lower() in _FALSY


# numpy reference path ----------------------------------------------------

def quad_forms_np(basis, v):
    """Return ``q_j = v^H X_j v`` for every basis matrix."""
    return np.einsum("i,jik,k->j", v.conj(), basis, v)


def combine_np(basis, coeffs):
    """Return ``sum_j coeffs_j X_j``."""
    return np.tensordot(coeffs, basis, axes=1)


def action_columns_np(basis, v):
    """Columns ``X_j v`` as an ``n x m`` matrix."""
    return (basis @ v).T


def exp_apply_np(evals, evecs, coord, s):
    """``U diag(exp(s*evals)) coord`` where ``coord = U^H v`` is precomputed."""
    return evecs @ (np.exp(s * evals) * coord)


def energy_delta_np(evals, coord, s):
    """``||exp(sH) v||^2 - ||v||^2`` for Hermitian ``H = U diag(evals) U^H``.

    Summed as ``|c_i|^2 expm1(2 s lambda_i)`` so tiny decreases survive rounding.
    """
    return float(np.sum(np.abs(coord) ** 2 * np.expm1(2.0 * s * evals)))


# numba path ----------------------------------------------------------------

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def quad_forms_nb(basis, v):
        m, n, _ = basis.shape
        out = np.zeros(m, dtype=np.complex128)
        vc = np.conj(v)
        for j in range(m):
            acc = 0.0 + 0.0j
            for a in range(n):
                row = 0.0 + 0.0j
                for b in range(n):
                    x = basis[j, a, b]
                    if x != 0:
                        row += x * v[b]
                acc += vc[a] * row
            out[j] = acc
        return out

    @_jit
    def combine_nb(basis, coeffs):
        m, n, _ = basis.shape
        flat = np.ascontiguousarray(basis).reshape(m, n * n)
        return np.dot(coeffs, flat).reshape(n, n)

    @_jit
    def action_columns_nb(basis, v):
        m, n, _ = basis.shape
        out = np.empty((n, m), dtype=np.complex128)
        for j in range(m):
            out[:, j] = np.dot(basis[j], v)
        return out

    @_jit
    def exp_apply_nb(evals, evecs, coord, s):
        n = evals.shape[0]
        scaled = np.empty(n, dtype=np.complex128)
        for i in range(n):
            scaled[i] = np.exp(s * evals[i]) * coord[i]
        out = np.zeros(evecs.shape[0], dtype=np.complex128)
        for a in range(evecs.shape[0]):
            acc = 0.0 + 0.0j
            for i in range(n):
                acc += evecs[a, i] * scaled[i]
            out[a] = acc
        return out

    @_jit
    def energy_delta_nb(evals, coord, s):
        acc = 0.0
        for i in range(evals.shape[0]):
            c = coord[i]
            acc += (c.real * c.real + c.imag * c.imag) * np.expm1(2.0 * s * evals[i])
        return acc


if USE_NUMBA:
    quad_forms = quad_forms_nb
    combine = combine_nb
    action_columns = action_columns_nb
    exp_apply = exp_apply_nb
    energy_delta = energy_delta_nb
else:
    quad_forms = quad_forms_np
    combine = combine_np
    action_columns = action_columns_np
    exp_apply = exp_apply_np
    energy_delta = energy_delta_np


def backend():
    return "numba" if USE_NUMBA else "numpy"

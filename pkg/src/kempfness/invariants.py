"""Polynomial invariants of SO(4) x SO(4) on M_4(C) and their 4-qubit pullback."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rep_model import spin_isomorphism

DOMAINS = ("so4pair", "sl2x4")


@dataclass(frozen=True)
class Invariant:
    name: str
    degree: int
    evaluator: Callable[[np.ndarray], complex]

    def __call__(self, x) -> complex:
        return complex(self.evaluator(x))


@dataclass(frozen=True)
class InvariantSet:
    items: tuple
    domain_label: str

    @property
    def degrees(self):
        return tuple(it.degree for it in self.items)

    @property
    def names(self):
        return tuple(it.name for it in self.items)


def _as_m4(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.size != 16:
        raise ValueError(f"expected a 4x4 matrix or length-16 vector, got shape {x.shape}")
    return x.reshape(4, 4)


def _gram(x):
    m = _as_m4(x)
    # plain transpose: the bilinear form is what SO(4, C) preserves
    return m @ m.T


def d4_invariant_set() -> InvariantSet:
    """Generators of degrees 2, 4, 4, 6 on M_4(C)."""
    items = (
        Invariant("tr(XX^T)", 2, lambda x: np.trace(_gram(x))),
        Invariant("det(X)", 4, lambda x: np.linalg.det(_as_m4(x))),
        Invariant("tr((XX^T)^2)", 4, lambda x: np.trace(np.linalg.matrix_power(_gram(x), 2))),
        Invariant("tr((XX^T)^3)", 6, lambda x: np.trace(np.linalg.matrix_power(_gram(x), 3))),
    )
    return InvariantSet(items, "so4pair")


def pullback_via_spin(inv_set: InvariantSet) -> InvariantSet:
    """Compose each evaluator with the spin isomorphism, giving 4-qubit invariants."""
    if inv_set.domain_label != "so4pair":
        raise ValueError(f"can only pull back so4pair invariants, got {inv_set.domain_label!r}")
    phi = spin_isomorphism()

    def lift(f):
        return lambda t: f(phi @ _check_len(t, 16))

    items = tuple(Invariant(it.name, it.degree, lift(it.evaluator)) for it in inv_set.items)
    return InvariantSet(items, "sl2x4")


def _check_len(t, n):
    t = np.asarray(t, dtype=np.complex128).reshape(-1)
    if t.shape[0] != n:
        raise ValueError(f"expected a length-{n} vector, got {t.shape[0]}")
    return t


def invariant_set_for(label: str):
    """Invariant set acting on the module of representation ``label``, or None."""
    base = label.split("+", 1)[0]
    if base == "so4pair":
        return d4_invariant_set()
    if base == "sl2x4":
        return pullback_via_spin(d4_invariant_set())
    return None


def evaluate_all(inv_set: InvariantSet, x):
    """Values of all invariants and the matching scales ``||x||^degree``."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size != 16:
        raise ValueError(f"{inv_set.domain_label} invariants need 16 entries, got {x.size}")
    if inv_set.domain_label == "sl2x4" and x.ndim != 1:
        raise ValueError("sl2x4 invariants take a flat 4-qubit tensor, not a matrix")
    norm = np.linalg.norm(x)
    values = np.array([it(x) for it in inv_set.items], dtype=np.complex128)
    scales = np.array([norm**it.degree for it in inv_set.items])
    return values, scales


def null_cone_test(inv_set: InvariantSet, x, tol: float = 1e-10) -> bool:
    values, scales = evaluate_all(inv_set, x)
    return bool(np.all(np.abs(values) <= tol * scales))


def compute_r(inv_set: InvariantSet, x, tol: float = 1e-10) -> int:
    """gcd of degrees of the invariants not vanishing at ``x``.

    Any ``z`` with ``z g x = x`` satisfies ``z^r = 1``.  This is an upper bound
    for the minimal such ``r``.
    """
    values, scales = evaluate_all(inv_set, x)
    degrees = [it.degree for it, val, sc in zip(inv_set.items, values, scales) if abs(val) > tol * sc]
    if not degrees:
        raise ValueError("r_x undefined on null cone: every invariant vanishes")
    return int(np.gcd.reduce(degrees))


def invariant_dict(inv_set: InvariantSet, x) -> dict:
    values, _ = evaluate_all(inv_set, x)
    return {it.name: {"degree": it.degree, "value": complex(v)} for it, v in zip(inv_set.items, values)}

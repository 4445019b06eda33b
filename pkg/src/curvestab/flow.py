"""Closed-form matrix exponentials and trajectory derivatives.

Every exponential goes through the real Jordan form, so evaluation at
large |t| stays closed form: overflowing entries come back as ``inf``
instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import BadRange
from .jordan import CaseTag, RealJordanForm, classify
from .linalg import as_matrix, as_vector


@dataclass(frozen=True)
class DerivativeStack:
    """State and its first three time derivatives at one instant.

    ``d3r`` is filled in for both dimensions; planar callers ignore it.
    """

    r: np.ndarray
    dr: np.ndarray
    d2r: np.ndarray
    d3r: np.ndarray

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    def transformed(self, m: np.ndarray) -> "DerivativeStack":
        """The stack of the trajectory ``m @ r(t)``."""
        return DerivativeStack(m @ self.r, m @ self.dr, m @ self.d2r, m @ self.d3r)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def expm_canonical(form: RealJordanForm, t: float) -> np.ndarray:
    """e^{tJ} for the canonical matrix of ``form``."""
    p = form.params
    c = form.case
    t = float(t)
    with np.errstate(over="ignore", invalid="ignore"):
        if c in (CaseTag.D2_DIAG, CaseTag.D3_DIAG):
            keys = ("l1", "l2") if c is CaseTag.D2_DIAG else ("l1", "l2", "l3")
            return np.diag([_exp(p[k] * t) for k in keys])
        if c in (CaseTag.D2_COMPLEX, CaseTag.D3_COMPLEX):
            ea = _exp(p["a"] * t)
            cs, sn = math.cos(p["b"] * t), math.sin(p["b"] * t)
            rot = ea * np.array([[cs, sn], [-sn, cs]])
            if c is CaseTag.D2_COMPLEX:
                return rot
            out = np.zeros((3, 3))
            out[:2, :2] = rot
            out[2, 2] = _exp(p["l3"] * t)
            return out
        if c is CaseTag.D2_BLOCK:
            return _exp(p["lam"] * t) * np.array([[1.0, t], [0.0, 1.0]])
        if c is CaseTag.D3_BLOCK2:
            out = np.zeros((3, 3))
            out[:2, :2] = _exp(p["l1"] * t) * np.array([[1.0, t], [0.0, 1.0]])
            out[2, 2] = _exp(p["l2"] * t)
            return out
        return _exp(p["lam"] * t) * np.array([[1.0, t, 0.5 * t * t], [0.0, 1.0, t], [0.0, 0.0, 1.0]])


def expm_canonical_mp(form: RealJordanForm, t) -> mpmath.matrix:
    """Arbitrary-precision e^{tJ}; no overflow or underflow."""
    p = {k: mpmath.mpf(v) for k, v in form.params.items()}
    c = form.case
    t = mpmath.mpf(t)
    n = form.dim
    m = mpmath.zeros(n, n)
    if c in (CaseTag.D2_DIAG, CaseTag.D3_DIAG):
        for i, k in enumerate(("l1", "l2", "l3")[:n]):
            m[i, i] = mpmath.exp(p[k] * t)
    elif c in (CaseTag.D2_COMPLEX, CaseTag.D3_COMPLEX):
        ea = mpmath.exp(p["a"] * t)
        cs, sn = mpmath.cos(p["b"] * t), mpmath.sin(p["b"] * t)
        m[0, 0], m[0, 1], m[1, 0], m[1, 1] = ea * cs, ea * sn, -ea * sn, ea * cs
        if n == 3:
            m[2, 2] = mpmath.exp(p["l3"] * t)
    elif c is CaseTag.D2_BLOCK:
        e = mpmath.exp(p["lam"] * t)
        m[0, 0], m[0, 1], m[1, 1] = e, e * t, e
    elif c is CaseTag.D3_BLOCK2:
        e = mpmath.exp(p["l1"] * t)
        m[0, 0], m[0, 1], m[1, 1] = e, e * t, e
        m[2, 2] = mpmath.exp(p["l2"] * t)
    else:
        e = mpmath.exp(p["lam"] * t)
        m[0, 0] = m[1, 1] = m[2, 2] = e
        m[0, 1] = m[1, 2] = e * t
        m[0, 2] = e * t * t / 2
    return m


def expm(a, t: float, form: RealJordanForm | None = None) -> np.ndarray:
    """e^{tA} = P^{-1} e^{tJ} P."""
    if form is None:
        form = classify(a)
    with np.errstate(over="ignore", invalid="ignore"):
        return form.P_inv @ expm_canonical(form, t) @ form.P


def canonical_stack(form: RealJordanForm, v0: np.ndarray, t: float) -> DerivativeStack:
    """Derivative stack of v(t) = e^{tJ} v0 in canonical coordinates."""
    with np.errstate(over="ignore", invalid="ignore"):
        v = expm_canonical(form, t) @ v0
        j = form.J
        dv = j @ v
        d2v = j @ dv
        d3v = j @ d2v
    return DerivativeStack(v, dv, d2v, d3v)


def derivative_stack(a, r0, t: float, form: RealJordanForm | None = None) -> DerivativeStack:
    """r, r', r'', r''' at time t for r(t) = e^{tA} r0.

    Derivatives are taken in canonical coordinates (J^k e^{tJ} P r0) and
    mapped back, which keeps components along slowly decaying modes from
    being swamped by rounding in A @ r.
    """
    a = as_matrix(a)
    r0 = as_vector(r0, a.shape[0])
    if form is None:
        form = classify(a)
    cs = canonical_stack(form, form.P @ r0, t)
    with np.errstate(over="ignore", invalid="ignore"):
        return cs.transformed(form.P_inv)


def sample_trajectory(a, r0, t_start: float, t_end: float, n: int) -> list[tuple[float, DerivativeStack]]:
    """n uniformly spaced samples on [t_start, t_end], endpoints included."""
    if not (t_start < t_end) or n < 2:
        raise BadRange(f"need t_start < t_end and n >= 2, got [{t_start}, {t_end}] with n={n}")
    a = as_matrix(a)
    form = classify(a)
    ts = np.linspace(t_start, t_end, int(n))
    return [(float(t), derivative_stack(a, r0, float(t), form)) for t in ts]


__all__ = [
    "DerivativeStack",
    "expm_canonical",
    "expm_canonical_mp",
    "expm",
    "canonical_stack",
    "derivative_stack",
    "sample_trajectory",
]

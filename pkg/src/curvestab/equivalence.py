"""Equivalence transforms v = P r and the curvature/torsion sandwich bounds.

If delta1 >= ... >= delta_n are the singular values of P (delta_n the
smallest), then at every instant

    delta_n^2 / delta1^3 * kappa_r <= kappa_v <= delta1^2 / delta_n^3 * kappa_r
    |det P| / delta1^4 * |tau_r| <= |tau_v| <= |det P| / delta_n^4 * |tau_r|

and tau_v has the sign of det(P) * tau_r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOsculation, SingularMatrix, StationaryPoint
from .flow import derivative_stack
from .geometry import curvature2_signed, curvature3, torsion3
from .linalg import as_matrix, as_vector, determinant, inverse, scale_of, singular_values, triple_product


def transform_system(a, p) -> np.ndarray:
    """B = P A P^{-1}, so that v = P r solves v' = B v."""
    a = as_matrix(a)
    p = as_matrix(p)
    return p @ a @ inverse(p)


@dataclass(frozen=True)
class SandwichBounds:
    kappa_lo: float
    kappa_hi: float
    tau_lo: float
    tau_hi: float
    sign_flip: bool


def sandwich_bounds(p) -> SandwichBounds:
    p = as_matrix(p)
    inverse(p)  # raises SingularMatrix
    d = singular_values(p)
    d1, dn = float(d[0]), float(d[-1])
    if dn <= 0.0:
        raise SingularMatrix("smallest singular value is zero")
    det = determinant(p)
    return SandwichBounds(dn**2 / d1**3, d1**2 / dn**3, abs(det) / d1**4, abs(det) / dn**4, det < 0.0)


@dataclass(frozen=True)
class SandwichReport:
    passed: bool
    checked: int
    skipped: int
    #: smallest relative slack per inequality; negative means a violation
    worst_margin: dict
    violations: tuple = ()


def _rel_margin(lo: float, x: float, hi: float, tol: float) -> float:
    """Smallest relative slack of lo <= x <= hi, with x scaled by the bound."""
    ref = max(abs(hi), 1e-300)
    return min((x - lo) / ref, (hi - x) / ref) + tol


def _torsion_resolved(stack) -> bool:
    ref = np.linalg.norm(stack.dr) * np.linalg.norm(stack.d2r) * np.linalg.norm(stack.d3r)
    return abs(triple_product(stack.dr, stack.d2r, stack.d3r)) > 1e-9 * ref


def verify_sandwich(a, p, r0, t_samples, tol: float = 1e-9) -> SandwichReport:
    """Check the sandwich inequalities and the torsion sign rule at each t.

    kappa_v and tau_v come from an independent evaluation of the transformed
    system B = P A P^{-1} from v0 = P r0.  Instants where the velocity
    vanishes or the osculating plane degenerates are skipped and counted.
    """
    a = as_matrix(a)
    p = as_matrix(p)
    r0 = as_vector(r0, a.shape[0])
    b = transform_system(a, p)
    v0 = p @ r0
    bounds = sandwich_bounds(p)
    n = a.shape[0]
    sa, sb = scale_of(a), scale_of(b)
    tol = tol * max(sa, sb)
    worst = {"kappa": np.inf, "tau": np.inf, "sign": np.inf}
    violations = []
    checked = skipped = 0
    for t in t_samples:
        sr = derivative_stack(a, r0, t)
        sv = derivative_stack(b, v0, t)
        try:
            if n == 2:
                kr, kv = abs(curvature2_signed(sr, sa)), abs(curvature2_signed(sv, sb))
            else:
                kr, kv = curvature3(sr, sa), curvature3(sv, sb)
        except StationaryPoint:
            skipped += 1
            continue
        m = _rel_margin(bounds.kappa_lo * kr, kv, bounds.kappa_hi * kr, tol)
        worst["kappa"] = min(worst["kappa"], m)
        if m < 0:
            violations.append(("kappa", float(t), kr, kv))
        if n == 3:
            try:
                tr, tv = torsion3(sr), torsion3(sv)
            except DegenerateOsculation:
                skipped += 1
                checked += 1
                continue
            m = _rel_margin(bounds.tau_lo * abs(tr), abs(tv), bounds.tau_hi * abs(tr), tol)
            worst["tau"] = min(worst["tau"], m)
            if m < 0:
                violations.append(("tau", float(t), tr, tv))
            # the sign rule is only meaningful away from tau = 0
            if _torsion_resolved(sr) and _torsion_resolved(sv):
                expected = -1.0 if bounds.sign_flip else 1.0
                agree = np.sign(tv) == expected * np.sign(tr)
                worst["sign"] = min(worst["sign"], 1.0 if agree else -1.0)
                if not agree:
                    violations.append(("sign", float(t), tr, tv))
        checked += 1
    return SandwichReport(not violations, checked, skipped, worst, tuple(violations))


__all__ = [
    "transform_system",
    "SandwichBounds",
    "sandwich_bounds",
    "SandwichReport",
    "verify_sandwich",
]

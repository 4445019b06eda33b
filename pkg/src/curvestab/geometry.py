"""Curvature and torsion of trajectories.

Pointwise functions raise typed errors at degenerate instants; the
identically-degenerate conventions (kappa = 0, tau = 0) are applied by the
asymptotic analysis, never here.

``log_geometry`` is an arbitrary-precision variant working in canonical
coordinates.  With S = P^{-1} the cross product maps as
(S a) x (S b) = cof(S) (a x b) and the triple product as
(S a, S b, S c) = det(S) (a, b, c), so nearly parallel velocity and
acceleration at large t lose no digits to cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegenerateOsculation, DimensionError, StationaryPoint
from .flow import DerivativeStack, derivative_stack, expm_canonical_mp
from .jordan import RealJordanForm, classify
from .linalg import EPS, as_matrix, cross, scale_of, triple_product

MP_DPS = 50


def _check_velocity(stack: DerivativeStack, scale: float) -> float:
    speed = float(np.linalg.norm(stack.dr))
    if speed == 0.0 or speed <= EPS * scale * float(np.linalg.norm(stack.r)):
        raise StationaryPoint("velocity vanishes")
    return speed


def curvature3(stack: DerivativeStack, scale: float = 1.0) -> float:
    """||r' x r''|| / ||r'||^3 for a space curve."""
    if stack.dim != 3:
        raise DimensionError("curvature3 needs a 3-D stack")
    speed = _check_velocity(stack, scale)
    return float(np.linalg.norm(cross(stack.dr, stack.d2r))) / speed**3


def torsion3(stack: DerivativeStack) -> float:
    """(r', r'', r''') / ||r' x r''||^2."""
    if stack.dim != 3:
        raise DimensionError("torsion3 needs a 3-D stack")
    c = cross(stack.dr, stack.d2r)
    cn = float(np.linalg.norm(c))
    ref = float(np.linalg.norm(stack.dr) * np.linalg.norm(stack.d2r))
    if cn == 0.0 or cn <= EPS * ref:
        raise DegenerateOsculation("velocity and acceleration are parallel")
    return triple_product(stack.dr, stack.d2r, stack.d3r) / cn**2


def curvature2_signed(stack: DerivativeStack, scale: float = 1.0) -> float:
    """(x'y'' - x''y') / (x'^2 + y'^2)^{3/2} for a plane curve."""
    if stack.dim != 2:
        raise DimensionError("curvature2_signed needs a 2-D stack")
    speed = _check_velocity(stack, scale)
    dx, dy = stack.dr
    ddx, ddy = stack.d2r
    return float(dx * ddy - ddx * dy) / speed**3


@dataclass(frozen=True)
class GeometrySample:
    """Geometry at one instant; ``None`` where the quantity is undefined."""

    t: float
    kappa: float | None
    tau: float | None = None
    kappa_signed: float | None = None


def sample_geometry(stack: DerivativeStack, t: float, scale: float = 1.0) -> GeometrySample:
    if stack.dim == 2:
        try:
            ks = curvature2_signed(stack, scale)
        except StationaryPoint:
            return GeometrySample(t, None, None, None)
        return GeometrySample(t, abs(ks), None, ks)
    try:
        k = curvature3(stack, scale)
    except StationaryPoint:
        return GeometrySample(t, None, None, None)
    try:
        tau = torsion3(stack)
    except DegenerateOsculation:
        tau = None
    return GeometrySample(t, k, tau, None)


def geometry_at(a, r0, t: float) -> GeometrySample:
    a = as_matrix(a)
    return sample_geometry(derivative_stack(a, r0, t), t, scale_of(a))


@dataclass(frozen=True)
class LogGeometry:
    """log kappa, log |tau| and sign(tau) at one instant.

    ``-inf`` marks an exact zero; ``log_tau`` is ``None`` in 2-D or when the
    osculating plane is undefined.
    """

    t: float
    log_kappa: float
    log_tau: float | None
    tau_sign: int
    log_speed: float
    cross_ratio: float
    triple_ratio: float = 0.0

    @property
    def kappa(self) -> float:
        return _safe_exp(self.log_kappa)

    @property
    def tau(self) -> float | None:
        if self.log_tau is None:
            return None
        return self.tau_sign * _safe_exp(self.log_tau)


def _safe_exp(x: float) -> float:
    if x == -math.inf:
        return 0.0
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _mlog(x) -> float:
    return -math.inf if x == 0 else float(mpmath.log(x))


def _mcross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def _mnorm(v):
    return mpmath.sqrt(sum(x * x for x in v))


def log_geometry(form: RealJordanForm, v0, t: float, dps: int = MP_DPS) -> LogGeometry:
    """High-precision geometry of r(t) = P^{-1} e^{tJ} v0.

    Raises StationaryPoint when the velocity is exactly zero.
    """
    n = form.dim
    with mpmath.workdps(dps):
        m = expm_canonical_mp(form, t)
        j = mpmath.matrix(form.J.tolist())
        s = mpmath.matrix(form.P_inv.tolist())
        v = m * mpmath.matrix([float(x) for x in v0])
        a = j * v
        b = j * a
        vel = s * a
        speed = _mnorm(vel)
        if speed == 0:
            raise StationaryPoint("velocity vanishes")
        det_s = mpmath.det(s)
        if n == 2:
            num = abs(det_s * (a[0] * b[1] - a[1] * b[0]))
            ref = speed * _mnorm(s * b)
            ratio = float(num / ref) if ref != 0 else 0.0
            return LogGeometry(float(t), _mlog(num) - 3 * _mlog(speed), None, 0, _mlog(speed), ratio)
        c = j * b
        ab = _mcross(a, b)
        # cofactor matrix of S is adj(S)^T = det(S) S^{-T}
        cof = mpmath.matrix(3, 3)
        for i in range(3):
            for k in range(3):
                rows = [r for r in range(3) if r != i]
                cols = [q for q in range(3) if q != k]
                minor = s[rows[0], cols[0]] * s[rows[1], cols[1]] - s[rows[0], cols[1]] * s[rows[1], cols[0]]
                cof[i, k] = (-1) ** (i + k) * minor
        cr = cof * mpmath.matrix(ab)
        cn = _mnorm(cr)
        ref = speed * _mnorm(s * b)
        ratio = float(cn / ref) if ref != 0 else 0.0
        log_k = _mlog(cn) - 3 * _mlog(speed)
        if cn == 0:
            return LogGeometry(float(t), log_k, None, 0, _mlog(speed), ratio)
        trip = det_s * (ab[0] * c[0] + ab[1] * c[1] + ab[2] * c[2])
        sign = 0 if trip == 0 else (1 if trip > 0 else -1)
        tref = ref * _mnorm(s * c)
        tratio = float(abs(trip) / tref) if tref != 0 else 0.0
        log_t = _mlog(abs(trip)) - 2 * _mlog(cn)
        return LogGeometry(float(t), log_k, log_t, sign, _mlog(speed), ratio, tratio)


def log_geometry_of(a, r0, t: float, dps: int = MP_DPS) -> LogGeometry:
    form = classify(a)
    return log_geometry(form, form.P @ np.asarray(r0, dtype=float), t, dps)


__all__ = [
    "curvature3",
    "torsion3",
    "curvature2_signed",
    "GeometrySample",
    "sample_geometry",
    "geometry_at",
    "LogGeometry",
    "log_geometry",
    "log_geometry_of",
]

"""Asymptotic classes of curvature and torsion.

Three independent routes decide how kappa(t) and tau(t) behave as
t -> +inf for a trajectory of v' = J v:

* ``build_kappa_sq`` / ``build_tau`` write kappa^2 and tau as ratios of
  exp-polynomials per Jordan case, which ``classify_limit`` then ranks;
* ``table_classify`` looks the eigenvalue pattern up in ``tables``;
* ``numeric_limit_probe`` evaluates the geometry at growing times in
  extended precision and fits the growth trend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import Inconclusive, NonGenericInitialValue, StationaryPoint, UnclassifiableLimit, ZeroDenominator
from .exppoly import ExpPolyExpr, LimitClass, LimitTag, Ratio, classify_limit
from .geometry import log_geometry
from .jordan import CLUSTER_TOL, CaseTag, RealJordanForm, classify
from .linalg import EPS, as_vector
from .tables import TABLES, Split

E = ExpPolyExpr
_ZERO = Ratio(E(), E.const(1.0))


def _sq(x: float) -> float:
    return x * x


def _poly_expr(coeffs, rate: float) -> ExpPolyExpr:
    return E.poly([float(c) for c in coeffs], rate)


def _block3_polys(lam: float, x: float, y: float, z: float):
    """(u1, u2, u3) polynomial coefficients (low order first) with
    r'(t) = e^{lam t} (u1, u2, u3) for the 3x3 Jordan block."""
    u1 = np.array([lam * x + y, lam * y + z, 0.5 * lam * z])
    u2 = np.array([lam * y + z, lam * z])
    u3 = np.array([lam * z])
    return u1, u2, u3


def _block3_f(lam, x, y, z) -> np.ndarray:
    """f(t) with ||r' x r''||^2 = f(t) e^{4 lam t}."""
    u1, u2, u3 = _block3_polys(lam, x, y, z)
    c1 = -npoly.polymul(u3, u3)
    c2 = npoly.polymul(u2, u3)
    c3 = npoly.polysub(npoly.polymul(u1, u3), npoly.polymul(u2, u2))
    f = npoly.polyadd(npoly.polyadd(npoly.polymul(c1, c1), npoly.polymul(c2, c2)), npoly.polymul(c3, c3))
    return np.atleast_1d(f)


def _block3_g(lam, x, y, z) -> np.ndarray:
    """g(t) with ||r'||^6 = g(t) e^{6 lam t}."""
    u1, u2, u3 = _block3_polys(lam, x, y, z)
    s = npoly.polyadd(npoly.polyadd(npoly.polymul(u1, u1), npoly.polymul(u2, u2)), npoly.polymul(u3, u3))
    return np.atleast_1d(npoly.polypow(s, 3))


def _block2_terms(l1, l2, x, y, z):
    """The three numerator terms shared by kappa^2 and tau in the 2+1 block case."""
    t1 = E.term(_sq(l1 * l2 * (l2 - l1) * y * z), 0, 2 * (l1 + l2))
    lin = _poly_expr([l1 * l1 * x - l1 * l2 * x + 2 * l1 * y - l2 * y, l1 * (l1 - l2) * y], 0.0)
    t2 = _sq(l2 * z) * lin * lin * E.term(1.0, 0, 2 * (l1 + l2))
    t3 = E.term(_sq(l1 * l1 * y * y), 0, 4 * l1)
    return t1 + t2 + t3


def build_kappa_sq(form: RealJordanForm, v0) -> Ratio:
    """kappa(t)^2 as num/den for v(t) = e^{tJ} v0 (v0 in canonical coordinates).

    A trajectory with identically vanishing velocity follows the kappa = 0
    convention and yields an empty numerator over 1.
    """
    v0 = as_vector(v0, form.dim)
    p = form.params
    c = form.case
    if c is CaseTag.D2_DIAG:
        l1, l2 = p["l1"], p["l2"]
        x, y = v0
        num = E.term(_sq(l1 * l2 * (l2 - l1) * x * y), 0, 2 * (l1 + l2))
        den = (E.term(_sq(l1 * x), 0, 2 * l1) + E.term(_sq(l2 * y), 0, 2 * l2)) ** 3
    elif c is CaseTag.D2_COMPLEX:
        a, b = p["a"], p["b"]
        x, y = v0
        num = E.const(b * b)
        den = E.term((a * a + b * b) * (x * x + y * y), 0, 2 * a)
    elif c is CaseTag.D2_BLOCK:
        lam = p["lam"]
        x, y = v0
        lin = _poly_expr([lam * x + y, lam * y], 0.0)
        num = E.term(lam**4 * y**4, 0, 4 * lam)
        den = (lin * lin + _sq(lam * y)) ** 3 * E.term(1.0, 0, 6 * lam)
    elif c is CaseTag.D3_DIAG:
        l1, l2, l3 = p["l1"], p["l2"], p["l3"]
        x, y, z = v0
        num = (
            E.term(_sq(l2 * l3 * (l3 - l2) * y * z), 0, 2 * (l2 + l3))
            + E.term(_sq(l1 * l3 * (l1 - l3) * x * z), 0, 2 * (l1 + l3))
            + E.term(_sq(l1 * l2 * (l2 - l1) * x * y), 0, 2 * (l1 + l2))
        )
        den = (
            E.term(_sq(l1 * x), 0, 2 * l1) + E.term(_sq(l2 * y), 0, 2 * l2) + E.term(_sq(l3 * z), 0, 2 * l3)
        ) ** 3
    elif c is CaseTag.D3_COMPLEX:
        a, b, l3 = p["a"], p["b"], p["l3"]
        x, y, z = v0
        rho = x * x + y * y
        m = a * a + b * b
        q = _sq(a - l3) + b * b
        num = m * rho * (E.term(l3 * l3 * q * z * z, 0, 2 * (a + l3)) + E.term(b * b * m * rho, 0, 4 * a))
        den = (E.term(m * rho, 0, 2 * a) + E.term(_sq(l3 * z), 0, 2 * l3)) ** 3
    elif c is CaseTag.D3_BLOCK2:
        l1, l2 = p["l1"], p["l2"]
        x, y, z = v0
        num = _block2_terms(l1, l2, x, y, z)
        lin = _poly_expr([l1 * x + y, l1 * y], 0.0)
        den = ((lin * lin + _sq(l1 * y)) * E.term(1.0, 0, 2 * l1) + E.term(_sq(l2 * z), 0, 2 * l2)) ** 3
    else:
        lam = p["lam"]
        x, y, z = v0
        num = _poly_expr(_block3_f(lam, x, y, z), 4 * lam)
        den = _poly_expr(_block3_g(lam, x, y, z), 6 * lam)
    if den.is_zero:
        return _ZERO
    return Ratio(num, den)


def build_tau(form: RealJordanForm, v0) -> Ratio:
    """tau(t) as num/den; an identically degenerate osculating plane gives
    the tau = 0 convention (empty numerator over 1)."""
    if form.dim != 3:
        raise ValueError("torsion is defined for 3-D systems only")
    v0 = as_vector(v0, 3)
    p = form.params
    c = form.case
    x, y, z = v0
    if c is CaseTag.D3_DIAG:
        l1, l2, l3 = p["l1"], p["l2"], p["l3"]
        k = l1 * l2 * l3 * (l2 - l1) * (l3 - l1) * (l3 - l2) * x * y * z
        num = E.term(k, 0, l1 + l2 + l3)
        den = build_kappa_sq(form, v0).num
    elif c is CaseTag.D3_COMPLEX:
        a, b, l3 = p["a"], p["b"], p["l3"]
        q = _sq(a - l3) + b * b
        num = E.const(-b * l3 * q * z)
        den = E.term(l3 * l3 * q * z * z, 0, l3) + E.term(b * b * (a * a + b * b) * (x * x + y * y), 0, 2 * a - l3)
    elif c is CaseTag.D3_BLOCK2:
        l1, l2 = p["l1"], p["l2"]
        num = E.term(-l1 * l1 * l2 * _sq(l1 - l2) * y * y * z, 0, 2 * l1 + l2)
        den = _block2_terms(l1, l2, x, y, z)
    else:
        lam = p["lam"]
        num = E.const(-(lam**3) * z**3)
        den = _poly_expr(_block3_f(lam, x, y, z), lam)
    if den.is_zero:
        return _ZERO
    return Ratio(num, den)


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class AsymptoticReport:
    """Limit classes of kappa (and tau in 3-D) for one trajectory."""

    kappa_class: LimitClass
    tau_class: LimitClass | None = None
    dominant_exponents: dict = field(default_factory=dict)
    row: str | None = None
    notes: tuple[str, ...] = ()


def _expm_exprs(form: RealJordanForm) -> list[list[ExpPolyExpr]]:
    """Entries of e^{tJ} as exp-polynomials."""
    p, c, n = form.params, form.case, form.dim
    m = [[E() for _ in range(n)] for _ in range(n)]

    def block(i0: int, k: int, lam: float) -> None:
        for i in range(k):
            for j in range(i, k):
                m[i0 + i][i0 + j] = E.term(1.0 / math.factorial(j - i), j - i, lam)

    def rotation(a: float, b: float) -> None:
        m[0][0] = m[1][1] = E.term(1.0, 0, a, b)
        m[0][1] = E.term(1.0, 0, a, b, -math.pi / 2)
        m[1][0] = -m[0][1]

    if c in (CaseTag.D2_DIAG, CaseTag.D3_DIAG):
        for i, key in enumerate(("l1", "l2", "l3")[:n]):
            block(i, 1, p[key])
    elif c in (CaseTag.D2_COMPLEX, CaseTag.D3_COMPLEX):
        rotation(p["a"], p["b"])
        if n == 3:
            block(2, 1, p["l3"])
    elif c is CaseTag.D2_BLOCK:
        block(0, 2, p["lam"])
    elif c is CaseTag.D3_BLOCK2:
        block(0, 2, p["l1"])
        block(2, 1, p["l2"])
    else:
        block(0, 3, p["lam"])
    return m


def _apply(m, w) -> list[ExpPolyExpr]:
    return [sum((float(w[j]) * m[i][j] for j in range(len(w)) if w[j] != 0.0), E()) for i in range(len(m))]


def original_ratios(form: RealJordanForm, v0) -> tuple[Ratio, Ratio | None]:
    """kappa^2 and tau of r(t) = P^{-1} e^{tJ} v0 itself, not of its canonical image.

    Cross and triple products are formed in canonical coordinates, where
    cancellations are exact, and mapped by cof(S) and det(S), S = P^{-1}.
    """
    v0 = as_vector(v0, form.dim)
    s = form.P_inv
    det_s = float(np.linalg.det(s))
    m = _expm_exprs(form)
    jv = form.J @ v0
    a, b = _apply(m, jv), _apply(m, form.J @ jv)
    vel = [sum((float(s[i, j]) * a[j] for j in range(form.dim)), E()) for i in range(form.dim)]
    speed_sq = sum((x * x for x in vel), E())
    if speed_sq.is_zero:
        return _ZERO, (_ZERO if form.dim == 3 else None)
    if form.dim == 2:
        cr = det_s * (a[0] * b[1] - a[1] * b[0])
        return Ratio(cr * cr, speed_sq**3), None
    w = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    cof = det_s * np.linalg.inv(s).T
    cw = [sum((float(cof[i, j]) * w[j] for j in range(3)), E()) for i in range(3)]
    cross_sq = sum((x * x for x in cw), E())
    kappa_sq = Ratio(cross_sq, speed_sq**3)
    if cross_sq.is_zero:
        return kappa_sq, _ZERO
    c = _apply(m, form.J @ (form.J @ jv))
    trip = det_s * sum((w[i] * c[i] for i in range(3)), E())
    return kappa_sq, Ratio(trip, cross_sq)


def _rebound(canonical: LimitClass, ratio: Ratio, sqrt: bool, notes: list) -> LimitClass:
    """Replace the canonical bounds of a bounded class by those of the actual curve."""
    if canonical.tag is not LimitTag.BOUNDED:
        return canonical
    try:
        oc = classify_limit(ratio)
    except (UnclassifiableLimit, ZeroDenominator):
        oc = None
    if oc is None or oc.tag is not LimitTag.BOUNDED:
        notes.append("bounds shown for the canonical trajectory")
        return canonical
    lo, hi = oc.bounds
    if sqrt:
        lo, hi = math.sqrt(lo), math.sqrt(hi)
    return LimitClass(canonical.tag, (lo, hi), canonical.evidence)


def exppoly_report(form: RealJordanForm, v0, actual_bounds: bool = True) -> AsymptoticReport:
    """Classes from the closed-form exp-polynomial ratios.

    Tags come from the canonical trajectory; bounds of a bounded class are
    recomputed for the trajectory in original coordinates unless
    ``actual_bounds`` is off.  Kappa bounds are for kappa, not its square.
    """
    kc = classify_limit(build_kappa_sq(form, v0))
    if kc.bounds is not None:
        kc = LimitClass(kc.tag, (math.sqrt(kc.bounds[0]), math.sqrt(kc.bounds[1])), kc.evidence)
    dom = {"kappa": kc.evidence}
    tc = None
    if form.dim == 3:
        tc = classify_limit(build_tau(form, v0))
        dom["tau"] = tc.evidence
    notes: list[str] = []
    bounded = kc.tag is LimitTag.BOUNDED or (tc is not None and tc.tag is LimitTag.BOUNDED)
    if actual_bounds and bounded:
        k_ratio, t_ratio = original_ratios(form, v0)
        kc = _rebound(kc, k_ratio, True, notes)
        if tc is not None:
            tc = _rebound(tc, t_ratio, False, notes)
    return AsymptoticReport(kc, tc, dom, notes=tuple(notes))


def canonical_initial(form: RealJordanForm, r0) -> np.ndarray:
    """v0 = P r0, rejecting initial values on a canonical coordinate hyperplane."""
    r0 = as_vector(r0, form.dim)
    v0 = form.P @ r0
    norm = float(np.linalg.norm(v0))
    if norm == 0.0 or np.any(np.abs(v0) <= EPS * norm):
        raise NonGenericInitialValue(f"canonical initial value {v0.tolist()} has a zero coordinate")
    return v0


def _sign_fn(form: RealJordanForm):
    ref = max([1.0] + [abs(v) for v in form.params.values()])
    tol = CLUSTER_TOL * ref

    def sign(x: float) -> int:
        return 0 if abs(x) <= tol else (1 if x > 0 else -1)

    return sign


def _resolve(outcome, sign, params, notes: list) -> LimitTag:
    if isinstance(outcome, Split):
        s = sign(outcome.expr(params))
        if s == 0 and outcome.zero_note:
            notes.append(f"{outcome.zero_note}: {outcome.label} = 0")
        return {1: outcome.pos, 0: outcome.zero, -1: outcome.neg}[s]
    return outcome


def table_lookup(form: RealJordanForm) -> tuple[str, LimitTag, LimitTag | None, tuple[str, ...]]:
    """(pattern, kappa tag, tau tag, notes) for the eigenvalue pattern of ``form``."""
    sign = _sign_fn(form)
    p = form.params
    for row in TABLES[form.case]:
        if row.predicate(sign, p):
            notes: list[str] = []
            k = _resolve(row.kappa, sign, p, notes)
            t = _resolve(row.tau, sign, p, notes) if form.dim == 3 else None
            return row.pattern, k, t, tuple(notes)
    raise AssertionError(f"no table row matches {form.case} {p}")


def table_keys(form: RealJordanForm) -> list[tuple[CaseTag, str, str, str | None]]:
    """The sub-rows of ``tables.all_subrows`` that ``form`` lands on."""
    sign = _sign_fn(form)
    p = form.params
    for row in TABLES[form.case]:
        if row.predicate(sign, p):
            out = []
            for name, outcome in (("kappa", row.kappa), ("tau", row.tau)):
                if outcome is None or (name == "tau" and form.dim != 3):
                    continue
                branch = None
                if isinstance(outcome, Split):
                    branch = {1: "+", 0: "0", -1: "-"}[sign(outcome.expr(p))]
                out.append((form.case, row.pattern, name, branch))
            return out
    raise AssertionError(f"no table row matches {form.case} {p}")


def table_classify(form: RealJordanForm, r0) -> AsymptoticReport:
    """Classes read off the limit tables for a generic initial value r0
    (given in the original coordinates of ``form``)."""
    canonical_initial(form, r0)
    pattern, k, t, notes = table_lookup(form)
    return AsymptoticReport(LimitClass(k), LimitClass(t) if t is not None else None, {}, pattern, notes)


# ------------------------------------------------------------ numeric probe

PROBE_TIMES = (10.0, 20.0, 40.0, 80.0)
SLOPE_TOL = 0.05
WINDOW = 24


def _zero_probe(form: RealJordanForm, v0, quantity: str) -> bool:
    """True when the quantity vanishes at several early instants."""
    s = max(1.0, float(np.max(np.sum(np.abs(form.J), axis=1))))
    for t in (0.0, 0.5 / s, 1.0 / s):
        try:
            g = log_geometry(form, v0, t)
        except StationaryPoint:
            continue
        if g.cross_ratio > 1e-9:
            if quantity == "kappa":
                return False
            if g.triple_ratio > 1e-9:
                return False
    return True


def numeric_limit_probe(a, r0, quantity: str = "kappa", times=PROBE_TIMES, form: RealJordanForm | None = None):
    """Limit class of kappa (or |tau|) from sampled values.

    For each probe time T the quantity is evaluated on a window covering one
    oscillation period (a single point for real spectra); the slopes of
    log max and log min against log T decide: both above SLOPE_TOL means
    infinity, both below -SLOPE_TOL means zero, both inside means bounded.
    """
    if form is None:
        form = classify(a)
    v0 = form.P @ as_vector(r0, form.dim)
    if quantity not in ("kappa", "tau"):
        raise ValueError(quantity)
    if quantity == "tau" and form.dim != 3:
        raise ValueError("torsion needs a 3-D system")
    if _zero_probe(form, v0, quantity):
        return LimitClass(LimitTag.IDENTICALLY_ZERO)
    freq = form.params.get("b", 0.0)
    logs_t, lo, hi = [], [], []
    for t0 in times:
        if freq == 0.0:
            ts = [t0]
        else:
            # whole periods, so a periodic quantity is sampled at the same phases
            period = 2.0 * math.pi / freq
            start = period * math.ceil(t0 / period)
            ts = list(start + np.linspace(0.0, period, WINDOW, endpoint=False))
        vals = []
        for t in ts:
            try:
                g = log_geometry(form, v0, t)
            except StationaryPoint:
                continue
            val = g.log_kappa if quantity == "kappa" else g.log_tau
            if val is not None and math.isfinite(val):
                vals.append(val)
        if vals:
            logs_t.append(math.log(t0))
            lo.append(min(vals))
            hi.append(max(vals))
    if len(logs_t) < 2:
        raise Inconclusive("too few probe points could be evaluated")
    s_lo = float(np.polyfit(logs_t, lo, 1)[0])
    s_hi = float(np.polyfit(logs_t, hi, 1)[0])
    ev = (s_lo, s_hi)
    if s_lo > SLOPE_TOL and s_hi > SLOPE_TOL:
        return LimitClass(LimitTag.TENDS_TO_INFINITY, None, ev)
    if s_lo < -SLOPE_TOL and s_hi < -SLOPE_TOL:
        return LimitClass(LimitTag.TENDS_TO_ZERO, None, ev)
    if abs(s_lo) <= SLOPE_TOL and abs(s_hi) <= SLOPE_TOL:
        c1, c2 = math.exp(lo[-1]), math.exp(hi[-1])
        return LimitClass(LimitTag.BOUNDED, (c1, c2), ev)
    raise Inconclusive(f"mixed growth trends {ev}")


__all__ = [
    "build_kappa_sq",
    "build_tau",
    "AsymptoticReport",
    "exppoly_report",
    "canonical_initial",
    "table_lookup",
    "table_keys",
    "table_classify",
    "numeric_limit_probe",
    "PROBE_TIMES",
]

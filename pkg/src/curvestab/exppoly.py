"""Exp-polynomial-trigonometric sums and their behaviour as t -> +inf.

A term is ``coeff * t**power * exp(rate*t) * cos(freq*t + phase)``.  Sums
of such terms are closed under addition and multiplication, which is all
the curvature and torsion formulas need.
"""

from __future__ import annotations

import cmath
import enum
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UnclassifiableLimit, ZeroDenominator

#: Two rates (or frequencies) closer than this, relative to max(1, |rate|), are equal.
RATE_TOL = 1e-9
#: Merged coefficients smaller than this fraction of their inputs are dropped.
CANCEL_TOL = 1e-12


def _close(x: float, y: float, tol: float = RATE_TOL) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class ExpPolyTerm:
    coeff: float
    power: int = 0
    rate: float = 0.0
    freq: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("power must be nonnegative")
        freq, phase, coeff = float(self.freq), float(self.phase), float(self.coeff)
        if freq < 0.0:
            freq, phase = -freq, -phase
        if freq == 0.0:
            coeff, phase = coeff * math.cos(phase), 0.0
        else:
            phase = math.remainder(phase, 2.0 * math.pi)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "rate", float(self.rate))
        object.__setattr__(self, "power", int(self.power))

    def evaluate(self, t: float) -> float:
        osc = math.cos(self.freq * t + self.phase) if self.freq else 1.0
        return self.coeff * t**self.power * math.exp(self.rate * t) * osc

    @classmethod
    def _fast(cls, coeff: float, power: int, rate: float, freq: float, phase: float) -> "ExpPolyTerm":
        """Construct without validation; arguments must be floats/int."""
        if freq < 0.0:
            freq, phase = -freq, -phase
        if freq == 0.0:
            if phase:
                coeff *= math.cos(phase)
            phase = 0.0
        elif not -math.pi <= phase <= math.pi:
            phase = math.remainder(phase, 2.0 * math.pi)
        obj = object.__new__(cls)
        obj.__dict__.update(coeff=coeff, power=power, rate=rate, freq=freq, phase=phase)
        return obj

    def __mul__(self, other: "ExpPolyTerm") -> list["ExpPolyTerm"]:
        c = self.coeff * other.coeff
        m = self.power + other.power
        r = self.rate + other.rate
        if self.freq == 0.0 or other.freq == 0.0:
            return [ExpPolyTerm._fast(c, m, r, self.freq + other.freq, self.phase + other.phase)]
        return [
            ExpPolyTerm._fast(c / 2, m, r, self.freq + other.freq, self.phase + other.phase),
            ExpPolyTerm._fast(c / 2, m, r, self.freq - other.freq, self.phase - other.phase),
        ]


def _merge(terms) -> tuple[ExpPolyTerm, ...]:
    """Combine terms sharing (power, rate, freq); phases combine as phasors."""
    exact: dict = {}
    for tm in terms:
        if tm.coeff == 0.0:
            continue
        key = (tm.power, tm.rate, tm.freq)
        z = tm.coeff * cmath.exp(1j * tm.phase) if tm.freq else complex(tm.coeff)
        if key in exact:
            acc = exact[key]
            acc[0] += z
            acc[1] = max(acc[1], abs(tm.coeff))
        else:
            exact[key] = [z, abs(tm.coeff)]
    groups: list[list] = []
    for (power, rate, freq), (z, ref) in sorted(exact.items(), key=lambda kv: kv[0]):
        for g in groups:
            if (
                g[0] == power
                and abs(g[1] - rate) <= RATE_TOL * max(1.0, abs(g[1]), abs(rate))
                and abs(g[2] - freq) <= RATE_TOL * max(1.0, abs(g[2]), abs(freq))
            ):
                g[3] += z
                g[4] = max(g[4], ref)
                break
        else:
            groups.append([power, rate, freq, z, ref])
    out = []
    for power, rate, freq, z, ref in groups:
        if abs(z) <= CANCEL_TOL * ref:
            continue
        if freq == 0.0:
            out.append(ExpPolyTerm._fast(z.real, power, rate, 0.0, 0.0))
        else:
            out.append(ExpPolyTerm._fast(abs(z), power, rate, freq, cmath.phase(z)))
    return tuple(out)


@dataclass(frozen=True)
class ExpPolyExpr:
    """Finite sum of ExpPolyTerm; the empty sum is identically zero."""

    terms: tuple[ExpPolyTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _merge(self.terms))

    @classmethod
    def const(cls, c: float) -> "ExpPolyExpr":
        return cls((ExpPolyTerm(c),))

    @classmethod
    def term(cls, coeff: float, power: int = 0, rate: float = 0.0, freq: float = 0.0, phase: float = 0.0):
        return cls((ExpPolyTerm(coeff, power, rate, freq, phase),))

    @classmethod
    def poly(cls, coeffs, rate: float = 0.0) -> "ExpPolyExpr":
        """sum_i coeffs[i] t^i e^{rate t}"""
        return cls(tuple(ExpPolyTerm(c, i, rate) for i, c in enumerate(coeffs) if c != 0.0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "ExpPolyExpr":
        other = _lift(other)
        return ExpPolyExpr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "ExpPolyExpr":
        return ExpPolyExpr(tuple(ExpPolyTerm(-x.coeff, x.power, x.rate, x.freq, x.phase) for x in self.terms))

    def __sub__(self, other) -> "ExpPolyExpr":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "ExpPolyExpr":
        return _lift(other) - self

    def __mul__(self, other) -> "ExpPolyExpr":
        if not isinstance(other, ExpPolyExpr):
            c = float(other)
            return ExpPolyExpr(tuple(ExpPolyTerm._fast(c * x.coeff, x.power, x.rate, x.freq, x.phase) for x in self.terms))
        out: list[ExpPolyTerm] = []
        for x in self.terms:
            for y in other.terms:
                out += x * y
        return ExpPolyExpr(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExpPolyExpr":
        if k < 0:
            raise ValueError("negative powers are not exp-polynomials")
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return ExpPolyExpr.const(1.0) if out is None else out

    def evaluate(self, t: float) -> float:
        return float(sum(x.evaluate(t) for x in self.terms))

    def dominant_key(self) -> tuple[float, int]:
        """Largest (rate, power), rates compared with tolerance."""
        if self.is_zero:
            raise ValueError("the zero expression has no dominant term")
        best = self.terms[0]
        for x in self.terms[1:]:
            if _close(x.rate, best.rate):
                if x.power > best.power:
                    best = x
            elif x.rate > best.rate:
                best = x
        return best.rate, best.power

    def dominant_terms(self) -> tuple[ExpPolyTerm, ...]:
        rate, power = self.dominant_key()
        return tuple(x for x in self.terms if x.power == power and _close(x.rate, rate))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for x in self.terms:
            s = f"{x.coeff:.6g}"
            if x.power:
                s += f"*t^{x.power}"
            if x.rate:
                s += f"*exp({x.rate:.6g}t)"
            if x.freq:
                s += f"*cos({x.freq:.6g}t{x.phase:+.6g})"
            parts.append(s)
        return " + ".join(parts)


def _lift(x) -> ExpPolyExpr:
    if isinstance(x, ExpPolyExpr):
        return x
    return ExpPolyExpr.const(float(x))


@dataclass(frozen=True)
class Ratio:
    num: ExpPolyExpr
    den: ExpPolyExpr

    def evaluate(self, t: float) -> float:
        return self.num.evaluate(t) / self.den.evaluate(t)


class LimitTag(str, enum.Enum):
    IDENTICALLY_ZERO = "IdenticallyZero"
    TENDS_TO_ZERO = "TendsToZero"
    TENDS_TO_INFINITY = "TendsToInfinity"
    BOUNDED = "EventuallyBoundedPositive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LimitClass:
    """Asymptotic class of |q(t)| as t -> +inf.

    ``bounds`` is (C1, C2) for the bounded tag when known; ``evidence`` holds
    the dominant (rate, power) keys of numerator and denominator.
    """

    tag: LimitTag
    bounds: tuple[float, float] | None = None
    evidence: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.bounds is not None:
            if self.tag is not LimitTag.BOUNDED:
                raise ValueError("bounds only apply to the bounded class")
            lo, hi = self.bounds
            if not (0.0 < lo <= hi):
                raise ValueError(f"invalid bounds {self.bounds}")

    def __str__(self) -> str:
        if self.bounds is None:
            return str(self.tag)
        lo, hi = self.bounds
        if lo == hi:
            return f"{self.tag}(C={lo:.6g})"
        return f"{self.tag}(C1={lo:.6g}, C2={hi:.6g})"


# ---------------------------------------------------------------- envelopes

GRID = 1024
MAX_EVALS = 400_000
REL_GAP = 1e-3
#: largest denominator accepted when relating two frequencies
MAX_DENOM = 12


def _trig_arrays(terms):
    c = np.array([x.coeff for x in terms])
    w = np.array([x.freq for x in terms])
    ph = np.array([x.phase for x in terms])
    return c, w, ph


def _trig_eval(c, w, ph, ts: np.ndarray) -> np.ndarray:
    return np.cos(np.outer(ts, w) + ph) @ c


def _period(freqs: np.ndarray) -> float | None:
    """Common period of the oscillating terms, if the frequencies are
    rationally related with small denominators."""
    pos = np.unique(freqs[freqs > 0.0])
    if pos.size == 0:
        return None
    base = float(pos.min())
    denom = 1
    for r in pos / base:
        f = Fraction(float(r)).limit_denominator(MAX_DENOM)
        if abs(float(f) - r) > 1e-9 * max(1.0, r):
            return None
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    return 2.0 * math.pi * denom / base


def trig_min(terms, sign: float = 1.0) -> float:
    """Lower bound on min_t sign*sum(terms) for a trig polynomial.

    The bound is verified whenever it is positive.  A non-positive return is
    the smallest sampled value, which only shows the minimum is not positive.

    Branch and bound from a GRID-point start: on an interval of width h the
    function is at least min(endpoint values) - L2 h^2 / 8 with
    L2 = sum |c| w^2.  Intervals are split until the bound is positive or the
    best sample shows the minimum is not positive.
    """
    c, w, ph = _trig_arrays(terms)
    c = sign * c
    if np.all(w == 0.0):
        return float(c.sum())
    period = _period(w)
    const = float(c[w == 0.0].sum())
    osc = float(np.abs(c[w != 0.0]).sum())
    if period is None:
        return const - osc
    l2 = float(np.sum(np.abs(c) * w * w))
    ts = np.linspace(0.0, period, GRID + 1)
    fs = _trig_eval(c, w, ph, ts)
    best = float(fs.min())
    if best <= 0.0:
        return best
    h0 = period / GRID
    heap = []
    for i in range(GRID):
        lb = min(fs[i], fs[i + 1]) - l2 * h0 * h0 / 8.0
        heapq.heappush(heap, (lb, ts[i], ts[i + 1], fs[i], fs[i + 1]))
    evals = GRID + 1
    while heap:
        lb, a, b, fa, fb = heap[0]
        if lb > 0.0 and (lb >= (1.0 - REL_GAP) * best or evals >= MAX_EVALS):
            return lb
        if evals >= MAX_EVALS:
            return lb
        heapq.heappop(heap)
        m = 0.5 * (a + b)
        fm = float(_trig_eval(c, w, ph, np.array([m]))[0])
        evals += 1
        best = min(best, fm)
        if best <= 0.0:
            return best
        h = 0.5 * (b - a)
        heapq.heappush(heap, (min(fa, fm) - l2 * h * h / 8.0, a, m, fa, fm))
        heapq.heappush(heap, (min(fm, fb) - l2 * h * h / 8.0, m, b, fm, fb))
    return best


def _abs_bounds(terms) -> tuple[float, float]:
    """(lower, upper) bounds on |sum(terms)| over all t; lower <= 0 means it may vanish."""
    upper = float(sum(abs(x.coeff) for x in terms))
    if all(x.freq == 0.0 for x in terms):
        v = abs(sum(x.coeff for x in terms))
        return v, v
    lo_pos = trig_min(terms, 1.0)
    if lo_pos > 0.0:
        return lo_pos, upper
    lo_neg = trig_min(terms, -1.0)
    return (lo_neg if lo_neg > 0.0 else min(lo_pos, lo_neg)), upper


def _cmp_keys(k1: tuple[float, int], k2: tuple[float, int]) -> int:
    (r1, p1), (r2, p2) = k1, k2
    if not _close(r1, r2):
        return 1 if r1 > r2 else -1
    return (p1 > p2) - (p1 < p2)


def classify_limit(num, den: ExpPolyExpr | None = None) -> LimitClass:
    """Class of |num/den| as t -> +inf.

    Accepts a Ratio or a (num, den) pair.  Raises ZeroDenominator for an
    empty denominator and UnclassifiableLimit when a dominant oscillating
    factor is not bounded away from zero.
    """
    if den is None:
        num, den = num.num, num.den
    if den.is_zero:
        raise ZeroDenominator("denominator is identically zero")
    if num.is_zero:
        return LimitClass(LimitTag.IDENTICALLY_ZERO)
    kn, kd = num.dominant_key(), den.dominant_key()
    ev = (kn, kd)
    d_lo, d_hi = _abs_bounds(den.dominant_terms())
    if d_lo <= 0.0:
        raise UnclassifiableLimit("dominant denominator terms vanish periodically")
    order = _cmp_keys(kn, kd)
    if order < 0:
        return LimitClass(LimitTag.TENDS_TO_ZERO, None, ev)
    n_lo, n_hi = _abs_bounds(num.dominant_terms())
    if n_lo <= 0.0:
        raise UnclassifiableLimit("dominant numerator terms vanish periodically")
    if order > 0:
        return LimitClass(LimitTag.TENDS_TO_INFINITY, None, ev)
    if n_lo == n_hi and d_lo == d_hi:
        c = n_lo / d_lo
        return LimitClass(LimitTag.BOUNDED, (c, c), ev)
    return LimitClass(LimitTag.BOUNDED, (n_lo / d_hi, n_hi / d_lo), ev)


__all__ = [
    "ExpPolyTerm",
    "ExpPolyExpr",
    "Ratio",
    "LimitTag",
    "LimitClass",
    "classify_limit",
    "trig_min",
]

"""Fixed-size (2x2 and 3x3) real linear algebra in closed form.

Matrices and vectors are plain ``numpy`` float arrays; the helpers here
validate shape and finiteness and never fall back to iterative solvers.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, SingularMatrix

#: Single relative tolerance used for equality decisions.
EPS = 1e-9
#: Relative tolerance for a vanishing polynomial discriminant.
DISC_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
        raise DimensionError(f"expected a 2x2 or 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(v, dim: int | None = None) -> np.ndarray:
    x = np.array(v, dtype=float).reshape(-1)
    if x.shape[0] not in (2, 3) or (dim is not None and x.shape[0] != dim):
        raise DimensionError(f"expected a vector of length {dim or '2 or 3'}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector components must be finite")
    return x


def scale_of(a: np.ndarray) -> float:
    """``max(1, ||A||_inf)``, the reference magnitude for tolerances."""
    return max(1.0, float(np.max(np.sum(np.abs(a), axis=1))))


def determinant(a) -> float:
    a = np.asarray(a, dtype=float)
    if a.shape == (2, 2):
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    if a.shape == (3, 3):
        return float(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    raise DimensionError(f"determinant of shape {a.shape}")


def cross(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (3,) or b.shape != (3,):
        raise DimensionError("cross product needs two 3-vectors")
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def triple_product(a, b, c) -> float:
    """(a x b) . c"""
    return float(np.dot(cross(a, b), np.asarray(c, dtype=float)))


def adjugate(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape == (2, 2):
        return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = a[np.ix_(rows, cols)]
            cof[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return cof.T


def inverse(p) -> np.ndarray:
    """Inverse through the adjugate. Raises SingularMatrix for |det| below tolerance."""
    p = as_matrix(p)
    det = determinant(p)
    n = p.shape[0]
    if abs(det) <= EPS * scale_of(p) ** n:
        raise SingularMatrix(f"determinant {det:.3e} is numerically zero")
    return adjugate(p) / det


def char_poly(a) -> list[float]:
    """Monic characteristic polynomial coefficients, highest degree first."""
    a = np.asarray(a, dtype=float)
    tr = float(np.trace(a))
    if a.shape == (2, 2):
        return [1.0, -tr, determinant(a)]
    minors = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    return [1.0, -tr, float(minors), -determinant(a)]


def solve_quadratic(b: float, c: float) -> list[complex]:
    """Roots of x^2 + b x + c, larger real part first."""
    disc = b * b - 4.0 * c
    if abs(disc) <= DISC_TOL * max(b * b, 4.0 * abs(c)):
        return [complex(-b / 2.0)] * 2
    if disc > 0:
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        r1 = q
        r2 = c / q if q != 0.0 else -b - q
        return [complex(max(r1, r2)), complex(min(r1, r2))]
    im = math.sqrt(-disc) / 2.0
    return [complex(-b / 2.0, im), complex(-b / 2.0, -im)]


def _polish(coeffs, x: float, steps: int = 2) -> float:
    c2, c1, c0 = coeffs
    for _ in range(steps):
        f = ((x + c2) * x + c1) * x + c0
        df = (3.0 * x + 2.0 * c2) * x + c1
        if df == 0.0:
            break
        step = f / df
        if not math.isfinite(step):
            break
        x -= step
    return x


def solve_cubic(c2: float, c1: float, c0: float, scale: float = 1.0) -> list[complex]:
    """Roots of x^3 + c2 x^2 + c1 x + c0.

    Trigonometric form for three distinct real roots, Cardano for one real
    root, and exact repeated-root formulas when the discriminant vanishes
    to within DISC_TOL.
    """
    shift = -c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    s = max(scale, abs(c2) / 3.0, math.sqrt(abs(c1)), abs(c0) ** (1.0 / 3.0))

    if abs(p) <= DISC_TOL * s * s and abs(q) <= DISC_TOL * s ** 3:
        return [complex(shift)] * 3

    disc = 4.0 * p ** 3 + 27.0 * q * q
    if abs(disc) <= DISC_TOL * (4.0 * abs(p) ** 3 + 27.0 * q * q):
        simple = 3.0 * q / p + shift
        double = -1.5 * q / p + shift
        return [complex(r) for r in sorted([simple, double, double], reverse=True)]

    if disc < 0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
        theta = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]
        # polish only the most isolated root; Newton would pull a close pair
        # together, so the other two come from the deflated quadratic
        gap = [min(abs(r - o) for o in roots if o is not r) for r in roots]
        r = _polish((c2, c1, c0), roots[int(np.argmax(gap))])
        beta = c2 + r
        rest = solve_quadratic(beta, c1 + r * beta)
        if rest[0].imag != 0.0:
            rest = [complex(-beta / 2.0)] * 2
        return [complex(x) for x in sorted([r, rest[0].real, rest[1].real], reverse=True)]

    d = q * q / 4.0 + p ** 3 / 27.0
    big = -q / 2.0 - math.copysign(math.sqrt(d), q)
    u = math.copysign(abs(big) ** (1.0 / 3.0), big)
    v = -p / (3.0 * u) if u != 0.0 else 0.0
    real = _polish((c2, c1, c0), u + v + shift)
    beta = c2 + real
    gamma = c1 + real * beta
    rest = solve_quadratic(beta, gamma)
    if rest[0].imag == 0.0:
        # deflation lost the pair; fall back to the Cardano expression
        im = math.sqrt(3.0) / 2.0 * abs(u - v)
        re = -(u + v) / 2.0 + shift
        rest = [complex(re, im), complex(re, -im)]
    return [complex(real)] + rest


def eigenvalues(a) -> list[complex]:
    """Eigenvalues with multiplicity: real roots (descending), then conjugate
    pairs with the positive imaginary part first."""
    a = as_matrix(a)
    coeffs = char_poly(a)
    if a.shape[0] == 2:
        roots = solve_quadratic(coeffs[1], coeffs[2])
    else:
        roots = solve_cubic(coeffs[1], coeffs[2], coeffs[3], scale_of(a))
    reals = sorted((r for r in roots if r.imag == 0.0), key=lambda z: -z.real)
    pairs = sorted((r for r in roots if r.imag > 0.0), key=lambda z: -z.real)
    out = list(reals)
    for z in pairs:
        out += [z, z.conjugate()]
    return out


def singular_values(p) -> np.ndarray:
    """Singular values, descending, from the eigenvalues of P^T P."""
    p = as_matrix(p)
    # normalise so the tolerances of the root solvers see an O(1) matrix
    m = float(np.abs(p).max())
    if m == 0.0:
        return np.zeros(p.shape[0])
    p = p / m
    g = p.T @ p
    n = p.shape[0]
    coeffs = char_poly(g)
    det2 = determinant(p) ** 2
    if n == 2:
        lam = solve_quadratic(coeffs[1], det2)
    else:
        top = max(z.real for z in solve_cubic(coeffs[1], coeffs[2], coeffs[3], scale_of(g)))
        top = _polish(coeffs[1:], top)
        # deflate: the two small eigenvalues of P^T P are squares of small
        # singular values, so their gap is tiny and the cubic would merge them
        lam = [complex(top)] + solve_quadratic(-(float(np.trace(g)) - top), det2 / top if top > 0 else 0.0)
    sv = np.sort(np.sqrt(np.maximum([z.real for z in lam], 0.0)))[::-1]
    # smallest one is better conditioned through the determinant
    lead = float(np.prod(sv[:-1]))
    if lead > 0.0:
        sv[-1] = min(sv[-2], abs(determinant(p)) / lead)
    return sv * m


__all__ = [
    "EPS",
    "as_matrix",
    "as_vector",
    "scale_of",
    "determinant",
    "cross",
    "triple_product",
    "adjugate",
    "inverse",
    "char_poly",
    "solve_quadratic",
    "solve_cubic",
    "eigenvalues",
    "singular_values",
]

"""Stability verdicts from curvature and torsion limit classes.

The geometric criteria are sufficient conditions only; when none fires the
verdict is ``UndeterminedByGeometry`` and the eigenvalue oracle is reported
alongside, never substituted.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import AsymptoticReport, canonical_initial, exppoly_report, table_lookup
from .errors import ClassificationMismatch, IllConditionedTransform
from .exppoly import LimitClass, LimitTag
from .jordan import RealJordanForm, classify, is_simple_elementary_factor
from .linalg import EPS, as_matrix, determinant, eigenvalues, scale_of
from .tables import PRINTED_DISCREPANCY


class Verdict(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    UNDETERMINED = "UndeterminedByGeometry"

    def __str__(self) -> str:
        return self.value


class OracleVerdict(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    STABLE_NOT_ASYMPTOTIC = "StableNotAsymptotic"
    UNSTABLE = "Unstable"

    def __str__(self) -> str:
        return self.value


# evidence clauses
PLANAR_KAPPA_INFINITE = "planar: kappa -> +inf implies asymptotically stable"
PLANAR_KAPPA_NONZERO = "planar: kappa does not tend to 0 implies stable"
TORSION_NONZERO = "spatial: |tau| does not tend to 0 implies asymptotically stable"
INVERTIBLE_KAPPA_INFINITE = "spatial: det A != 0 and kappa -> +inf implies asymptotically stable"
KAPPA_NONZERO = "spatial: kappa does not tend to 0 implies stable"
NO_CLAUSE = "no geometric criterion applies"


@dataclass(frozen=True)
class OracleResult:
    verdict: OracleVerdict
    marginal: bool = False


def oracle(a) -> OracleResult:
    """Eigenvalue criterion.  ``marginal`` flags eigenvalues whose real part
    lies within EPS * scale of zero and was treated as zero."""
    a = as_matrix(a)
    tol = EPS * scale_of(a)
    eig = eigenvalues(a)
    if any(z.real > tol for z in eig):
        return OracleResult(OracleVerdict.UNSTABLE)
    imaginary = [z for z in eig if abs(z.real) <= tol]
    if not imaginary:
        return OracleResult(OracleVerdict.ASYMPTOTICALLY_STABLE)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedTransform)
        form = classify(a)
    for z in imaginary:
        if not is_simple_elementary_factor(form, complex(0.0, z.imag)):
            return OracleResult(OracleVerdict.UNSTABLE, True)
    return OracleResult(OracleVerdict.STABLE_NOT_ASYMPTOTIC, True)


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    evidence: str
    kappa_class: LimitClass
    tau_class: LimitClass | None = None
    oracle: OracleResult | None = None
    report: AsymptoticReport | None = None
    notes: tuple[str, ...] = ()
    #: every clause whose hypothesis holds, ``evidence`` being the first
    clauses: tuple[str, ...] = ()

    @property
    def agrees_with_oracle(self) -> bool | None:
        """False when the geometric verdict claims more than the oracle allows."""
        if self.oracle is None:
            return None
        o = self.oracle.verdict
        if self.verdict is Verdict.ASYMPTOTICALLY_STABLE:
            return o is OracleVerdict.ASYMPTOTICALLY_STABLE
        if self.verdict is Verdict.STABLE:
            return o is not OracleVerdict.UNSTABLE
        return True


_NONZERO = (LimitTag.TENDS_TO_INFINITY, LimitTag.BOUNDED)


def geometric_verdict_2d(report: AsymptoticReport) -> StabilityVerdict:
    k = report.kappa_class
    if k.tag is LimitTag.TENDS_TO_INFINITY:
        return StabilityVerdict(
            Verdict.ASYMPTOTICALLY_STABLE, PLANAR_KAPPA_INFINITE, k, report=report, clauses=(PLANAR_KAPPA_INFINITE,)
        )
    if k.tag is LimitTag.BOUNDED:
        return StabilityVerdict(Verdict.STABLE, PLANAR_KAPPA_NONZERO, k, report=report, clauses=(PLANAR_KAPPA_NONZERO,))
    return StabilityVerdict(Verdict.UNDETERMINED, NO_CLAUSE, k, report=report)


def geometric_verdict_3d(report: AsymptoticReport, det_a: float, scale: float = 1.0) -> StabilityVerdict:
    """Clauses in order: torsion, invertible with unbounded curvature, curvature
    not tending to zero.  The last one includes kappa -> +inf for singular A."""
    k, t = report.kappa_class, report.tau_class
    fired = []
    if t is not None and t.tag in _NONZERO:
        fired.append(TORSION_NONZERO)
    if k.tag is LimitTag.TENDS_TO_INFINITY and abs(det_a) > EPS * scale**3:
        fired.append(INVERTIBLE_KAPPA_INFINITE)
    if k.tag in _NONZERO:
        fired.append(KAPPA_NONZERO)
    if not fired:
        return StabilityVerdict(Verdict.UNDETERMINED, NO_CLAUSE, k, t, report=report)
    verdict = Verdict.STABLE if fired[0] == KAPPA_NONZERO else Verdict.ASYMPTOTICALLY_STABLE
    return StabilityVerdict(verdict, fired[0], k, t, report=report, clauses=tuple(fired))


def sample_canonical_initials(dim: int, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """n points uniform on the unit sphere, none within EPS of a coordinate hyperplane."""
    out: list[np.ndarray] = []
    while len(out) < n:
        v = rng.normal(size=dim)
        v /= np.linalg.norm(v)
        if np.all(np.abs(v) > EPS):
            out.append(v)
    return out


def checked_report(form: RealJordanForm, v0, actual_bounds: bool = True) -> AsymptoticReport:
    """Exp-polynomial classes cross-checked against the table lookup.

    Disagreement raises ClassificationMismatch unless the table row carries
    a printed-discrepancy note, in which case the exp-polynomial class wins
    and the note is kept.
    """
    rep = exppoly_report(form, v0, actual_bounds)
    pattern, k_tab, t_tab, notes = table_lookup(form)
    bad = []
    if rep.kappa_class.tag is not k_tab:
        bad.append(f"kappa: table {k_tab}, closed form {rep.kappa_class.tag}")
    if rep.tau_class is not None and rep.tau_class.tag is not t_tab:
        bad.append(f"tau: table {t_tab}, closed form {rep.tau_class.tag}")
    explained = any(n.startswith(PRINTED_DISCREPANCY) for n in notes)
    if bad and not explained:
        raise ClassificationMismatch(f"{form.case} {pattern}: " + "; ".join(bad))
    return replace(rep, row=pattern, notes=tuple(notes) + tuple(bad))


def analyze(
    a,
    r0=None,
    seed: int = 0,
    n_samples: int = 32,
    with_oracle: bool = True,
) -> StabilityVerdict:
    """Full pipeline: Jordan form, limit classes, geometric verdict, oracle.

    With ``r0`` the given initial value is used (NonGenericInitialValue if it
    lies on a canonical coordinate hyperplane).  Without it ``n_samples``
    generic canonical initial values are drawn and must agree on every tag.
    """
    a = as_matrix(a)
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditionedTransform)
        form = classify(a)
    if caught or form.ill_conditioned:
        notes.append("ill-conditioned Jordan transform")

    if r0 is not None:
        reports = [checked_report(form, canonical_initial(form, r0))]
    else:
        rng = np.random.default_rng(seed)
        samples = sample_canonical_initials(form.dim, n_samples, rng)
        # only the first sample is reported, so only it needs curve bounds
        reports = [checked_report(form, v0, i == 0) for i, v0 in enumerate(samples)]

    rep = reports[0]
    notes += list(rep.notes)
    tags = {(r.kappa_class.tag, r.tau_class.tag if r.tau_class else None) for r in reports}
    if len(tags) > 1:
        notes.append(f"initial values disagree on limit classes: {sorted(map(str, tags))}")
        out = StabilityVerdict(Verdict.UNDETERMINED, NO_CLAUSE, rep.kappa_class, rep.tau_class, report=rep)
    elif form.dim == 2:
        out = geometric_verdict_2d(rep)
    else:
        out = geometric_verdict_3d(rep, determinant(a), scale_of(a))
    orc = oracle(a) if with_oracle else None
    if orc is not None and orc.marginal:
        notes.append("eigenvalue on the imaginary axis within tolerance")
    return replace(out, oracle=orc, notes=tuple(notes))


__all__ = [
    "Verdict",
    "OracleVerdict",
    "OracleResult",
    "oracle",
    "StabilityVerdict",
    "geometric_verdict_2d",
    "geometric_verdict_3d",
    "sample_canonical_initials",
    "checked_report",
    "analyze",
]

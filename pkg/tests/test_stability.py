import warnings

import numpy as np
import pytest

from curvestab.asymptotics import AsymptoticReport
from curvestab.errors import IllConditionedTransform, NonGenericInitialValue
from curvestab.exppoly import LimitClass, LimitTag
from curvestab.jordan import CaseTag, canonical_matrix
from curvestab.stability import (
    INVERTIBLE_KAPPA_INFINITE,
    KAPPA_NONZERO,
    NO_CLAUSE,
    PLANAR_KAPPA_INFINITE,
    TORSION_NONZERO,
    OracleVerdict,
    Verdict,
    analyze,
    geometric_verdict_2d,
    geometric_verdict_3d,
    oracle,
    sample_canonical_initials,
)
from systems import EXAMPLES, random_matrix

AS, ST, UN, UD = Verdict.ASYMPTOTICALLY_STABLE, Verdict.STABLE, Verdict.UNSTABLE, Verdict.UNDETERMINED


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedTransform)
        yield


def report(k, t=None):
    return AsymptoticReport(LimitClass(k, (1.0, 2.0) if k is LimitTag.BOUNDED else None),
                            None if t is None else LimitClass(t, (1.0, 2.0) if t is LimitTag.BOUNDED else None))


@pytest.mark.parametrize(
    "a, expected",
    [
        (np.diag([-1.0, -2.0, -3.0]), OracleVerdict.ASYMPTOTICALLY_STABLE),
        (EXAMPLES[1], OracleVerdict.STABLE_NOT_ASYMPTOTIC),
        (canonical_matrix(CaseTag.D2_BLOCK, {"lam": 0.0}), OracleVerdict.UNSTABLE),
        (np.zeros((3, 3)), OracleVerdict.STABLE_NOT_ASYMPTOTIC),
        (np.diag([1.0, -1.0]), OracleVerdict.UNSTABLE),
        (canonical_matrix(CaseTag.D3_BLOCK2, {"l1": 0.0, "l2": -1.0}), OracleVerdict.UNSTABLE),
        (canonical_matrix(CaseTag.D3_COMPLEX, {"a": 0.0, "b": 1.0, "l3": -1.0}), OracleVerdict.STABLE_NOT_ASYMPTOTIC),
    ],
)
def test_oracle_examples(a, expected):
    assert oracle(a).verdict is expected


def test_planar_clauses():
    assert geometric_verdict_2d(report(LimitTag.TENDS_TO_INFINITY)).verdict is AS
    assert geometric_verdict_2d(report(LimitTag.BOUNDED)).verdict is ST
    for k in (LimitTag.TENDS_TO_ZERO, LimitTag.IDENTICALLY_ZERO):
        v = geometric_verdict_2d(report(k))
        assert v.verdict is UD and v.evidence == NO_CLAUSE and v.clauses == ()


def test_spatial_clause_order():
    v = geometric_verdict_3d(report(LimitTag.TENDS_TO_INFINITY, LimitTag.BOUNDED), det_a=-5.0)
    assert v.verdict is AS and v.clauses == (TORSION_NONZERO, INVERTIBLE_KAPPA_INFINITE, KAPPA_NONZERO)
    v = geometric_verdict_3d(report(LimitTag.TENDS_TO_INFINITY, LimitTag.TENDS_TO_ZERO), det_a=0.0)
    assert v.verdict is ST and v.evidence == KAPPA_NONZERO
    v = geometric_verdict_3d(report(LimitTag.TENDS_TO_INFINITY, LimitTag.TENDS_TO_ZERO), det_a=2.0)
    assert v.verdict is AS and v.evidence == INVERTIBLE_KAPPA_INFINITE
    v = geometric_verdict_3d(report(LimitTag.TENDS_TO_ZERO, LimitTag.TENDS_TO_INFINITY), det_a=2.0)
    assert v.verdict is AS and v.evidence == TORSION_NONZERO
    v = geometric_verdict_3d(report(LimitTag.TENDS_TO_ZERO, LimitTag.IDENTICALLY_ZERO), det_a=2.0)
    assert v.verdict is UD


def test_undetermined_for_unstable_diagonal():
    v = analyze(np.diag([1.0, 2.0]))
    assert v.verdict is UD and v.oracle.verdict is OracleVerdict.UNSTABLE
    assert v.agrees_with_oracle


def test_zero_matrix():
    v = analyze(np.zeros((2, 2)))
    assert v.kappa_class.tag is LimitTag.IDENTICALLY_ZERO
    assert v.verdict is UD and v.oracle.verdict is OracleVerdict.STABLE_NOT_ASYMPTOTIC


def test_examples():
    v = analyze(EXAMPLES[1])
    assert v.verdict is ST and v.oracle.verdict is OracleVerdict.STABLE_NOT_ASYMPTOTIC
    v = analyze(EXAMPLES[2])
    assert v.verdict is AS and v.evidence == PLANAR_KAPPA_INFINITE
    assert analyze(EXAMPLES[3], r0=[1.0, 1.0, 1.0]).verdict is ST
    v = analyze(EXAMPLES[4])
    assert v.verdict is AS and INVERTIBLE_KAPPA_INFINITE in v.clauses
    v = analyze(EXAMPLES[5], r0=[2.0, 1.0, 1.0])
    assert v.verdict is AS and v.evidence == TORSION_NONZERO
    assert v.tau_class.tag is LimitTag.TENDS_TO_INFINITY


def test_nongeneric_plane_of_example5():
    # the plane -3x + z = 0 is a canonical coordinate hyperplane
    for r0 in ([1.0, 0.0, 3.0], [1.0, 5.0, 3.0], [-2.0, 1.0, -6.0]):
        with pytest.raises(NonGenericInitialValue):
            analyze(EXAMPLES[5], r0=r0)


def test_sampled_initials_are_generic():
    rng = np.random.default_rng(0)
    for v in sample_canonical_initials(3, 100, rng):
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert np.all(np.abs(v) > 1e-12)


def test_deterministic_for_seed():
    a = np.array([[0.5, -2.0, 1.0], [1.0, -1.0, 0.0], [0.0, 1.0, -2.0]])
    assert analyze(a, seed=7) == analyze(a, seed=7)


def test_soundness_and_non_vacuity():
    """Never claims more than the oracle allows, and every verdict occurs."""
    rng = np.random.default_rng(99)
    seen = set()
    for _ in range(400):
        v = analyze(random_matrix(rng))
        assert v.agrees_with_oracle, v
        seen.add(v.verdict)
    assert {AS, ST, UD} <= seen


def test_no_oracle():
    v = analyze(EXAMPLES[2], with_oracle=False)
    assert v.oracle is None and v.agrees_with_oracle is None

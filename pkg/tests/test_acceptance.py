"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line."""

import math
import time
import warnings

import numpy as np
import pytest

from curvestab.asymptotics import exppoly_report, numeric_limit_probe, table_lookup
from curvestab.equivalence import verify_sandwich
from curvestab.errors import IllConditionedTransform, NonGenericInitialValue
from curvestab.exppoly import LimitTag
from curvestab.flow import expm
from curvestab.geometry import geometry_at, log_geometry_of
from curvestab.jordan import classify
from curvestab.linalg import determinant
from curvestab.stability import (
    INVERTIBLE_KAPPA_INFINITE,
    TORSION_NONZERO,
    OracleVerdict,
    Verdict,
    analyze,
    sample_canonical_initials,
)
from curvestab.tables import all_subrows
from systems import EXAMPLES, S3, generic_initial, random_matrix, sandwich_instance, subrow_examples
from test_flow import fd_errors

INF, C = LimitTag.TENDS_TO_INFINITY, LimitTag.BOUNDED


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedTransform)
        yield


@pytest.fixture
def verdict(capsys):
    def emit(name: str, failures: list, summary: str):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\n{status} {name}: {summary}")
            for f in failures[:10]:
                print(f"    {f}")
        assert not failures, failures[:10]

    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _example1(bad):
    for t in (0.0, math.pi / 4, 1.0):
        k2 = geometry_at(EXAMPLES[1], [1.0, 1.0], t).kappa ** 2
        ref = 1369 / (2 * (703 + 702 * math.cos(2 * t) - 6 * math.sin(2 * t)) ** 3)
        if abs(k2 - ref) > 1e-9 * ref:
            bad.append(f"ex1 kappa^2({t}) = {k2}, expected {ref}")
    v = analyze(EXAMPLES[1])
    if v.kappa_class.tag is not C:
        bad.append(f"ex1 class {v.kappa_class}")
    if v.verdict is not Verdict.STABLE:
        bad.append(f"ex1 verdict {v.verdict}")
    if v.oracle.verdict is not OracleVerdict.STABLE_NOT_ASYMPTOTIC:
        bad.append(f"ex1 oracle {v.oracle.verdict}")


def _example2(bad):
    for t in (0.0, 1.0, 2.0):
        k2 = geometry_at(EXAMPLES[2], [1.0, 1.0], t).kappa ** 2
        ref = math.exp(8 * t) / (36 * (5 - 6 * math.exp(t) + 2 * math.exp(2 * t)) ** 3)
        if abs(k2 - ref) > 1e-9 * ref:
            bad.append(f"ex2 kappa^2({t}) = {k2}, expected {ref}")
    v = analyze(EXAMPLES[2])
    if v.kappa_class.tag is not INF or v.verdict is not Verdict.ASYMPTOTICALLY_STABLE:
        bad.append(f"ex2 {v.kappa_class} {v.verdict}")


def _example3(bad):
    x, y, z = 1.0, 1.0, 1.0
    ref = 16 * abs(y + S3 * z) / (2 * x + 3 * y - S3 * z) ** 2
    k = log_geometry_of(EXAMPLES[3], [x, y, z], 20.0).kappa
    if abs(k - ref) > 0.01 * ref:
        bad.append(f"ex3 kappa(20) = {k}, expected {ref}")
    v = analyze(EXAMPLES[3], r0=[x, y, z])
    if v.kappa_class.tag is not C or v.verdict is not Verdict.STABLE:
        bad.append(f"ex3 {v.kappa_class} {v.verdict}")


def _example4(bad):
    d = determinant(EXAMPLES[4])
    if d != -5.0:
        bad.append(f"ex4 det {d!r}")
    form = classify(EXAMPLES[4])
    for v0 in sample_canonical_initials(3, 32, np.random.default_rng(4)):
        tag = exppoly_report(form, v0, actual_bounds=False).kappa_class.tag
        if tag is not INF:
            bad.append(f"ex4 kappa class {tag} for v0 {v0}")
    v = analyze(EXAMPLES[4])
    if v.verdict is not Verdict.ASYMPTOTICALLY_STABLE or INVERTIBLE_KAPPA_INFINITE not in v.clauses:
        bad.append(f"ex4 {v.verdict} clauses {v.clauses}")


def _example5(bad):
    rng = np.random.default_rng(5)
    for _ in range(8):
        r0 = generic_initial(EXAMPLES[5], rng)
        c = analyze(EXAMPLES[5], r0=r0).tau_class
        if c.tag is not INF:
            bad.append(f"ex5 tau class {c} for r0 {r0}")
    v = analyze(EXAMPLES[5])
    if v.verdict is not Verdict.ASYMPTOTICALLY_STABLE or v.evidence != TORSION_NONZERO:
        bad.append(f"ex5 {v.verdict} via {v.evidence}")
    try:
        analyze(EXAMPLES[5], r0=[1.0, 2.0, 3.0])
        bad.append("ex5 no NonGenericInitialValue on -3x + z = 0")
    except NonGenericInitialValue:
        pass


def test_criterion_1_examples(verdict):
    bad = []
    times = {}
    for n, fn in ((1, _example1), (2, _example2), (3, _example3), (4, _example4), (5, _example5)):
        _, times[n] = _timed(lambda: fn(bad))
        if times[n] >= 1.0:
            bad.append(f"example {n} took {times[n]:.2f} s")
    verdict("criterion 1 (examples)", bad, "max runtime %.2f s" % max(times.values()))


def test_criterion_2_table_coverage(verdict):
    """table_classify, classify_limit and numeric_limit_probe agree on every sub-row."""
    t0 = time.perf_counter()
    bad = []
    covered = set()
    rng = np.random.default_rng(2)
    for seed in (0, 1):
        for key, mats in subrow_examples(seed).items():
            for a in mats[:2]:
                form = classify(a)
                r0 = generic_initial(a, rng)
                quantity = key[2]
                _, k_tab, t_tab, notes = table_lookup(form)
                tab = k_tab if quantity == "kappa" else t_tab
                rep = exppoly_report(form, form.P @ r0, actual_bounds=False)
                closed = (rep.kappa_class if quantity == "kappa" else rep.tau_class).tag
                try:
                    probe = numeric_limit_probe(a, r0, quantity, form=form).tag
                except Exception as e:  # an inconclusive probe is a disagreement
                    probe = type(e).__name__
                if not (tab is closed is probe):
                    bad.append(f"{key}: table {tab}, closed form {closed}, probe {probe}, params {form.params}")
                covered.add(key)
    missing = set(all_subrows()) - covered
    bad += [f"sub-row not generated: {k}" for k in sorted(missing, key=str)]
    elapsed = time.perf_counter() - t0
    if elapsed > 60:
        bad.append(f"runtime {elapsed:.1f} s over the 60 s budget")
    verdict(
        "criterion 2 (table coverage)",
        sorted(set(bad)),
        f"{len(covered)}/{len(all_subrows())} sub-rows in {elapsed:.1f} s",
    )


def test_criterion_3_soundness_sweep(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    bad = []
    claims = 0
    for i in range(10_000):
        a = random_matrix(rng)
        v = analyze(a)
        if v.verdict in (Verdict.ASYMPTOTICALLY_STABLE, Verdict.STABLE):
            claims += 1
        if v.agrees_with_oracle is False:
            bad.append(f"#{i}: {v.verdict} vs oracle {v.oracle.verdict} for {a.tolist()}")
    elapsed = time.perf_counter() - t0
    if elapsed > 120:
        bad.append(f"runtime {elapsed:.1f} s over the 120 s budget")
    verdict("criterion 3 (soundness sweep)", bad, f"10000 matrices, {claims} stability claims, {elapsed:.1f} s")


def test_criterion_4_sandwich(verdict):
    rng = np.random.default_rng(4)
    bad = []
    checked = signs = 0
    for i in range(1000):
        a, p, r0, t = sandwich_instance(rng)
        rep = verify_sandwich(a, p, r0, [t], tol=1e-9)
        checked += rep.checked
        signs += math.isfinite(rep.worst_margin["sign"])
        if not rep.passed:
            bad.append(f"#{i}: {rep.violations}")
    if checked < 900:
        bad.append(f"only {checked} instances were evaluable")
    verdict("criterion 4 (sandwich bounds)", bad, f"{checked} evaluated instances, {signs} with a resolved torsion sign")


def test_criterion_5_hygiene(verdict):
    rng = np.random.default_rng(5)
    bad = []
    worst = 0.0
    for i in range(500):
        n = int(rng.integers(2, 4))
        a = rng.uniform(-2, 2, size=(n, n))
        r0 = rng.normal(size=n)
        t = float(rng.uniform(0, 2))
        e = max(fd_errors(a, r0, t, h=1e-5))
        worst = max(worst, e)
        if e > 1e-5:
            bad.append(f"fd #{i}: relative error {e:.2e}")
    for i in range(500):
        n = int(rng.integers(2, 4))
        a = rng.uniform(-2, 2, size=(n, n))
        s, t = rng.uniform(-2, 2, size=2)
        form = classify(a)
        lhs = expm(a, s, form) @ expm(a, t, form)
        rhs = expm(a, s + t, form)
        if np.abs(lhs - rhs).max() > 1e-8 * max(1.0, np.abs(rhs).max()):
            bad.append(f"semigroup #{i}")
        det, ref = np.linalg.det(expm(a, t, form)), math.exp(t * np.trace(a))
        if abs(det - ref) > 1e-8 * ref:
            bad.append(f"liouville #{i}: {det} vs {ref}")
    verdict("criterion 5 (numerical hygiene)", bad, f"worst finite-difference error {worst:.2e}")


def test_criterion_6_initial_value_independence(verdict):
    rng = np.random.default_rng(6)
    bad = []
    for i in range(200):
        a = random_matrix(rng)
        form = classify(a)
        tags = set()
        for v0 in sample_canonical_initials(form.dim, 32, rng):
            rep = exppoly_report(form, v0, actual_bounds=False)
            tags.add((rep.kappa_class.tag, rep.tau_class.tag if rep.tau_class else None))
        if len(tags) != 1:
            bad.append(f"#{i} {form.case} {form.params}: {tags}")
    verdict("criterion 6 (initial-value independence)", bad, "200 systems x 32 initial values")

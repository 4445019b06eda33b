"""Limit classes of curvature and torsion per eigenvalue pattern.

Each Jordan case maps to a list of rows ``(pattern, predicate, kappa, tau)``
transcribed literally, including the sub-cases decided by the sign of a
linear combination of eigenvalues.  Nothing here is derived from the
exp-polynomial formulas; the two are cross-checked against each other.

A row outcome is either a LimitTag or a ``Split``: the tag chosen by the
sign (+, 0, -) of an expression in the eigenvalue parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .exppoly import LimitTag
from .jordan import CaseTag

Z = LimitTag.TENDS_TO_ZERO
INF = LimitTag.TENDS_TO_INFINITY
C = LimitTag.BOUNDED
O = LimitTag.IDENTICALLY_ZERO

#: Sub-case whose printed outcome disagrees with the closed-form expressions.
PRINTED_DISCREPANCY = "printed-discrepancy"


@dataclass(frozen=True)
class Split:
    label: str
    expr: Callable[[dict], float]
    pos: LimitTag
    zero: LimitTag
    neg: LimitTag
    #: note attached when the boundary (zero) branch is taken
    zero_note: str | None = None


@dataclass(frozen=True)
class Row:
    pattern: str
    predicate: Callable[[Callable[[float], int], dict], bool]
    kappa: LimitTag | Split
    tau: LimitTag | Split | None = None


def _split(label, expr, pos, zero, neg, note=None) -> Split:
    return Split(label, expr, pos, zero, neg, note)


D2_DIAG = [
    Row("0 < l2 < l1", lambda s, p: s(p["l2"]) > 0 and s(p["l1"] - p["l2"]) > 0, Z),
    Row("0 < l2 = l1", lambda s, p: s(p["l2"]) > 0 and s(p["l1"] - p["l2"]) == 0, O),
    Row("0 = l2 < l1", lambda s, p: s(p["l2"]) == 0 and s(p["l1"]) > 0, O),
    Row("l2 < 0 < l1", lambda s, p: s(p["l2"]) < 0 and s(p["l1"]) > 0, Z),
    Row("0 = l2 = l1", lambda s, p: s(p["l2"]) == 0 and s(p["l1"]) == 0, O),
    Row("l2 < 0 = l1", lambda s, p: s(p["l2"]) < 0 and s(p["l1"]) == 0, O),
    Row("l2 = l1 < 0", lambda s, p: s(p["l1"]) < 0 and s(p["l1"] - p["l2"]) == 0, O),
    Row(
        "l2 < l1 < 0",
        lambda s, p: s(p["l1"]) < 0 and s(p["l1"] - p["l2"]) > 0,
        _split("2*l1 - l2", lambda p: 2 * p["l1"] - p["l2"], Z, C, INF),
    ),
]

D2_COMPLEX = [
    Row("a > 0", lambda s, p: s(p["a"]) > 0, Z),
    Row("a = 0", lambda s, p: s(p["a"]) == 0, C),
    Row("a < 0", lambda s, p: s(p["a"]) < 0, INF),
]

D2_BLOCK = [
    Row("lam > 0", lambda s, p: s(p["lam"]) > 0, Z),
    Row("lam = 0", lambda s, p: s(p["lam"]) == 0, O),
    Row("lam < 0", lambda s, p: s(p["lam"]) < 0, INF),
]


def _d3(s, p):
    """Signs of l3, l2 - l3, l1 - l2 for ordered real eigenvalues."""
    return s(p["l3"]), s(p["l2"]), s(p["l1"]), s(p["l2"] - p["l3"]), s(p["l1"] - p["l2"])


def _pat(z3, z2, z1, gap32, gap21):
    def pred(s, p):
        return _d3(s, p) == (z3, z2, z1, gap32, gap21)

    return pred


D3_DIAG = [
    Row("0 < l3 < l2 < l1", _pat(1, 1, 1, 1, 1), Z, Z),
    Row("0 < l3 < l2 = l1", _pat(1, 1, 1, 1, 0), Z, O),
    Row("0 < l3 = l2 < l1", _pat(1, 1, 1, 0, 1), Z, O),
    Row("0 < l3 = l2 = l1", _pat(1, 1, 1, 0, 0), O, O),
    Row("0 = l3 < l2 < l1", _pat(0, 1, 1, 1, 1), Z, O),
    Row("0 = l3 < l2 = l1", _pat(0, 1, 1, 1, 0), O, O),
    Row("l3 < 0 < l2 < l1", _pat(-1, 1, 1, 1, 1), Z, Z),
    Row("l3 < 0 < l2 = l1", _pat(-1, 1, 1, 1, 0), Z, O),
    Row("0 = l3 = l2 < l1", _pat(0, 0, 1, 0, 1), O, O),
    Row("l3 < 0 = l2 < l1", _pat(-1, 0, 1, 1, 1), Z, O),
    Row("l3 < l2 < 0 < l1", _pat(-1, -1, 1, 1, 1), Z, Z),
    Row("l3 = l2 < 0 < l1", _pat(-1, -1, 1, 0, 1), Z, O),
    Row("0 = l3 = l2 = l1", _pat(0, 0, 0, 0, 0), O, O),
    Row("l3 < 0 = l2 = l1", _pat(-1, 0, 0, 1, 0), O, O),
    Row(
        "l3 < l2 < 0 = l1",
        _pat(-1, -1, 0, 1, 1),
        _split("2*l2 - l3", lambda p: 2 * p["l2"] - p["l3"], Z, C, INF),
        O,
    ),
    Row("l3 = l2 < 0 = l1", _pat(-1, -1, 0, 0, 1), O, O),
    Row(
        "l3 < l2 < l1 < 0",
        _pat(-1, -1, -1, 1, 1),
        _split("2*l1 - l2", lambda p: 2 * p["l1"] - p["l2"], Z, C, INF),
        _split("l1 + l2 - l3", lambda p: p["l1"] + p["l2"] - p["l3"], Z, C, INF),
    ),
    Row(
        "l3 < l2 = l1 < 0",
        _pat(-1, -1, -1, 1, 0),
        _split("2*l1 - l3", lambda p: 2 * p["l1"] - p["l3"], Z, C, INF),
        O,
    ),
    Row(
        "l3 = l2 < l1 < 0",
        _pat(-1, -1, -1, 0, 1),
        _split("2*l1 - l2", lambda p: 2 * p["l1"] - p["l2"], Z, C, INF),
        O,
    ),
    Row("l3 = l2 = l1 < 0", _pat(-1, -1, -1, 0, 0), O, O),
]

D3_COMPLEX = [
    Row("l3 > 0, a > 0", lambda s, p: s(p["l3"]) > 0 and s(p["a"]) > 0, Z, Z),
    Row("l3 > 0, a = 0", lambda s, p: s(p["l3"]) > 0 and s(p["a"]) == 0, Z, Z),
    Row("l3 > 0, a < 0", lambda s, p: s(p["l3"]) > 0 and s(p["a"]) < 0, Z, Z),
    Row("l3 = 0, a > 0", lambda s, p: s(p["l3"]) == 0 and s(p["a"]) > 0, Z, O),
    Row("l3 = 0, a = 0", lambda s, p: s(p["l3"]) == 0 and s(p["a"]) == 0, C, O),
    Row("l3 = 0, a < 0", lambda s, p: s(p["l3"]) == 0 and s(p["a"]) < 0, INF, O),
    Row("l3 < 0, a > 0", lambda s, p: s(p["l3"]) < 0 and s(p["a"]) > 0, Z, Z),
    Row("l3 < 0, a = 0", lambda s, p: s(p["l3"]) < 0 and s(p["a"]) == 0, C, Z),
    Row(
        "l3 < 0, a < 0",
        lambda s, p: s(p["l3"]) < 0 and s(p["a"]) < 0,
        _split("2*l3 - a", lambda p: 2 * p["l3"] - p["a"], Z, C, INF),
        _split("2*a - l3", lambda p: 2 * p["a"] - p["l3"], Z, C, INF),
    ),
]

D3_BLOCK2 = [
    Row(
        "l1, l2 > 0, l1 != l2",
        lambda s, p: s(p["l1"]) > 0 and s(p["l2"]) > 0 and s(p["l1"] - p["l2"]) != 0,
        Z,
        Z,
    ),
    Row("l1 = l2 > 0", lambda s, p: s(p["l1"]) > 0 and s(p["l1"] - p["l2"]) == 0, Z, O),
    Row("l1 = l2 = 0", lambda s, p: s(p["l1"]) == 0 and s(p["l2"]) == 0, O, O),
    Row("l1 = 0, l2 != 0", lambda s, p: s(p["l1"]) == 0 and s(p["l2"]) != 0, Z, O),
    Row("l2 = 0, l1 > 0", lambda s, p: s(p["l2"]) == 0 and s(p["l1"]) > 0, Z, O),
    Row("l2 = 0, l1 < 0", lambda s, p: s(p["l2"]) == 0 and s(p["l1"]) < 0, INF, O),
    Row("l1 * l2 < 0", lambda s, p: s(p["l1"]) * s(p["l2"]) < 0, Z, Z),
    Row("l1 = l2 < 0", lambda s, p: s(p["l1"]) < 0 and s(p["l1"] - p["l2"]) == 0, INF, O),
    Row(
        "l1, l2 < 0, l1 != l2",
        lambda s, p: s(p["l1"]) < 0 and s(p["l2"]) < 0 and s(p["l1"] - p["l2"]) != 0,
        # printed as "-> 0 for 2*l2 >= l1"; the boundary is flagged
        _split("2*l2 - l1", lambda p: 2 * p["l2"] - p["l1"], Z, Z, INF, PRINTED_DISCREPANCY),
        _split("2*l1 - l2", lambda p: 2 * p["l1"] - p["l2"], Z, C, INF),
    ),
]

D3_BLOCK3 = [
    Row("lam > 0", lambda s, p: s(p["lam"]) > 0, Z, Z),
    Row("lam = 0", lambda s, p: s(p["lam"]) == 0, Z, O),
    Row("lam < 0", lambda s, p: s(p["lam"]) < 0, INF, INF),
]

TABLES: dict[CaseTag, list[Row]] = {
    CaseTag.D2_DIAG: D2_DIAG,
    CaseTag.D2_COMPLEX: D2_COMPLEX,
    CaseTag.D2_BLOCK: D2_BLOCK,
    CaseTag.D3_DIAG: D3_DIAG,
    CaseTag.D3_COMPLEX: D3_COMPLEX,
    CaseTag.D3_BLOCK2: D3_BLOCK2,
    CaseTag.D3_BLOCK3: D3_BLOCK3,
}


def all_subrows() -> list[tuple[CaseTag, str, str, str | None]]:
    """Every (case, pattern, quantity, branch) a lookup can land on.

    ``branch`` is "+", "0" or "-" for split outcomes and None otherwise.
    Branches of kappa and tau are listed separately since not every
    combination of the two is feasible.
    """
    out = []
    for case, rows in TABLES.items():
        for row in rows:
            for name, outcome in (("kappa", row.kappa), ("tau", row.tau)):
                if outcome is None:
                    continue
                branches = ["+", "0", "-"] if isinstance(outcome, Split) else [None]
                out += [(case, row.pattern, name, b) for b in branches]
    return out

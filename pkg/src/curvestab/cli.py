"""Command-line entry point: one system in, a report and optional CSV out."""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import CurvestabError, DimensionError, ParseError, StationaryPoint
from .exppoly import LimitClass, LimitTag
from .flow import expm_canonical
from .geometry import log_geometry
from .jordan import classify
from .linalg import determinant
from .stability import StabilityVerdict, analyze, sample_canonical_initials

EXIT_OK = 0
EXIT_CONTRADICTION = 1
EXIT_ERROR = 2


@dataclass(frozen=True)
class SystemSpec:
    matrix: np.ndarray
    initial: np.ndarray | None = None
    t_range: tuple[float, float] = (0.0, 10.0)
    samples: int = 500

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _number(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{what}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ParseError(f"{what}: not finite")
    return x


def _matrix(raw) -> np.ndarray:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ParseError("matrix: expected a non-empty array of rows")
    n = len(raw)
    for i, row in enumerate(raw):
        if len(row) != n:
            raise DimensionError(f"matrix is not square: row {i} has {len(row)} entries, expected {n}")
    if n not in (2, 3):
        raise DimensionError(f"unsupported dimension {n}; only 2 and 3 are handled")
    return np.array([[_number(x, f"matrix[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(raw)])


def _build(data: dict) -> SystemSpec:
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object")
    unknown = set(data) - {"matrix", "initial", "t_range", "samples"}
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    if "matrix" not in data:
        raise ParseError('missing key "matrix"')
    a = _matrix(data["matrix"])
    r0 = None
    if data.get("initial") is not None:
        raw = data["initial"]
        if not isinstance(raw, list):
            raise ParseError("initial: expected an array")
        if len(raw) != a.shape[0]:
            raise DimensionError(f"initial has length {len(raw)}, matrix is {a.shape[0]}x{a.shape[0]}")
        r0 = np.array([_number(x, f"initial[{i}]") for i, x in enumerate(raw)])
    t_range = (0.0, 10.0)
    if data.get("t_range") is not None:
        raw = data["t_range"]
        if not isinstance(raw, list) or len(raw) != 2:
            raise ParseError("t_range: expected [t_start, t_end]")
        t_range = (_number(raw[0], "t_range[0]"), _number(raw[1], "t_range[1]"))
        if not t_range[1] > t_range[0]:
            raise ParseError("t_range: t_end must exceed t_start")
    samples = data.get("samples", 500)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        raise ParseError("samples: expected an integer >= 2")
    return SystemSpec(a, r0, t_range, samples)


def parse_spec(text: str) -> SystemSpec:
    """Parse a JSON system description."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return _build(data)


def _json_arg(value: str, what: str):
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            value = fh.read()
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise ParseError(f"{what}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


# -- report -----------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _fmt_complex(z: complex) -> str:
    if z.imag == 0.0:
        return _fmt(z.real)
    sign = "+" if z.imag > 0 else "-"
    return f"{_fmt(z.real)}{sign}{_fmt(abs(z.imag))}i"


def _class_dict(c: LimitClass | None):
    if c is None:
        return None
    out = {"tag": str(c.tag)}
    if c.bounds is not None:
        out["bounds"] = [float(c.bounds[0]), float(c.bounds[1])]
    return out


def _class_text(c: LimitClass) -> str:
    s = str(c.tag)
    if c.bounds is not None:
        lo, hi = c.bounds
        if lo == hi:
            s += f" (limit {_fmt(lo)})"
        else:
            s += f" (eventually in [{_fmt(lo)}, {_fmt(hi)}])"
    return s


def report_fields(spec: SystemSpec, result: StabilityVerdict) -> dict:
    form = classify(spec.matrix)
    notes = list(result.notes)
    if result.kappa_class.tag is LimitTag.IDENTICALLY_ZERO:
        notes.append("kappa is identically zero (straight-line trajectory); taken as 0 by convention")
    return {
        "eigenvalues": [[z.real, z.imag] for z in form.eigenvalues()],
        "case": str(form.case),
        "det": determinant(spec.matrix),
        "initial": None if spec.initial is None else [float(x) for x in spec.initial],
        "kappa_class": _class_dict(result.kappa_class),
        "tau_class": _class_dict(result.tau_class),
        "verdict": str(result.verdict),
        "evidence": result.evidence,
        "clauses": list(result.clauses),
        "oracle": None if result.oracle is None else str(result.oracle.verdict),
        "agrees_with_oracle": result.agrees_with_oracle,
        "notes": notes,
    }


def render_report(fields: dict, result: StabilityVerdict) -> str:
    lines = [
        "eigenvalues: " + ", ".join(_fmt_complex(complex(re, im)) for re, im in fields["eigenvalues"]),
        f"jordan case: {fields['case']}",
        f"det A: {_fmt(fields['det'])}",
    ]
    if fields["initial"] is not None:
        lines.append("initial value: (" + ", ".join(_fmt(x) for x in fields["initial"]) + ")")
    else:
        lines.append("initial value: generic (32 canonical samples)")
    lines.append(f"kappa: {_class_text(result.kappa_class)}")
    if result.tau_class is not None:
        lines.append(f"tau: {_class_text(result.tau_class)}")
    lines.append(f"verdict: {fields['verdict']}")
    lines.append(f"evidence: {fields['evidence']}")
    for c in fields["clauses"][1:]:
        lines.append(f"also holds: {c}")
    if fields["oracle"] is not None:
        lines.append(f"oracle: {fields['oracle']}")
        lines.append(f"agrees with oracle: {'yes' if fields['agrees_with_oracle'] else 'NO'}")
    for n in fields["notes"]:
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def run_report(spec: SystemSpec, seed: int = 0, with_oracle: bool = True) -> tuple[dict, str]:
    """Analyse ``spec`` and return (machine-readable fields, text report)."""
    result = analyze(spec.matrix, spec.initial, seed=seed, with_oracle=with_oracle)
    fields = report_fields(spec, result)
    return fields, render_report(fields, result)


# -- csv --------------------------------------------------------------------


def _cell(x) -> str:
    return "" if x is None else repr(float(x))


def trajectory_rows(spec: SystemSpec, seed: int = 0) -> list[list[str]]:
    """Rows t, x, y[, z], kappa[, tau] on an even grid over t_range.

    Without an initial value the first generic canonical sample for ``seed``
    is used.  Undefined geometry leaves an empty cell.
    """
    form = classify(spec.matrix)
    if spec.initial is not None:
        v0 = form.P @ spec.initial
    else:
        v0 = sample_canonical_initials(form.dim, 1, np.random.default_rng(seed))[0]
    rows = []
    for t in np.linspace(spec.t_range[0], spec.t_range[1], spec.samples):
        t = float(t)
        with np.errstate(over="ignore", invalid="ignore"):
            r = form.P_inv @ (expm_canonical(form, t) @ v0)
        try:
            g = log_geometry(form, v0, t)
            kappa, tau = g.kappa, g.tau
        except StationaryPoint:
            kappa = tau = None
        row = [_cell(t)] + [_cell(x) for x in r] + [_cell(kappa)]
        if form.dim == 3:
            row.append(_cell(tau))
        rows.append(row)
    return rows


def write_csv(spec: SystemSpec, stream, seed: int = 0) -> None:
    header = ["t", "x", "y", "z"][: spec.dim + 1] + ["kappa"] + (["tau"] if spec.dim == 3 else [])
    stream.write(",".join(header) + "\n")
    for row in trajectory_rows(spec, seed):
        stream.write(",".join(row) + "\n")


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="curvestab",
        description="Decide stability of x' = Ax (2-D or 3-D) from trajectory curvature and torsion.",
    )
    p.add_argument("spec", nargs="?", help="JSON system file ('-' for stdin); optional when --matrix is given")
    p.add_argument("-m", "--matrix", help="matrix as inline JSON rows or @file")
    p.add_argument("-i", "--initial", help="initial value as inline JSON or @file")
    p.add_argument("--t-range", nargs=2, type=float, metavar=("START", "END"))
    p.add_argument("--samples", type=int, help="CSV sample count (default 500)")
    p.add_argument("--csv", metavar="PATH", help="write trajectory CSV to PATH ('-' for stdout)")
    p.add_argument("--seed", type=int, help="seed for generic initial values (default $CURVESTAB_SEED or 0)")
    p.add_argument("--no-oracle", action="store_true", help="skip the eigenvalue cross-check")
    p.add_argument("--json", action="store_true", help="print the report as a JSON object")
    return p


def spec_from_args(args: argparse.Namespace, stdin=None) -> SystemSpec:
    data: dict = {}
    if args.spec is not None or args.matrix is None:
        if args.spec in (None, "-"):
            text = (stdin or sys.stdin).read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
        if not isinstance(data, dict):
            raise ParseError("top level must be a JSON object")
    if args.matrix is not None:
        data["matrix"] = _json_arg(args.matrix, "--matrix")
    if args.initial is not None:
        data["initial"] = _json_arg(args.initial, "--initial")
    if args.t_range is not None:
        data["t_range"] = list(args.t_range)
    if args.samples is not None:
        data["samples"] = args.samples
    return _build(data)


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CURVESTAB_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"CURVESTAB_SEED is not an integer: {env!r}") from None
    return 0


def main(argv: list[str] | None = None, stdout=None, stdin=None) -> int:
    out = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args, stdin)
        seed = _seed(args)
        fields, text = run_report(spec, seed, not args.no_oracle)
        if args.csv is not None:
            buf = io.StringIO()
            write_csv(spec, buf, seed)
            if args.csv == "-":
                out.write(buf.getvalue())
            else:
                with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(buf.getvalue())
    except (CurvestabError, OSError) as e:
        print(f"curvestab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        out.write(json.dumps(fields, indent=2) + "\n")
    elif args.csv != "-":
        out.write(text)
    return EXIT_CONTRADICTION if fields["agrees_with_oracle"] is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

import io
import json
import math

import numpy as np
import pytest

from curvestab.cli import (
    EXIT_ERROR,
    EXIT_OK,
    SystemSpec,
    build_parser,
    main,
    parse_spec,
    run_report,
    spec_from_args,
    write_csv,
)
from curvestab.errors import DimensionError, ParseError
from systems import EXAMPLES, S3

EX1 = '{"matrix": [[18, 25], [-13, -18]], "initial": [1, 1], "t_range": [0, 6.3], "samples": 50}'


def run(argv, stdin=None):
    out = io.StringIO()
    code = main(argv, stdout=out, stdin=io.StringIO(stdin) if stdin is not None else None)
    return code, out.getvalue()


def test_parse_example1():
    s = parse_spec(EX1)
    assert np.array_equal(s.matrix, EXAMPLES[1])
    assert np.array_equal(s.initial, [1.0, 1.0])
    assert s.t_range == (0.0, 6.3) and s.samples == 50 and s.dim == 2


def test_parse_defaults():
    s = parse_spec('{"matrix": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}')
    assert s.initial is None and s.t_range == (0.0, 10.0) and s.samples == 500


@pytest.mark.parametrize(
    "text, err",
    [
        ('{"matrix": [[1, 2, 3], [4, 5, 6]]}', DimensionError),
        ('{"matrix": [[1, 2], [3]]}', DimensionError),
        ('{"matrix": [[1]]}', DimensionError),
        ('{"matrix": [[1, 2], [3, 4]], "initial": [1, 2, 3]}', DimensionError),
        ('{"matrix": [[1, 2], [3, "x"]]}', ParseError),
        ('{"matrix": [[1, 2], [3, 4]], "t_range": [2, 1]}', ParseError),
        ('{"matrix": [[1, 2], [3, 4]], "samples": 1}', ParseError),
        ('{"matrix": [[1, 2], [3, 4]], "colour": 1}', ParseError),
        ('{"initial": [1, 2]}', ParseError),
        ("[1, 2]", ParseError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_spec(text)


def test_bad_json_reports_position():
    with pytest.raises(ParseError, match="line 2, column 21"):
        parse_spec('{\n  "matrix": [[1, 2] [3, 4]]\n}')


def test_report_example2():
    fields, text = run_report(SystemSpec(EXAMPLES[2]))
    assert fields["verdict"] == "AsymptoticallyStable"
    assert fields["kappa_class"]["tag"] == "TendsToInfinity"
    assert fields["oracle"] == "AsymptoticallyStable" and fields["agrees_with_oracle"] is True
    assert "verdict: AsymptoticallyStable" in text


def test_report_example3_limit():
    fields, text = run_report(SystemSpec(EXAMPLES[3], np.array([1.0, 1.0, 1.0])))
    limit = 16 * (1 + S3) / (5 - S3) ** 2
    assert limit == pytest.approx(4.09315, abs=1e-5)
    lo, hi = fields["kappa_class"]["bounds"]
    assert lo == pytest.approx(limit, rel=1e-6) and hi == pytest.approx(limit, rel=1e-6)
    assert "(limit 4.0931" in text


def test_report_zero_matrix_note():
    fields, text = run_report(SystemSpec(np.zeros((2, 2))))
    assert fields["kappa_class"]["tag"] == "IdenticallyZero"
    assert any("identically zero" in n for n in fields["notes"])
    assert fields["verdict"] == "UndeterminedByGeometry"


def test_report_example4_det_exact():
    fields, text = run_report(SystemSpec(EXAMPLES[4]))
    assert fields["det"] == -5.0
    assert "det A: -5\n" in text


def test_csv_format_and_determinism():
    spec = parse_spec(EX1)
    a, b = io.StringIO(), io.StringIO()
    write_csv(spec, a, seed=3)
    write_csv(spec, b, seed=3)
    assert a.getvalue() == b.getvalue()
    lines = a.getvalue().split("\n")
    assert lines[0] == "t,x,y,kappa" and lines[-1] == "" and len(lines) == 52
    t, x, y, k = (float(v) for v in lines[1].split(","))
    assert (t, x, y) == (0.0, 1.0, 1.0)
    assert k * k == pytest.approx(1369 / (2 * 1405**3), rel=1e-9)
    # shortest round-trip representation
    for cell in lines[2].split(","):
        assert repr(float(cell)) == cell


def test_csv_3d_has_torsion_column():
    spec = SystemSpec(EXAMPLES[5], np.array([2.0, 1.0, 1.0]), (0.0, 1.0), 5)
    buf = io.StringIO()
    write_csv(spec, buf)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "t,x,y,z,kappa,tau" and len(rows) == 6
    assert all(len(r.split(",")) == 6 for r in rows)


def test_csv_blank_cells_for_undefined_geometry():
    spec = SystemSpec(np.zeros((2, 2)), np.array([1.0, 2.0]), (0.0, 1.0), 3)
    buf = io.StringIO()
    write_csv(spec, buf)
    assert buf.getvalue().splitlines()[1] == "0.0,1.0,2.0,"


def test_main_exit_codes(tmp_path):
    code, out = run(["-m", "[[-4, -2], [1, -1]]"])
    assert code == EXIT_OK and "AsymptoticallyStable" in out
    code, _ = run(["-m", "[[1, 2, 3], [4, 5, 6]]"])
    assert code == EXIT_ERROR
    code, _ = run(["-"], stdin="{bad json")
    assert code == EXIT_ERROR
    code, _ = run([str(tmp_path / "missing.json")])
    assert code == EXIT_ERROR
    code, _ = run(["-m", "[[-5, -12, 9], [-1, -30, 19], [0, -36, 22]]", "-i", "[1, 0, 3]"])
    assert code == EXIT_ERROR


def test_main_json_and_file_inputs(tmp_path):
    f = tmp_path / "ex1.json"
    f.write_text(EX1)
    code, out = run([str(f), "--json"])
    data = json.loads(out)
    assert code == EXIT_OK and data["verdict"] == "Stable" and data["oracle"] == "StableNotAsymptotic"
    m = tmp_path / "a.json"
    m.write_text("[[18, 25], [-13, -18]]")
    code, out2 = run(["-m", f"@{m}", "-i", "[1, 1]", "--json"])
    assert json.loads(out2)["kappa_class"] == data["kappa_class"]


def test_main_csv_to_file_and_stdout(tmp_path):
    path = tmp_path / "traj.csv"
    code, out = run(["-m", "[[-4, -2], [1, -1]]", "--csv", str(path), "--samples", "10", "--t-range", "0", "1"])
    assert code == EXIT_OK and "verdict" in out
    data = path.read_bytes()
    assert b"\r" not in data and data.startswith(b"t,x,y,kappa\n")
    code, out = run(["-m", "[[-4, -2], [1, -1]]", "--csv", "-", "--samples", "10", "--t-range", "0", "1"])
    assert out.encode() == data


def test_seed_from_environment(monkeypatch):
    argv = ["-m", "[[-1, 4, 0], [0, -1, 2], [0, -2, -1]]", "--csv", "-", "--samples", "4"]
    monkeypatch.setenv("CURVESTAB_SEED", "11")
    _, from_env = run(argv)
    monkeypatch.delenv("CURVESTAB_SEED")
    _, explicit = run(argv + ["--seed", "11"])
    _, other = run(argv + ["--seed", "12"])
    assert from_env == explicit and from_env != other


def test_flags_override_spec_file(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(EX1)
    args = build_parser().parse_args([str(f), "--samples", "7", "-i", "[2, 3]"])
    s = spec_from_args(args)
    assert s.samples == 7 and np.array_equal(s.initial, [2.0, 3.0])
    assert math.isclose(s.t_range[1], 6.3)

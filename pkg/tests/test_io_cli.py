import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from geomq.cli import gns_report, main
from geomq.hermitian import SIGMA2, gellmann_basis
from geomq.io import (
    ParseError,
    builtin_operator,
    format_csv,
    load_density,
    load_json,
    parse_gkls,
    parse_operator,
    parse_state,
    parse_vector,
    phase_space_header,
    read_csv,
    resolve_operator,
    write_csv,
)

AMPLITUDE_DAMPING = json.dumps({"H": [[0, 0], [0, 0]], "V": [[[0, 0.5], [0, 0]]]})
EXCITED = json.dumps({"rho": [[0, 0], [0, 1]]})


def test_operator_documents():
    np.testing.assert_array_equal(parse_operator([[0, [0, -1]], [[0, 1], 0]]), SIGMA2)
    np.testing.assert_array_equal(parse_operator({"dim": 2, "entries": [[1, 0], [0, 1]]}), np.eye(2))
    for bad in ([[1, 2]], {"dim": 3, "entries": [[1]]}, [[True]], {"entries": []}, [[1, 2], [3, "x"]], {"dim": 0, "entries": [[1]]}):
        with pytest.raises(ParseError):
            parse_operator(bad)


def test_builtin_and_resolved_operators(tmp_path):
    np.testing.assert_array_equal(builtin_operator("gellmann3_8"), gellmann_basis(3)[8])
    assert builtin_operator("gellmann3_99") is None and builtin_operator("nope") is None
    path = tmp_path / "ops.json"
    path.write_text(json.dumps({"a": [[1, 0], [0, -1]], "b": [[0, 1], [1, 0]]}))
    np.testing.assert_array_equal(resolve_operator(str(path), "b"), [[0, 1], [1, 0]])
    with pytest.raises(ParseError):
        resolve_operator(str(path))
    with pytest.raises(ParseError):
        resolve_operator(str(path), "c")
    with pytest.raises(ParseError):
        resolve_operator(str(tmp_path / "missing.json"))
    np.testing.assert_array_equal(resolve_operator('{"entries": [[2]]}'), [[2]])


def test_state_documents():
    assert parse_state({"psi": [1, [0, 1]]})[0] == "psi"
    np.testing.assert_allclose(load_density('{"psi": [1, 1]}'), 0.5 * np.ones((2, 2)))
    np.testing.assert_array_equal(load_density(EXCITED), np.diag([0, 1]))
    for bad in ([], {"psi": [0, 0]}, {"psi": []}, {"phi": 1}):
        with pytest.raises(ParseError):
            parse_state(bad)
    with pytest.raises(ParseError):
        load_json("{not json")


def test_gkls_documents():
    parts = parse_gkls(json.loads(AMPLITUDE_DAMPING))
    assert set(parts) == {"H", "V"} and len(parts["V"]) == 1
    assert set(parse_gkls({"H": [[0]], "c": [[1]]})) == {"H", "c"}
    for bad in ({"c": [[1]]}, {"H": [[0]]}, {"H": [[0]], "V": 1}, {"H": [[0]], "c": [[1]], "F": 2}):
        with pytest.raises(ParseError):
            parse_gkls(bad)


def test_vectors():
    np.testing.assert_array_equal(parse_vector("1,0,0.5,-2"), [1, 0, 0.5, -2])
    for bad in ("1,,2", "a", "1,inf"):
        with pytest.raises(ParseError):
            parse_vector(bad)


@given(arrays(np.float64, (7, 4), elements=st.floats(allow_nan=False, allow_infinity=False, width=64)))
def test_csv_round_trip_is_bit_exact(rows):
    import tempfile
    from pathlib import Path

    times = np.arange(7) * 0.1
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "t.csv"
        write_csv(path, phase_space_header(2), times, rows)
        header, data = read_csv(path)
    assert header == ["t", "q1", "p1", "q2", "p2"]
    np.testing.assert_array_equal(data[:, 0], times)
    np.testing.assert_array_equal(data[:, 1:], rows)


def test_csv_shape_checks():
    with pytest.raises(ValueError):
        format_csv(["t", "a"], [0.0], [[1.0, 2.0]])


# -- command line ------------------------------------------------------------------


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_flow_figure_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run(["flow", "--figure", "fig1", "--out", str(a)], capsys)[0] == 0
    assert _run(["flow", "--figure", "fig1", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    header, data = read_csv(a)
    assert header == ["t", "q1", "p1", "q2", "p2"]
    np.testing.assert_allclose(data[-1, 1:], [0.5547, 0.83205, 0, 0], atol=1e-3)


def test_flow_figure_side_files(tmp_path, capsys):
    out = tmp_path / "f.csv"
    code, _, err = _run(["flow", "--figure", "fig3b", "--h", "0.01", "--out", str(out)], capsys)
    assert code == 0 and "Gamma" in err
    assert (tmp_path / "f_Gamma.csv").exists()


def test_flow_with_operator(tmp_path, capsys):
    code, out, err = _run(["flow", "--op", "sigma3", "--seed", "1,0,0,0", "--tmax", "0.5", "--h", "0.1"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,q1,p1,q2,p2" and len(lines) == 7
    last = [float(x) for x in lines[-1].split(",")]
    assert last[1:3] == pytest.approx([np.cos(0.5), np.sin(0.5)], abs=1e-6)
    assert "steps=5" in err


def test_flow_errors(capsys):
    assert _run(["flow", "--op", "sigma3"], capsys)[0] == 2
    assert _run(["flow", "--op", "sigma3", "--seed", "1,0"], capsys)[0] == 2
    assert _run(["flow", "--op", "{bad", "--seed", "1,0,0,0"], capsys)[0] == 2
    code, _, err = _run(["flow", "--op", "[[1e200, 0], [0, 1]]", "--kind", "gradient", "--seed", "1,0,0,0", "--h", "1"], capsys)
    assert code == 3 and "integration failed" in err


def test_lindblad_command(tmp_path, capsys):
    out = tmp_path / "l.csv"
    code, _, err = _run(["lindblad", "--spec", AMPLITUDE_DAMPING, "--rho0", EXCITED, "--tmax", "1", "--h", "0.01", "--out", str(out)], capsys)
    assert code == 0 and "final trace defect" in err
    header, data = read_csv(out)
    assert header[:3] == ["t", "re00", "im00"]
    assert data[-1, header.index("re11")] == pytest.approx(np.exp(-0.25), abs=1e-9)
    code, out_text, _ = _run(["lindblad", "--spec", AMPLITUDE_DAMPING, "--rho0", EXCITED, "--tmax", "0.1", "--h", "0.01", "--bloch"], capsys)
    assert out_text.splitlines()[0] == "t,y0,y1,y2,y3"


def test_lindblad_exit_codes(capsys):
    bad_c = json.dumps({"H": [[0, 0], [0, 0]], "c": [[-1, 0, 0], [0, 0, 0], [0, 0, 0]]})
    assert _run(["lindblad", "--spec", bad_c, "--rho0", EXCITED], capsys)[0] == 4
    assert _run(["lindblad", "--spec", AMPLITUDE_DAMPING, "--rho0", '{"rho": [[1, 0], [0, 1]]}'], capsys)[0] == 2
    assert _run(["lindblad", "--spec", AMPLITUDE_DAMPING, "--rho0", '{"rho": [[1]]}'], capsys)[0] == 2
    coeff = json.dumps({"H": [[0, 0], [0, 0]], "c": [[0.5, 0, 0], [0, 0, 0], [0, 0, 0]]})
    assert _run(["lindblad", "--spec", coeff, "--rho0", EXCITED, "--tmax", "0.1", "--h", "0.01"], capsys)[0] == 0


def test_check_command(tmp_path, capsys, monkeypatch):
    code, out, _ = _run(["check", "--suite", "brackets", "--n", "2", "--samples", "10"], capsys)
    report = json.loads(out)
    assert code == 0 and report["failures"] == 0 and report["seed"] == 0
    monkeypatch.setenv("GEOMQ_SEED", "7")
    code, out, _ = _run(["check", "--suite", "brackets", "--samples", "5"], capsys)
    assert json.loads(out)["seed"] == 7
    code, _, err = _run(["check", "--suite", "mu", "--samples", "5", "--perturb", "1e-3"], capsys)
    assert code == 1 and "FAIL" in err
    monkeypatch.setenv("GEOMQ_SEED", "x")
    assert _run(["check", "--suite", "mu", "--samples", "1"], capsys)[0] == 2


def test_check_reports_are_reproducible(capsys):
    a = _run(["check", "--suite", "kraus", "--n", "3", "--samples", "5", "--seed", "3"], capsys)[1]
    b = _run(["check", "--suite", "kraus", "--n", "3", "--samples", "5", "--seed", "3"], capsys)[1]
    assert a == b


def test_gns_and_bloch_commands(capsys):
    code, out, _ = _run(["gns", "--state", '{"rho": [[0.75, 0], [0, 0.25]]}'], capsys)
    report = json.loads(out)
    assert code == 0 and report["dim_H"] == 4 and report["commutant_dim"] == 4
    assert [b["p_alpha"] for b in report["blocks"]] == pytest.approx([0.75, 0.25], abs=1e-12)
    assert report["recovery_residual"] < 1e-10
    code, out, _ = _run(["bloch", "--state", '{"psi": [1, 0]}'], capsys)
    report = json.loads(out)
    assert report["y"] == pytest.approx([0.5, 0, 0, 0.5]) and report["in_ball"]
    assert report["radius_squared"] == pytest.approx(0.25)
    assert _run(["bloch", "--state", '{"rho": [[2, 0], [0, -1]]}'], capsys)[0] == 2


def test_gns_report_for_pure_state():
    report = gns_report(np.diag([1.0, 0.0, 0.0]))
    assert report["dim_H"] == 3 and report["ideal_dim"] == 6 and report["commutant_dim"] == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "geomq", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "flow" in res.stdout
    res = subprocess.run([sys.executable, "-m", "geomq", "frobnicate"], capture_output=True, text=True)
    assert res.returncode == 2

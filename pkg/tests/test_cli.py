import math

import pytest
from hypothesis import given, strategies as st

from lseigen.cli import main
from lseigen.records import fmt, parse_record, read_csv, record, write_csv

SMALL = ["--n-points", "301", "--box", "9"]


def _records(text):
    return [parse_record(line) for line in text.splitlines() if line and not line.startswith("#")]


def test_scan_harmonic_even(tmp_path, capsys):
    csv = tmp_path / "h.csv"
    rec = tmp_path / "h.txt"
    argv = ["scan", "--potential", "harmonic", "--parity", "even", "--emin", "0.5", "--emax", "6",
            "--steps", "60", *SMALL, "--csv", str(csv), "--records", str(rec), "--threads", "1"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    rows = _records(out)
    assert [r["parity"] for r in rows] == ["even", "even"]
    assert [float(r["energy"]) for r in rows] == pytest.approx([1, 5], abs=1e-2)
    assert set(rows[0]) == {"energy", "parity", "residual", "stationarity"}
    meta, header, body = read_csv(csv)
    assert header == ["E", "epsilon", "depsilon_dE", "solve_ok"]
    assert len(body) == 61
    assert meta["arg.steps"] == "60" and meta["parity"] == "even"
    assert "argv" in meta and "grid" in meta and "potential" in meta
    assert {row[3] for row in body} == {"true"}
    assert rec.read_text().startswith("# program=")
    assert _records(rec.read_text()) == rows


def test_scan_both_parities_writes_two_csvs(tmp_path, capsys):
    csv = tmp_path / "c.csv"
    argv = ["scan", "--potential", "harmonic", "--emin", "0.5", "--emax", "4", "--steps", "40", *SMALL,
            "--csv", str(csv), "--threads", "1"]
    assert main(argv) == 0
    assert (tmp_path / "c_even.csv").exists() and (tmp_path / "c_odd.csv").exists()
    energies = sorted(float(r["energy"]) for r in _records(capsys.readouterr().out))
    assert energies == pytest.approx([1, 3], abs=1e-2)


def test_thread_count_does_not_change_curves(tmp_path, capsys):
    paths = []
    for threads in ("1", "3"):
        csv = tmp_path / f"t{threads}.csv"
        argv = ["scan", "--potential", "harmonic", "--parity", "even", "--emin", "0.5", "--emax", "2",
                "--steps", "10", "--n-points", "101", "--box", "6", "--csv", str(csv), "--threads", threads]
        assert main(argv) == 0
        paths.append(csv)
    capsys.readouterr()
    bodies = [read_csv(p)[1:] for p in paths]
    assert bodies[0] == bodies[1]


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# harmonic, odd by default\npotential = harmonic\nparity=odd\nemin=0.5\nemax=4\nsteps=40\n"
                   "n_points=301\nbox=9\nthreads=1\n")
    assert main(["scan", "--config", str(cfg)]) == 0
    rows = _records(capsys.readouterr().out)
    assert [r["parity"] for r in rows] == ["odd"]
    assert main(["scan", "--config", str(cfg), "--parity", "even"]) == 0
    rows = _records(capsys.readouterr().out)
    assert [r["parity"] for r in rows] == ["even"]


def test_bad_config_entry(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no_such_flag=3\n")
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--config", str(cfg)])
    assert exc.value.code == 2


def test_error_exit_codes(capsys):
    assert main(["scan", "--expr", "x^", "--emin", "0", "--emax", "1"]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["scan", "--potential", "cosh", "--a", "2"]) == 1
    assert main(["scan", "--expr", "x^2"]) == 1
    assert main(["scan", "--potential", "harmonic", "--threads", "0"]) == 2
    assert main(["scan", "--potential", "nonsense"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["engineer", "--param", "a", "--range", "1-2"])
    assert exc.value.code == 2


def test_engineer_empty_range(capsys):
    assert main(["engineer", "--target", "-3", "--param", "a", "--fixed-gamma", "2", "--range", "1:1"]) == 0
    out = capsys.readouterr().out
    assert "no crossings" in out
    assert _records(out) == []


def test_engineer_small_range(tmp_path, capsys):
    csv = tmp_path / "beta.csv"
    argv = ["engineer", "--param", "a", "--fixed-gamma", "2", "--range", "1.3:1.4", "--steps", "10",
            "--csv", str(csv), "--threads", "1"]
    assert main(argv) == 0
    (hit,) = _records(capsys.readouterr().out)
    assert float(hit["value"]) == pytest.approx(1.34938, abs=1e-2)
    assert hit["crossing_from_above"] == "true" and hit["cross_check_passed"] == "true"
    _, header, body = read_csv(csv)
    assert header == ["beta", "epsilon"] and len(body) == 11


def test_dk_coulomb(tmp_path, capsys):
    csv = tmp_path / "w.csv"
    argv = ["dk", "--map", "coulomb", "--variant", "corrected", "--omega", "0.2:0.3", "--steps", "20",
            "--parity", "odd", "--csv", str(csv), "--threads", "1"]
    assert main(argv) == 0
    rows = _records(capsys.readouterr().out)
    assert [float(r["energy"]) for r in rows] == pytest.approx([-0.25], abs=1e-3)
    meta, header, body = read_csv(csv)
    assert header == ["omega", "epsilon", "solve_ok"] and len(body) == 21
    assert meta["arg.L_y"] == "8"


def test_oracle_quartic(capsys):
    assert main(["oracle", "--potential", "quartic", "--k", "6", "--n-points", "2401"]) == 0
    levels = [float(r["energy"]) for r in _records(capsys.readouterr().out)]
    assert len(levels) == 6
    assert levels[:5] == pytest.approx([0.492174, 1.76363, 3.46057, 5.40487, 7.54779], abs=2e-3)


def test_psi_dump(tmp_path, capsys):
    csv = tmp_path / "psi.csv"
    assert main(["psi", "--potential", "harmonic", "--energy", "1.0", "--n-points", "101", "--box", "6",
                 "--csv", str(csv)]) == 0
    capsys.readouterr()
    meta, header, body = read_csv(csv)
    assert header == ["x", "psi"] and len(body) == 101
    assert "rcond" in meta


def test_fmt():
    assert fmt(True) == "true" and fmt(False) == "false"
    assert fmt(float("nan")) == "nan"
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt("even") == "even"


@given(st.floats(allow_nan=False))
def test_float_round_trip(x):
    assert float(fmt(x)) == x


def test_record_round_trip():
    line = record(energy=1.25, parity="odd", residual=1e-3, stationarity=0.0)
    assert line == "energy=1.25 parity=odd residual=0.001 stationarity=0"
    assert parse_record(line) == {"energy": "1.25", "parity": "odd", "residual": "0.001", "stationarity": "0"}


@given(st.lists(st.tuples(st.floats(allow_nan=False), st.floats(allow_nan=False), st.booleans()), max_size=10))
def test_csv_round_trip(rows):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "x.csv"
        write_csv(path, ["a", "b", "ok"], rows, {"k": 1.5, "flag": True})
        meta, header, body = read_csv(path)
    assert meta == {"k": "1.5", "flag": "true"}
    assert header == ["a", "b", "ok"]
    back = [(float(a), float(b), ok == "true") for a, b, ok in body]
    assert back == rows
    assert all(not math.isnan(a) for a, _, _ in back)

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from coulomb5 import cli, output


def _run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def _table(path):
    meta, header, rows = output.read_csv(path)
    return meta, header, [dict(zip(header, r)) for r in rows]


# ---------------------------------------------------------------------------
# config and parsing
# ---------------------------------------------------------------------------

def test_parse_grid_and_tolerances():
    assert cli.parse_grid_r("1:2:3") == (1.0, 2.0, 3)
    assert cli.parse_tolerances(["euler=1e-3", "split=0.1"]) == {"euler": 1e-3, "split": 0.1}
    for bad in ("1:2", "a:b:c"):
        with pytest.raises(cli.ConfigError):
            cli.parse_grid_r(bad)
    for bad in (["nope=1"], ["euler"], ["euler=x"], ["euler=-1"]):
        with pytest.raises(cli.ConfigError):
            cli.parse_tolerances(bad)


def test_config_validation():
    with pytest.raises(cli.ConfigError):
        cli.RunConfig("xsec", r_min=0.0)
    with pytest.raises(cli.ConfigError):
        cli.RunConfig("xsec", n_r=1)
    with pytest.raises(cli.ConfigError):
        cli.RunConfig("xsec", lam_max=-1)
    with pytest.raises(cli.ConfigError):
        cli.RunConfig("xsec", a=-1.0)


def test_worker_count():
    assert cli.worker_count({}) == 1
    assert cli.worker_count({"COULOMB5_THREADS": "1"}) == 1
    assert 1 <= cli.worker_count({"COULOMB5_THREADS": "64"}) <= 64
    for bad in ("0", "two"):
        with pytest.raises(cli.ConfigError):
            cli.worker_count({"COULOMB5_THREADS": bad})


def test_exit_code_usage(capsys):
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["xsec", "--grid-r", "0:1:2"]) == 2
    assert cli.main(["xsec", "--tol", "bogus=1"]) == 2
    assert cli.main(["xsec", "--format", "xml"]) == 2


def test_exit_code_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("COULOMB5_THREADS", "zero")
    assert cli.main(["xsec"]) == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes_by_default(tmp_path):
    code, out = _run(["verify"], tmp_path)
    assert code == 0
    meta, header, rows = _table(out)
    assert header == list(cli.VERIFY_COLUMNS)
    assert all(r["passed"] == "true" for r in rows)
    assert {r["name"] for r in rows} == set(cli.suites.DEFAULT_TOLERANCES)
    assert out.with_suffix(".png").exists()


def test_verify_forced_failure(tmp_path, capsys):
    code, out = _run(["verify", "--tol", "euler=1e-30"], tmp_path)
    assert code == 1
    rows = {r["name"]: r for r in _table(out)[2]}
    assert rows["euler"]["passed"] == "false"
    assert float(rows["euler"]["max_residual"]) > 0
    assert "FAIL euler" in capsys.readouterr().out


def test_verify_reproducible(tmp_path):
    _, a = _run(["verify", "--seed", "7"], tmp_path, "a.csv")
    _, b = _run(["verify", "--seed", "7"], tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# radial-table
# ---------------------------------------------------------------------------

def test_radial_table_row_count_and_metadata(tmp_path):
    code, out = _run(["radial-table", "--grid-r", "10:20:2", "--lam-max", "0"], tmp_path)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# coulomb5 radial-table ")
    meta = json.loads(lines[0].split(" ", 3)[3])
    assert meta["a"] == 1.0 and meta["k"] == 1.0 and meta["hbar"] == 1.0 and meta["mu"] == 1.0
    assert meta["grid_r"] == [10.0, 20.0, 2]
    assert lines[1] == ",".join(cli.RADIAL_COLUMNS)
    assert len(lines) == 4


def test_radial_table_phase_constant_and_decay(tmp_path):
    code, out = _run(["radial-table", "--grid-r", "100:162.83185307179586:11", "--lam-max", "2"], tmp_path)
    assert code == 0
    rows = _table(out)[2]
    for lam in "012":
        sub = [r for r in rows if r["lambda"] == lam]
        assert len({r["delta_lambda"] for r in sub}) == 1
        diff = np.array([float(r["abs_diff"]) for r in sub])
        assert np.all(np.diff(diff) < 0)


def test_radial_table_json_mirror(tmp_path):
    _, c = _run(["radial-table", "--grid-r", "10:20:3", "--lam-max", "1"], tmp_path, "t.csv")
    _, j = _run(["radial-table", "--grid-r", "10:20:3", "--lam-max", "1", "--format", "json"], tmp_path, "t.json")
    doc = json.loads(j.read_text())
    assert doc["columns"] == list(cli.RADIAL_COLUMNS)
    csv_rows = _table(c)[2]
    assert len(doc["rows"]) == len(csv_rows) == 6
    for cr, jr in zip(csv_rows, doc["rows"]):
        assert float(cr["R"]) == jr["R"]


# ---------------------------------------------------------------------------
# basis-check
# ---------------------------------------------------------------------------

def test_basis_check_hyperspherical(tmp_path):
    code, out = _run(["basis-check", "--lam-max", "2", "--grid-r", "0.5:6:2"], tmp_path)
    assert code == 0
    rows = _table(out)[2]
    # labels lam <= 2 with 2L <= lam: 1 + 2 + 3 = 6, two points each
    assert len(rows) == 12
    assert max(float(r["residual_cartesian"]) for r in rows) <= 1e-6


def test_basis_check_parabolic(tmp_path):
    code, out = _run(["basis-check", "--parabolic", "--lam-max", "1", "--grid-r", "0.5:6:2"], tmp_path)
    assert code == 0
    rows = _table(out)[2]
    assert len(rows) == 2 * 3 * 2
    assert max(float(r["ode_xi"]) for r in rows) <= 1e-7
    assert max(float(r["residual_cartesian"]) for r in rows) <= 1e-6


def test_basis_check_forced_failure(tmp_path):
    code, _ = _run(["basis-check", "--lam-max", "0", "--grid-r", "1:2:2", "--tol", "pde_hyper=1e-30"], tmp_path)
    assert code == 1


# ---------------------------------------------------------------------------
# xsec and scatter-field
# ---------------------------------------------------------------------------

def test_xsec_table(tmp_path):
    code, out = _run(["xsec", "--grid-theta", "12"], tmp_path)
    assert code == 0
    rows = _table(out)[2]
    assert len(rows) == 12
    assert float(rows[-1]["theta"]) == math.pi
    assert float(rows[-1]["xsec_printed"]) == 0.125
    xs = np.array([float(r["xsec_printed"]) for r in rows])
    assert np.all(np.diff(xs) < 0)
    th = np.array([float(r["theta"]) for r in rows])
    np.testing.assert_allclose([float(r["ratio"]) for r in rows], np.sin(th / 2) ** 4, rtol=1e-12)


def test_xsec_backward_value_general(tmp_path):
    code, out = _run(["xsec", "--a", "0.5", "--k", "2", "--grid-theta", "4"], tmp_path)
    a, k = 0.5, 2.0
    np.testing.assert_allclose(float(_table(out)[2][-1]["xsec_printed"]), (1 + a * a * k * k) / (16 * a**4 * k**8),
                               rtol=1e-14)


def test_scatter_field(tmp_path):
    code, out = _run(["scatter-field", "--a", "2", "--grid-r", "5:400:2", "--grid-theta", "5"], tmp_path)
    assert code == 0
    rows = _table(out)[2]
    assert len(rows) == 10
    for r in rows:
        assert math.isfinite(float(r["abs_psi_sq"]))
        if float(r["eta"]) == 0:
            assert float(r["sc_re"]) == 0 and float(r["sc_im"]) == 0
            assert r["inc_re"] == r["psi_re"]
    far = [float(r["split_rel_err"]) for r in rows if float(r["r"]) == 400 and float(r["theta"]) > 0]
    assert far and max(far) <= 3e-2


def test_stdout_without_out(capsys):
    assert cli.main(["xsec", "--grid-theta", "3"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# coulomb5 xsec ")
    assert len(text.strip().splitlines()) == 5


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("args", [
    ["radial-table", "--grid-r", "10:50:5", "--lam-max", "1"],
    ["basis-check", "--lam-max", "1", "--grid-r", "0.5:4:2", "--seed", "3"],
    ["scatter-field", "--grid-r", "5:50:3", "--grid-theta", "4"],
])
def test_bit_identical_serial_and_parallel(tmp_path, monkeypatch, args):
    monkeypatch.delenv("COULOMB5_THREADS", raising=False)
    _, a = _run(args, tmp_path, "serial.csv")
    monkeypatch.setenv("COULOMB5_THREADS", "2")
    _, b = _run(args, tmp_path, "parallel.csv")
    assert a.read_bytes() == b.read_bytes()
    _, c = _run(args, tmp_path, "again.csv")
    assert b.read_bytes() == c.read_bytes()


def test_figures_are_reproducible(tmp_path):
    _, a = _run(["xsec"], tmp_path, "a.csv")
    _, b = _run(["xsec"], tmp_path, "b.csv")
    assert a.with_suffix(".png").read_bytes() == b.with_suffix(".png").read_bytes()

"""CLI contract: exit codes, config handling, output formats, round-trips."""

import json

import numpy as np
import pytest

from pointaffine import catalog, cli, integrate as integ
from pointaffine.models import ModelSpec


def run(argv):
    return cli.main(argv)


def write_config(tmp_path, name="run.json", **overrides):
    doc = {
        "model": {"case": "C11", "c1": 1.0},
        "initial": {"x": [0.0, 1.0], "p": [0.5, 1.0]},
        "t_span": [0.0, 1.0],
        "integrator": {},
        "output": {"format": "csv", "stride": 1},
    }
    doc.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_list_models(capsys):
    assert run(["list-models"]) == 0
    out = capsys.readouterr().out
    assert sum(line.startswith("C") for line in out.splitlines()) == 8
    assert run(["list-models", "--case", "C22"]) == 0
    assert "metric" in capsys.readouterr().out
    assert run(["list-models", "--case", "C99"]) == 2


def test_validate(capsys):
    assert run(["validate", "--case", "C232",
                "--params", '{"c3": 0.5, "c4": 1.0, "epsilon": 1}']) == 0
    assert run(["validate", "--case", "C212", "--params", '{"c1": 0.0}']) == 2
    assert run(["validate", "--case", "C11",
                "--params", '{"bogus": 1.0}']) == 2


def test_integrate_drift_flow(tmp_path, capsys):
    cfg = write_config(tmp_path, initial={"x": [0.3, 1.0], "p": [0.0, 0.0]})
    out = tmp_path / "traj.csv"
    assert run(["integrate", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,x1,x2,p1,p2,u,H")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.allclose(data[:, 1], data[:, 0] + 0.3, atol=1e-12)  # x1 = t + x1_0


def test_integrate_stride(tmp_path):
    cfg = write_config(tmp_path)
    full = tmp_path / "full.csv"
    strided = tmp_path / "strided.csv"
    run(["integrate", "--config", cfg, "--out", str(full)])
    run(["integrate", "--config", cfg, "--out", str(strided), "--stride", "10"])
    nfull = len(full.read_text().splitlines()) - 1
    nstrided = len(strided.read_text().splitlines()) - 1
    assert nstrided == (nfull + 9) // 10


def test_integrate_blow_up_exit(tmp_path, capsys):
    cfg = write_config(tmp_path,
                       model={"case": "C12", "j0": 0.0, "g0": 1.0},
                       initial={"x": [0.0, -0.5], "p": [1.0, 0.0]},
                       t_span=[0.0, 4.0])
    out = tmp_path / "t.csv"
    assert run(["integrate", "--config", cfg, "--out", str(out)]) == 3
    assert "stop_reason=blow_up" in capsys.readouterr().out


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, typo_block={"x": 1})
    assert run(["integrate", "--config", cfg]) == 2
    cfg2 = write_config(tmp_path, "run2.json",
                        model={"case": "C11", "c9": 1.0})
    assert run(["integrate", "--config", cfg2]) == 2


def test_closed_form_line(tmp_path):
    out = tmp_path / "cf.csv"
    assert run(["closed-form", "--case", "C11",
                "--constants", '{"c1": 0.0, "c2": 1.0, "c3": 0.0}',
                "--t0", "0", "--t1", "1", "--step", "0.1",
                "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 12  # header + 11 samples
    for ln in lines[1:]:
        t, x1, x2 = (float(v) for v in ln.split(","))
        assert x2 == pytest.approx(t)


def test_closed_form_cubic(tmp_path):
    out = tmp_path / "cf.csv"
    assert run(["closed-form", "--case", "C211",
                "--constants",
                '{"c2": 0.0, "c3": 0.0, "coeffs": [0, 0, 0, 1], "t0": 0.0}',
                "--out", str(out)]) == 0
    rows = [ln.split(",") for ln in out.read_text().splitlines()[1:]]
    for row in rows:
        assert float(row[2]) == pytest.approx(float(row[0]) ** 3, abs=1e-12)


def test_closed_form_pole_exit(capsys, tmp_path):
    code = run(["closed-form", "--case", "C212", "--subcase", "tan_family",
                "--constants", '{"a": 1.0, "b": 1.0, "c": 0.0, "d": 0.0}',
                "--t0", "0", "--t1", "3", "--step", "0.1570796326794897",
                "--out", str(tmp_path / "x.csv")])
    assert code == 3
    assert "pole at t" in capsys.readouterr().err


def test_check_duality_suite(capsys):
    assert run(["check", "--case", "C12", "--suite", "duality"]) == 0
    assert "PASS C12 duality" in capsys.readouterr().out


def test_check_unknown_case():
    assert run(["check", "--case", "C99"]) == 2


def test_compare_c11(tmp_path, capsys):
    cfg = write_config(tmp_path, model={"case": "C11", "c1": 1.0},
                       initial={"x": [0.0, 0.0], "p": [0.0, 2.0]})
    assert run(["compare", "--config", cfg]) == 0
    assert "max_state_discrepancy" in capsys.readouterr().out


def test_compare_no_closed_form(tmp_path, capsys):
    cfg = write_config(tmp_path, model={"case": "C22", "c1": 0.2},
                       initial={"x": [0.0, 1.0, 0.0], "p": [0.0, 0.1, 0.0]})
    assert run(["compare", "--config", cfg]) == 2
    assert "no closed form" in capsys.readouterr().err


def test_json_round_trip_bit_exact():
    spec = catalog.default_spec("C212")
    traj = integ.integrate(spec, catalog.default_phase_point("C212"),
                           (0.0, 1.0))
    text = cli.trajectory_json(spec, traj)
    back = cli.trajectory_from_json(text)
    assert np.array_equal(back.times, traj.times)
    assert np.array_equal(back.states, traj.states)
    assert np.array_equal(back.costates, traj.costates)
    assert np.array_equal(back.controls, traj.controls)
    assert np.array_equal(back.integrals, traj.integrals)
    assert back.stop_reason == traj.stop_reason


def test_output_determinism(tmp_path):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["integrate", "--config", cfg, "--out", str(a)])
    run(["integrate", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_csv_round_trip_exact(tmp_path):
    spec = ModelSpec("C11", c1=1.0)
    traj = integ.integrate(spec, catalog.default_phase_point("C11"), (0.0, 1.0))
    text = cli.trajectory_csv(spec, traj)
    rows = [ln.split(",") for ln in text.splitlines()[1:]]
    parsed = np.array([[float(v) for v in row] for row in rows])
    assert np.array_equal(parsed[:, 0], traj.times)
    assert np.array_equal(parsed[:, 1:3], traj.states)

import csv

import pytest

from lowdepth_gsee import cli
from lowdepth_gsee.filters import GaussianDerivativeFilter
from lowdepth_gsee.spectral import min_admissible_gap


def read_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# lowdepth_gsee")
    return list(csv.DictReader(lines[1:]))


def run(argv, capsys=None):
    return cli.main([str(a) for a in argv])


def test_run_writes_result_and_profile(tmp_path):
    assert run(["run", "--instance", "demo", "--epsilon", "0.002", "--seed", "7", "--out", tmp_path]) == 0
    (row,) = read_rows(tmp_path / "result.csv")
    assert float(row["error"]) <= 0.002 and row["success"] == "1" and row["unsound"] == "0"
    assert float(row["main_t_max"]) <= float(row["band_limit"])
    prof = read_rows(tmp_path / "profile.csv")
    assert len(prof) == int(row["grid_size"])
    assert float(row["estimate"]) in {float(p["x"]) for p in prof}


def test_run_alpha_one(tmp_path):
    assert run(["run", "--instance", "demo", "--epsilon", "0.002", "--alpha", "1", "--out", tmp_path]) == 0
    (row,) = read_rows(tmp_path / "result.csv")
    assert float(row["delta_eff"]) == pytest.approx(min_admissible_gap(0.002, 0.5))
    assert row["floored"] == "1"


def test_run_worker_count_does_not_change_bytes(tmp_path):
    outs = []
    for w in (1, 4):
        d = tmp_path / f"w{w}"
        assert run(["run", "--instance", "far_excited", "--epsilon", "0.002", "--seed", "3", "--workers", w, "--out", d]) == 0
        outs.append(((d / "result.csv").read_bytes(), (d / "profile.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_run_precondition_exit_code(tmp_path, capsys):
    assert run(["run", "--instance", "demo", "--epsilon", "0.05", "--out", tmp_path]) == 2
    assert "precondition" in capsys.readouterr().err
    assert not (tmp_path / "result.csv").exists()


def test_run_override_marks_unsound(tmp_path):
    argv = ["run", "--instance", "demo", "--epsilon", "0.012", "--allow-invalid-epsilon", "--out", tmp_path]
    assert run(argv) == 0
    (row,) = read_rows(tmp_path / "result.csv")
    assert row["unsound"] == "1"


def test_run_coarse_failure_exit_code(tmp_path, monkeypatch):
    from lowdepth_gsee import coarse

    real = coarse.coarse_config

    def unreachable(sigma, eta):
        cfg = real(sigma, eta)
        return coarse.CoarseConfig(cfg.scan_width, cfg.grid_spacing, 1e9, cfg.per_point_accuracy)

    monkeypatch.setattr(coarse, "coarse_config", unreachable)
    assert run(["run", "--instance", "demo", "--epsilon", "0.002", "--out", tmp_path]) == 3


def test_bad_instance(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"energies": [0.1], "weights": [0.5]}')
    with pytest.raises(SystemExit) as e:
        run(["run", "--instance", bad, "--epsilon", "0.002", "--out", tmp_path])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["run", "--instance", "no_such_instance", "--epsilon", "0.002"])
    assert e.value.code == 2


def test_bad_flags():
    with pytest.raises(SystemExit) as e:
        run(["run", "--instance", "demo", "--epsilon", "-1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["run", "--instance", "demo", "--epsilon", "0.002", "--alpha", "2"])
    assert e.value.code == 2


def test_table1(tmp_path, capsys):
    assert run(["table1", "--out", tmp_path]) == 0
    rows = read_rows(tmp_path / "table1.csv")
    assert [r["molecule"] for r in rows] == ["EC", "PF6-"]
    assert float(rows[0]["vs_qpe"]) == pytest.approx(47.0, abs=0.5)
    assert "EC" in capsys.readouterr().out
    assert run(["table1", "--delta-lb", "0.3", "--delta-lb", "0.5", "--out", tmp_path]) == 0
    rows = read_rows(tmp_path / "table1.csv")
    assert [r["molecule"] for r in rows] == ["custom1", "custom2"]


def test_sweep_alpha(tmp_path):
    argv = ["sweep-alpha", "--instance", "demo", "--epsilon", "0.002", "--alphas", "0,1", "--seeds", "0:2", "--out", tmp_path]
    assert run(argv) == 0
    rows = read_rows(tmp_path / "tradeoff.csv")
    assert len(rows) == 4 and {r["seed"] for r in rows} == {"0", "1"}
    slopes = {r["quantity"]: float(r["slope"]) for r in read_rows(tmp_path / "slopes.csv")}
    assert set(slopes) == {"t_max_vs_inv_delta", "t_total_vs_delta"}
    assert slopes["t_max_vs_inv_delta"] > 0


def test_selftest_list(capsys):
    assert run(["selftest", "--list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 11 and "l1-closed-form" in out[6]


def test_selftest_catches_wrong_l1(monkeypatch, capsys):
    """A filter whose L1 norm is off by 1% must make the self-test fail."""
    from lowdepth_gsee import acceptance

    real = GaussianDerivativeFilter.l1_norm
    monkeypatch.setattr(GaussianDerivativeFilter, "l1_norm", lambda self: 1.01 * real(self))
    monkeypatch.setattr(acceptance, "FAST_SUBSET", (7,))
    assert run(["selftest"]) != 0
    assert "[FAIL]" in capsys.readouterr().out


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        run(["--version"])
    assert e.value.code == 0
    assert "lowdepth-gsee" in capsys.readouterr().out

import json
import subprocess
import sys

import pytest

import probsens as ps
from probsens.cli import main
from probsens.runner import RunConfig, default_config, run, run_case, verify

FAST = dict(n_samples=4000, percentiles=list(range(10, 100, 10)))


def test_config_rejects_unknown_keys():
    with pytest.raises(ps.ConfigError, match="unknown config keys"):
        RunConfig.from_dict({"case": "identity", "samples": 10})
    with pytest.raises(ps.ConfigError, match="unknown beam keys"):
        RunConfig(case="beam", beam={"lenght": 2.0})


def test_config_validation():
    with pytest.raises(ps.ConfigError):
        RunConfig(case="nope")
    with pytest.raises(ps.ConfigError):
        RunConfig(case="identity", percentiles=[0.0])
    with pytest.raises(ps.ConfigError):
        RunConfig(case="identity", n_samples=500)  # too small for density grids
    with pytest.raises(ps.ConfigError):
        RunConfig(case="identity", workers=0)


def test_default_config_round_trip():
    cfg = default_config("sho")
    assert RunConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_identity_run_report_content(tmp_path):
    cfg = RunConfig(case="identity", out_dir=str(tmp_path), **FAST)
    report, code = run(cfg)
    assert code == 0
    assert report["all_bounds_satisfied"]
    assert report["tr_fx"] == pytest.approx(75.0)
    assert len(report["rows"]) == 9
    assert (tmp_path / "curve.csv").exists()
    assert (tmp_path / "density.csv").exists()
    assert (tmp_path / "report.json").exists()
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk["provenance"]["seed"] == 1
    # curve.csv columns per the interface contract
    header = (tmp_path / "curve.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["percentile", "z", "p_f", "std_err_pf"]
    assert header[-3:] == ["grad_norm_sq", "tr_fy", "tr_fx"]


def test_reproducibility_across_runs_and_workers(tmp_path):
    outs = []
    for name, workers in (("a", 1), ("b", 1), ("c", 3)):
        d = tmp_path / name
        cfg = RunConfig(case="identity", out_dir=str(d), workers=workers, **FAST)
        run(cfg)
        outs.append(d)
    ref_curve = (outs[0] / "curve.csv").read_bytes()
    ref_report = (outs[0] / "report.json").read_bytes()
    ref_density = (outs[0] / "density.csv").read_bytes()
    for d in outs[1:]:
        assert (d / "curve.csv").read_bytes() == ref_curve
        assert (d / "report.json").read_bytes() == ref_report
        assert (d / "density.csv").read_bytes() == ref_density


def test_discrete_oracle_case(tmp_path):
    cfg = RunConfig(case="discrete-oracle", out_dir=str(tmp_path))
    report, code = run(cfg)
    assert code == 0
    assert report["instances"] == 3 * 2**6
    assert report["violations"] == 0
    assert not (tmp_path / "curve.csv").exists()
    assert (tmp_path / "report.json").exists()


def test_run_case_sho_fast():
    report = run_case(RunConfig(case="sho", **FAST))
    assert report["all_bounds_satisfied"]
    assert report["tr_fx"] == pytest.approx(30300.0)
    assert report["tr_fy"] < report["tr_fx"]
    assert report["gradient_fd_check"]["max_rel_err"] < 0.02
    norms = [r["grad_norm_sq"] for r in report["rows"]]
    assert max(norms) <= report["tr_fy"]


def test_run_case_beam_fast():
    # small ensemble, explicit perturbation list: exercises the 2-D density
    # path, ensemble-normalised performance, and the paired-run machinery
    db = [0.0047, 0.0, 0.0, 0.0]  # 0.01 * sigma_E on mu_E only
    report = run_case(
        RunConfig(
            case="beam",
            n_samples=1500,
            percentiles=[25.0, 50.0, 75.0],
            perturbations=[db, [v * -1 for v in db]],
        )
    )
    assert report["all_bounds_satisfied"]
    assert report["tr_fx"] == pytest.approx(3 / 0.47**2 + 3 / 0.2**2)
    assert report["tr_fy"] < report["tr_fx"]
    assert len(report["perturbations"]) == 2
    assert report["perturbations"][0]["db"] == db
    assert all(p["violations_fx"] + p["violations_fy"] == 0 for p in report["perturbations"])
    assert report["kl_consistency"] is None  # no all-positive vector supplied
    assert report["density"]["mass"] > 0.98
    assert report["direction"] == "above"


def test_verify_passes_and_mutation_fails(capsys):
    assert verify(n_samples=4000, cases=("identity",)) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out
    # a corrupted score sign must trip the gradient/finite-difference check
    assert verify(n_samples=4000, cases=("identity",), _negate_scores=True) == 1
    out = capsys.readouterr().out
    assert "[FAIL] identity: gradient vs finite differences" in out


def test_cli_print_config_round_trip(capsys):
    assert main(["print-config", "--case", "beam", "--samples", "5000"]) == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["case"] == "beam"
    assert cfg["n_samples"] == 5000
    RunConfig.from_dict(cfg)  # validates


def test_cli_run_with_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"case": "identity", **FAST}))
    code = main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "curve.csv").exists()
    assert "bounds_satisfied=True" in capsys.readouterr().out


def test_cli_flag_overrides_config_file(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"case": "identity", "seed": 1, **FAST}))
    code = main(["run", "--config", str(cfg_path), "--seed", "2", "--out", str(tmp_path / "out")])
    assert code == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["provenance"]["seed"] == 2


def test_cli_rejects_invalid_config(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"case": "identity", "bogus_key": 1}))
    with pytest.raises(SystemExit) as exc:
        main(["run", "--config", str(cfg_path)])
    assert exc.value.code == 2


def test_cli_verify_subcommand_exit_zero():
    assert main(["verify", "--samples", "4000", "--case", "identity"]) == 0


def test_cli_verify_discrete_oracle_runs_theorem_suites(capsys):
    assert main(["verify", "--case", "discrete-oracle"]) == 0
    out = capsys.readouterr().out
    assert "discrete simplex oracle" in out
    assert "identity:" not in out  # no sampled case needed


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "probsens.cli", "print-config"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["case"] == "identity"


def test_exit_nonzero_on_bound_violation(monkeypatch):
    # force a violation by shrinking the reported input information
    real_fim = ps.InputModel.fim

    def tiny_fim(self):
        return ps.FisherMatrix(real_fim(self).matrix * 1e-9)

    monkeypatch.setattr(ps.InputModel, "fim", tiny_fim)
    report, code = run(RunConfig(case="identity", **FAST))
    assert code == 1
    assert not report["all_bounds_satisfied"]

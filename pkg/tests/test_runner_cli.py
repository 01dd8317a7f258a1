import json
import math
import os

import numpy as np
import pytest

from geomoment.cli import main
from geomoment.errors import ConfigError
from geomoment.matrixio import read_matrix, write_matrix, write_moments
from geomoment.embedding import GaussianMoments
from geomoment.runner import (
    build_run_config,
    load_run_config,
    parse_config_text,
    run_experiment,
    sweep_dim,
)

BLOBS_CFG = """
# desk-scale covariate-shift run
task = blobs
seed = 0
dist_kind = airm
beta = 0.1
eta = 0.02
epochs = 4
batch_source = 64
batch_target = 64
learn_rate = 1e-3
optimizer = adam
embed_dim = 2
encoder = 16:relu,2:identity
blobs.num_classes = 3
blobs.samples_per_class = 80
blobs.input_dim = 4
blobs.center_radius = 2.2
blobs.cov_scale = 1.4
blobs.rotation = 1.0471975511965976
blobs.translation = 0,0,-1.8,1.2
"""

DENOISE_CFG = """
task = denoise
seed = 1
dist_kind = hilbert
beta = 0.1
eta = 1e-8
epochs = 3
batch_source = 64
batch_target = 64
learn_rate = 2e-3
embed_dim = 2
encoder = 12:tanh,2:identity
decoder = 12:tanh
denoise.length = 32
denoise.samples = 120
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_roundtrip_and_types():
    parsed = parse_config_text(BLOBS_CFG)
    assert parsed["task"] == "blobs"
    assert parsed["encoder"] == ((16, "relu"), (2, "identity"))
    assert parsed["blobs.translation"] == (0.0, 0.0, -1.8, 1.2)
    cfg = build_run_config(parsed, out_dir="unused")
    assert cfg.model_spec.embed_dim == 2
    assert cfg.blobs.num_classes == 3


def test_unknown_key_reports_line():
    bad = BLOBS_CFG + "blobs.radius_typo = 3\n"
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text(bad, path="bad.cfg")


def test_wrong_task_key_rejected():
    bad = BLOBS_CFG + "denoise.length = 64\n"
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text(bad)


def test_missing_required_key():
    with pytest.raises(ConfigError, match="missing required key"):
        parse_config_text("task = blobs\nseed = 0\n")


def test_bad_value_diagnostics():
    bad = BLOBS_CFG.replace("beta = 0.1", "beta = fast")
    with pytest.raises(ConfigError, match="bad value for 'beta'"):
        parse_config_text(bad)


def test_eta_inf_parses():
    text = BLOBS_CFG.replace("eta = 0.02", "eta = inf")
    cfg = build_run_config(parse_config_text(text), out_dir="unused")
    assert math.isinf(cfg.train_cfg.eta)


def test_run_experiment_outputs(tmp_path):
    cfg = load_run_config(write_cfg(tmp_path, BLOBS_CFG), out_dir=str(tmp_path / "run"))
    row, report = run_experiment(cfg)
    assert os.path.exists(tmp_path / "run" / "report.csv")
    assert os.path.exists(tmp_path / "run" / "summary.json")
    metrics = (tmp_path / "run" / "metrics.csv").read_text().strip().split("\n")
    assert len(metrics) == 2  # header + one row
    with open(tmp_path / "run" / "summary.json") as fh:
        summary = json.load(fh)
    assert summary["task"] == "blobs"
    assert "wall_time_s" in summary
    assert row["epochs"] == 4


def test_run_experiment_deterministic_csv(tmp_path):
    c1 = load_run_config(write_cfg(tmp_path, BLOBS_CFG), out_dir=str(tmp_path / "a"))
    c2 = load_run_config(write_cfg(tmp_path, BLOBS_CFG), out_dir=str(tmp_path / "b"))
    run_experiment(c1)
    run_experiment(c2)
    assert (tmp_path / "a" / "report.csv").read_text() == (
        tmp_path / "b" / "report.csv"
    ).read_text()
    assert (tmp_path / "a" / "metrics.csv").read_text() == (
        tmp_path / "b" / "metrics.csv"
    ).read_text()


def test_denoise_run(tmp_path):
    cfg = load_run_config(write_cfg(tmp_path, DENOISE_CFG), out_dir=str(tmp_path / "d"))
    row, report = run_experiment(cfg)
    assert 0.0 < row["target_metric"] < 1.0
    assert report.epochs == 3


def test_metrics_accumulate_across_runs(tmp_path):
    shared = str(tmp_path / "metrics.csv")
    for seed in (0, 1, 2):
        cfg = load_run_config(
            write_cfg(tmp_path, BLOBS_CFG), seed=seed, out_dir=str(tmp_path / f"r{seed}")
        )
        run_experiment(cfg, metrics_path=shared)
    lines = open(shared).read().strip().split("\n")
    assert len(lines) == 4  # header + 3 completed runs


def test_sweep_dim_cardinality_and_flags(tmp_path):
    text = BLOBS_CFG + "sweep.kinds = airm,mean_euclid\nsweep.seeds = 0,1\n"
    cfg = load_run_config(write_cfg(tmp_path, text), out_dir=str(tmp_path / "sweep"))
    rows, best = sweep_dim(cfg, [2, 3, 32])
    assert len(rows) == 3 * 2 * 2
    flagged = [r for r in rows if not r["regime_ok"]]
    assert {r["dim"] for r in flagged} == {32}  # 64 < 10 * 32
    assert all(math.isnan(r["target_metric"]) for r in flagged)
    assert os.path.exists(tmp_path / "sweep" / "sweep.csv")
    assert set(best) <= {"airm", "mean_euclid"}
    for kind, info in best.items():
        assert info["best_dim"] in (2, 3)


# ----------------------------------------------------------------------- CLI


def test_cli_embed_and_dist(tmp_path, capsys):
    mpath = tmp_path / "moments.txt"
    write_moments(mpath, GaussianMoments(mean=[1.0], cov=[[1.0]]))
    out = tmp_path / "P.txt"
    assert main(["embed", str(mpath), "--out", str(out)]) == 0
    P = read_matrix(out)
    assert np.array_equal(P, [[2.0, 1.0], [1.0, 1.0]])

    p1 = tmp_path / "p1.txt"
    p2 = tmp_path / "p2.txt"
    write_matrix(p1, np.eye(2))
    write_matrix(p2, np.diag([4.0, 1.0]))
    assert main(["dist", str(p1), str(p2), "--kind", "hilbert"]) == 0
    printed = capsys.readouterr().out.strip()
    assert float(printed) == pytest.approx(np.log(4.0), abs=1e-15)
    assert len(printed) >= 17  # 17 significant digits


def test_cli_oracle_fr(capsys):
    assert main(["oracle-fr", "0", "1", "0", str(np.e)]) == 0
    val = float(capsys.readouterr().out.strip())
    assert val == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_cli_bound_check(tmp_path):
    out = tmp_path / "bound.csv"
    assert main(["bound-check", "--seed", "3", "--pairs", "200", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "k,seed,tv,hilbert,rhs,slack,holds"
    assert len(lines) == 201
    assert all(ln.split(",")[6] == "1" for ln in lines[1:])


def test_cli_gradcheck(capsys):
    assert main(["gradcheck", "--seed", "1", "--kind", "coral_frob"]) == 0
    out = capsys.readouterr().out
    assert "max relative error" in out


def test_cli_train_and_config_error(tmp_path, capsys):
    cfg_path = write_cfg(tmp_path, BLOBS_CFG)
    assert main(["train", "--config", cfg_path, "--out", str(tmp_path / "cli_run")]) == 0
    assert os.path.exists(tmp_path / "cli_run" / "report.csv")

    bad = write_cfg(tmp_path, BLOBS_CFG + "typo_key = 1\n", name="bad.cfg")
    assert main(["train", "--config", bad]) == 2
    assert "config error" in capsys.readouterr().err


def test_cli_sweep(tmp_path):
    cfg_path = write_cfg(tmp_path, BLOBS_CFG)
    code = main(
        ["sweep-dim", "--config", cfg_path, "--dims", "2,3", "--out", str(tmp_path / "sw")]
    )
    assert code == 0
    lines = (tmp_path / "sw" / "sweep.csv").read_text().strip().split("\n")
    assert len(lines) == 3

import csv
import json
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qoverlap.cli import DEFAULTS, load_config, main, seed_mix
from qoverlap.errors import ConfigurationError, SolverError
from qoverlap.seeding import mix_array

SMALL = {
    "overlap": "theta = [0.3, 1.0, 2.0]\nphi = [0.1, 1.2, 2.5]\nn_shots = 500\n",
    "classify": 'kind = "spherical"\nn = 24\nn_train = 12\nevaluator = "experiment"\nn_shots = 200\n'
                "resamples = 5\npool = 400\n[noise]\ncrosstalk = true\n",
    "spsa": "n_targets = 2\niterations = 6\n[noise]\ncrosstalk = true\n",
    "cv-overlap": "L = 2000\n",
    "complexity": "eps = [0.1]\n",
    "calibrate": "n_points = 16\nnoise_std = 0.001\n",
    "dataset": "n = 10\n",
}


def run_cli(tmp_path, command, config_text, *extra, name="out"):
    cfg = tmp_path / f"{command}-{name}.toml"
    cfg.write_text(config_text)
    out = tmp_path / name
    code = main([command, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


def data_files(out):
    return {p: (out / p).read_bytes() for p in sorted(os.listdir(out)) if p != "manifest.json"}


# ---------------------------------------------------------------- replay


@pytest.mark.parametrize("command", sorted(SMALL))
def test_replay_byte_identical(tmp_path, command):
    c1, a = run_cli(tmp_path, command, SMALL[command], "--seed", "42", name="a")
    c2, b = run_cli(tmp_path, command, SMALL[command], "--seed", "42", name="b")
    assert c1 == c2 == 0
    assert data_files(a) == data_files(b)


def test_manifest_digests(tmp_path):
    import hashlib

    code, out = run_cli(tmp_path, "classify", SMALL["classify"])
    assert code == 0
    man = json.loads((out / "manifest.json").read_text())
    assert set(man["files"]) == set(data_files(out))
    for name, digest in man["files"].items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
    assert man["config"]["noise"]["crosstalk"] is True
    assert man["config"]["C"] == 0.8  # defaults are echoed
    assert {"version", "seeds", "wall_seconds", "command"} <= set(man)


def test_jobs_do_not_change_results(tmp_path):
    text = SMALL["classify"]
    _, a = run_cli(tmp_path, "classify", text, name="serial")
    _, b = run_cli(tmp_path, "classify", text, "--jobs", "2", name="parallel")
    assert data_files(a) == data_files(b)


def test_seed_changes_results(tmp_path):
    _, a = run_cli(tmp_path, "dataset", SMALL["dataset"], "--seed", "1", name="a")
    _, b = run_cli(tmp_path, "dataset", SMALL["dataset"], "--seed", "2", name="b")
    assert data_files(a) != data_files(b)


# ---------------------------------------------------------------- formats


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_overlap_identical_noiseless(tmp_path):
    code, out = run_cli(tmp_path, "overlap", "theta = [0.4, 1.1, 5.0]\nphi = [0.4, 1.1, 5.0]\n")
    est = json.loads((out / "estimate.json").read_text())
    assert code == 0 and est["value"] == 1.0 and est["n_odd"] == 0
    assert set(est) == {"value", "n_total", "n_odd", "R", "eps_at_delta", "exact"}
    tally = read_csv(out / "tally.csv")
    assert tally[0] == ["mode_k", "mode_l", "count"] and len(tally) == 1 + 28


def test_overlap_batch_csv(tmp_path):
    code, out = run_cli(tmp_path, "overlap", "batch = 20\nn_shots = 1000\n", "--format", "csv")
    rows = read_csv(out / "scatter.csv")
    assert code == 0
    assert rows[0] == ["pair", "theta1", "theta2", "theta3", "phi1", "phi2", "phi3", "exact", "estimate", "error"]
    err = np.array([float(r[-1]) for r in rows[1:]])
    assert len(err) == 20 and np.mean(np.abs(err) <= 0.06) >= 2 / 3


def test_complexity_table(tmp_path):
    code, out = run_cli(tmp_path, "complexity", "eps = [0.1, 0.05]\ndelta = [0.3333333333333333]\n",
                        "--format", "csv")
    rows = read_csv(out / "complexity.csv")
    assert rows[0] == ["eps", "delta", "hoeffding", "helstrom", "cv_N"]
    assert rows[1][2:4] == ["359", "3"]
    h = [int(r[2]) / int(r[3]) for r in rows[1:]]
    assert code == 0 and float(rows[2][4]) > float(rows[1][4])
    assert h[0] == pytest.approx(h[1], rel=0.1)


def test_classify_outputs(tmp_path):
    code, out = run_cli(tmp_path, "classify", 'kind = "separate"\nn = 40\nn_train = 20\n')
    assert code == 0
    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics["test_accuracy"] == 1.0
    model = json.loads((out / "model.json").read_text())
    assert set(model) == {"beta", "b", "C", "support_indices"}
    assert read_csv(out / "dataset.csv")[0] == ["theta1", "theta2", "theta3", "label"]
    k = np.loadtxt(out / "kernel.csv", delimiter=",")
    assert k.shape == (40, 40) and np.array_equal(k, k.T)


def test_classify_bootstrap_metrics(tmp_path):
    code, out = run_cli(tmp_path, "classify", SMALL["classify"], "--format", "csv")
    rows = read_csv(out / "metrics.csv")
    rec = dict(zip(rows[0], rows[1]))
    assert code == 0 and rec["bootstrap_resamples"] == "5"
    assert 0 <= float(rec["bootstrap_std"]) <= 1


def test_classify_from_dataset_file(tmp_path):
    _, d = run_cli(tmp_path, "dataset", 'kind = "overlapping"\nn = 30\n', name="data")
    code, out = run_cli(tmp_path, "classify", f'dataset = "{d / "dataset.csv"}"\nn_train = 15\n', name="cls")
    assert code == 0
    assert (out / "dataset.csv").read_bytes() == (d / "dataset.csv").read_bytes()


def test_spsa_outputs(tmp_path):
    code, out = run_cli(tmp_path, "spsa", "n_targets = 3\niterations = 0\n")
    assert code == 0
    for r in range(3):
        rows = read_csv(out / f"trace_{r:03d}.csv")
        assert rows[0] == ["iter", "theta1", "theta2", "theta3", "cost_plus", "cost_minus", "true_infidelity"]
        assert len(rows) == 2
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_runs"] == 3 and len(summary["median_curve"]) == 1


def test_cv_overlap_estimate(tmp_path):
    code, out = run_cli(tmp_path, "cv-overlap", "L = 100000\nkappa = 8.0\n")
    est = json.loads((out / "estimate.json").read_text())
    assert code == 0 and abs(est["value"] - np.exp(-1)) <= 0.02


def test_cv_overlap_identical_states(tmp_path):
    text = 'L = 50000\n[state_a]\nvariant = "fock"\nn = [1]\n[state_b]\nvariant = "fock"\nn = [1]\n'
    code, out = run_cli(tmp_path, "cv-overlap", text)
    assert code == 0 and abs(json.loads((out / "estimate.json").read_text())["value"] - 1) <= 0.05


def test_cv_plan_sweep_grows_exponentially(tmp_path):
    code, out = run_cli(tmp_path, "cv-overlap", 'mode = "plan"\nM_values = [1, 2, 3, 4, 5, 6]\n', "--format", "csv")
    rows = read_csv(out / "plan.csv")
    assert code == 0 and rows[0][:1] == ["M"]
    log_n = np.array([float(r[rows[0].index("log_N")]) for r in rows[1:]])
    steps = np.diff(log_n)
    assert np.all(steps > 0) and steps.min() > 1.0


def test_calibrate(tmp_path):
    code, out = run_cli(tmp_path, "calibrate", "n_points = 32\n")
    summary = json.loads((out / "calibration_summary.json").read_text())
    assert code == 0 and summary["max_abs_error"] < 1e-9
    assert summary["n_internal"] == 45 and summary["n_sigma"] == 28


# ---------------------------------------------------------------- errors and config


def test_unknown_key_exit_2(tmp_path, capsys):
    code, _ = run_cli(tmp_path, "overlap", "n_shot = 10\n")
    assert code == 2 and "n_shot" in capsys.readouterr().err


def test_unknown_nested_key_reports_path(tmp_path, capsys):
    code, _ = run_cli(tmp_path, "overlap", "[noise]\ncrosstalks = true\n")
    assert code == 2 and "noise.crosstalks" in capsys.readouterr().err


def test_wrong_type_exit_2(tmp_path):
    assert run_cli(tmp_path, "overlap", 'n_shots = "many"\n')[0] == 2


def test_bad_toml_exit_2(tmp_path):
    assert run_cli(tmp_path, "dataset", "n = = 3\n")[0] == 2


def test_domain_config_error_exit_2(tmp_path):
    assert run_cli(tmp_path, "dataset", 'kind = "moons"\n')[0] == 2


def test_capacity_exit_4(tmp_path):
    text = 'n = 8\nn_train = 4\nevaluator = "experiment"\nn_shots = 100\nresamples = 2\npool = 50\n'
    assert run_cli(tmp_path, "classify", text)[0] == 4


def test_numerical_exit_3(tmp_path, monkeypatch):
    import sys

    cli_main = sys.modules["qoverlap.cli.main"]
    def boom(*args, **kwargs):
        raise SolverError("no convergence", residual=1.0)

    monkeypatch.setattr(cli_main, "classify", boom)
    assert run_cli(tmp_path, "classify", "")[0] == 3


def test_load_config_defaults_and_override():
    cfg = load_config("spsa", None, {"seed": 9})
    assert cfg["seed"] == 9 and cfg["iterations"] == 500 and cfg["noise"]["eta"] == 0.01
    assert set(DEFAULTS) == {"overlap", "classify", "spsa", "cv-overlap", "complexity", "calibrate", "dataset"}
    with pytest.raises(ConfigurationError):
        load_config("spsa", None, {"seed": -1})


def test_missing_config_file(tmp_path):
    assert main(["dataset", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path)]) == 2


# ---------------------------------------------------------------- seeding


def test_mix_identity_and_order():
    assert seed_mix(12345) == 12345
    assert seed_mix(7, 1, 2) != seed_mix(7, 2, 1)
    assert seed_mix(7, 1) != seed_mix(7, 1, 0)


def test_mix_golden_values():
    # pinned so seeds stay identical across platforms and releases
    assert seed_mix(0, 1, 2) == 15671754871817308195
    assert seed_mix(12345, 7) == 1854750571148733687
    assert seed_mix(2**64 - 1, 0) == 3303439293501059696


@given(st.integers(0, 2**64 - 1), st.lists(st.integers(0, 2**32), max_size=4))
def test_mix_array_matches_scalar(base, idx):
    vec = mix_array(base, *[np.array([i]) for i in idx]) if idx else mix_array(base)
    assert int(np.ravel(vec)[0]) == seed_mix(base, *idx)


def test_no_collisions_on_million_pairs():
    i, j = np.meshgrid(np.arange(1000, dtype=np.uint64), np.arange(1000, dtype=np.uint64), indexing="ij")
    seeds = mix_array(20240611, i, j).ravel()
    assert len(np.unique(seeds)) == 10**6

"""Command-line experiment runner.

Every subcommand resolves a config (defaults, then ``--config``, then flags),
writes plain data files into ``--out`` and finishes with ``manifest.json``
listing the resolved config, derived seeds, timing and a sha256 digest of
every file. Data files contain no timestamps, so identical configs and seeds
replay byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time

import numpy as np

from .. import __version__
from ..chip.calibration import SimulatedChip, calibrate_chip, true_residuals
from ..chip.circuit import DEFAULT_QUDIT, qudit_overlap
from ..chip.crosstalk import CrosstalkModel
from ..cv.montecarlo import HypersphereSpec, distributed_plan, mc_overlap
from ..cv.states import state_from_descriptor
from ..errors import CapacityError, ConfigurationError, NumericalError, OverlapError
from ..overlap.estimators import (DEFAULT_DELTA, ParityTally, bunching_probability, coincidence_estimator,
                                  helstrom_lower_bound, hoeffding_samples)
from ..overlap.experiment import odd_mask, sample_coincidences
from ..qml.datasets import Dataset, gen_dataset
from ..qml.kernel import kernel_to_csv
from ..qml.online import SpsaConfig, run_learning_tasks, summarize_traces
from ..qml.pipeline import classify
from ..seeding import mix
from .config import load_config

EXIT_CONFIG, EXIT_NUMERICAL, EXIT_CAPACITY = 2, 3, 4
TWO_PI = 2 * np.pi


def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class Output:
    """Serialised writer into one directory; remembers every file for the manifest."""

    def __init__(self, directory, fmt):
        self.dir = directory
        self.fmt = fmt
        self.files = {}
        os.makedirs(directory, exist_ok=True)

    def text(self, name, content):
        data = content.encode()
        with open(os.path.join(self.dir, name), "wb") as fh:
            fh.write(data)
        self.files[name] = hashlib.sha256(data).hexdigest()
        return name

    def csv(self, name, header, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])
        return self.text(name, buf.getvalue())

    def json(self, name, obj):
        return self.text(name, json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def table(self, stem, header, rows):
        """A table in the configured format: CSV, or JSON as a list of records."""
        if self.fmt == "csv":
            return self.csv(f"{stem}.csv", header, rows)
        return self.json(f"{stem}.json", [dict(zip(header, [_plain(v) for v in r])) for r in rows])

    def record(self, stem, obj):
        """A flat record: a JSON object, or a one-row CSV."""
        if self.fmt == "csv":
            keys = sorted(obj)
            return self.csv(f"{stem}.csv", keys, [[obj[k] for k in keys]])
        return self.json(f"{stem}.json", {k: _plain(v) for k, v in obj.items()})


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def _noise(cfg):
    n = cfg["noise"]
    if not n["crosstalk"]:
        return None, float(n["visibility"])
    return CrosstalkModel(tuple(n["k"]), n["eta"], n["eps"], n["chip_seed"]), float(n["visibility"])


def _phases(v, key):
    a = np.asarray(v, dtype=float)
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise ConfigurationError(f"config key {key!r} must be three finite phases")
    return a


def cmd_overlap(cfg, out, jobs):
    ct, vis = _noise(cfg)
    seed = cfg["seed"]
    R = bunching_probability(DEFAULT_QUDIT)
    if cfg["n_shots"] < 1:
        raise ConfigurationError("config key 'n_shots' must be positive")
    if cfg["batch"] == 0:
        theta, phi = _phases(cfg["theta"], "theta"), _phases(cfg["phi"], "phi")
        pairs, counts = sample_coincidences(theta, phi, cfg["n_shots"], ct, vis, seed)
        tally = ParityTally(int(cfg["n_shots"]), int(counts[odd_mask(pairs)].sum()))
        est = coincidence_estimator(tally, R)
        out.record("estimate", {**est.to_dict(DEFAULT_DELTA), "exact": qudit_overlap(theta, phi)})
        out.csv("tally.csv", ["mode_k", "mode_l", "count"], [(k, l, c) for (k, l), c in zip(pairs, counts)])
        return {"shots": seed}
    rng = np.random.default_rng(mix(seed, 0))
    rows = []
    for b in range(cfg["batch"]):
        theta, phi = rng.uniform(0, TWO_PI, 3), rng.uniform(0, TWO_PI, 3)
        pairs, counts = sample_coincidences(theta, phi, cfg["n_shots"], ct, vis, mix(seed, 1, b))
        est = coincidence_estimator(ParityTally(int(cfg["n_shots"]), int(counts[odd_mask(pairs)].sum())), R)
        exact = qudit_overlap(theta, phi)
        rows.append([b, *theta, *phi, exact, est.value, est.value - exact])
    header = ["pair", "theta1", "theta2", "theta3", "phi1", "phi2", "phi3", "exact", "estimate", "error"]
    out.table("scatter", header, rows)
    return {"pairs": mix(seed, 0), "shots": "mix(seed, 1, pair)"}


def cmd_classify(cfg, out, jobs):
    ct, vis = _noise(cfg)
    seed = cfg["seed"]
    if cfg["dataset"]:
        try:
            with open(cfg["dataset"]) as fh:
                data = Dataset.from_csv(fh.read(), kind="file")
        except OSError as exc:
            raise ConfigurationError(f"cannot read dataset {cfg['dataset']}: {exc.strerror}") from None
    else:
        data = gen_dataset(cfg["kind"], cfg["n"], seed)
    res = classify(data, cfg["n_train"], cfg["split_seed"], seed, cfg["evaluator"], cfg["n_shots"], cfg["C"],
                   ct, vis, cfg["resamples"], cfg["pool"], jobs=jobs)
    out.text("dataset.csv", data.to_csv())
    out.text("kernel.csv", kernel_to_csv(res.K))
    out.text("model.json", res.model.to_json() + "\n")
    out.record("metrics", res.metrics())
    return {"dataset": seed, "kernel_base": mix(seed, 1), "split": cfg["split_seed"]}


def cmd_spsa(cfg, out, jobs):
    ct, _ = _noise(cfg)
    shots = cfg["shots_per_eval"] or None
    config = SpsaConfig(cfg["a"], cfg["A"], cfg["alpha"], cfg["gamma"], cfg["iterations"], shots, 0,
                        cfg["t"] or None, cfg["gradient_reps"])
    traces = run_learning_tasks(cfg["n_targets"], config, ct, cfg["seed"], jobs=jobs)
    for r, tr in enumerate(traces):
        out.text(f"trace_{r:03d}.csv", tr.to_csv())
    s = summarize_traces(traces)
    out.json("summary.json", s)
    rows = [(k, s["median_curve"][k], s["q1_curve"][k], s["q3_curve"][k]) for k in range(len(s["median_curve"]))]
    out.csv("infidelity.csv", ["iter", "median", "q1", "q3"], rows)
    return {f"task_{r}": mix(cfg["seed"], r, 1) for r in range(cfg["n_targets"])}


def _plan_row(M, eps, delta, kappa, sigma_L, c):
    p = distributed_plan(eps, delta, HypersphereSpec(M, kappa), sigma_L, c)
    return [M, eps, delta, kappa, sigma_L, p.eps_tilde, p.L, p.N, p.log_N]


PLAN_HEADER = ["M", "eps", "delta", "kappa", "sigma_L", "eps_tilde", "L", "N", "log_N"]


def cmd_cv_overlap(cfg, out, jobs):
    if cfg["mode"] == "plan":
        rows = [_plan_row(M, cfg["eps"], cfg["delta"], cfg["kappa"], cfg["sigma_L"], cfg["c"])
                for M in cfg["M_values"]]
        out.table("plan", PLAN_HEADER, rows)
        return {}
    if cfg["mode"] != "estimate":
        raise ConfigurationError("config key 'mode' must be 'estimate' or 'plan'")
    a, b = state_from_descriptor(cfg["state_a"]), state_from_descriptor(cfg["state_b"])
    spec = HypersphereSpec(a.modes, cfg["kappa"])
    res = mc_overlap(a, b, spec, cfg["L"], cfg["chi_noise"], seed=cfg["seed"])
    out.record("estimate", {"value": res.value, "imag": res.imag, "sigma_L": res.sigma_L,
                            "stderr": res.stderr, "L": res.L, "M": a.modes, "kappa": cfg["kappa"]})
    # the estimated spread and the worst case |f| <= 1, which bounds sigma_L by 1
    rows = [_plan_row(a.modes, cfg["eps"], cfg["delta"], cfg["kappa"], s, cfg["c"]) + [src]
            for s, src in ((max(res.sigma_L, 1e-300), "estimated"), (1.0, "bound"))]
    out.table("plan", PLAN_HEADER + ["sigma_source"], rows)
    return {"points": cfg["seed"]}


def cmd_complexity(cfg, out, jobs):
    rows = []
    spec = HypersphereSpec(cfg["M"], cfg["kappa"])
    for delta in cfg["delta"]:
        for eps in cfg["eps"]:
            cv = distributed_plan(eps, delta, spec, cfg["sigma_L"], cfg["c"])
            rows.append([eps, delta, hoeffding_samples(eps, delta), helstrom_lower_bound(eps, delta), cv.N])
    out.table("complexity", ["eps", "delta", "hoeffding", "helstrom", "cv_N"], rows)
    return {}


def cmd_calibrate(cfg, out, jobs):
    chip = SimulatedChip.random(cfg["seed"], cfg["residual_scale"], cfg["dc_scale"], cfg["noise_std"])
    found = calibrate_chip(chip, cfg["n_points"])
    truth = true_residuals(chip)
    rows = []
    for (i, j), v in sorted(found.internal.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        rows.append([i, j, "internal", truth.internal[(i, j)], v, _wrapped_error(v, truth.internal[(i, j)])])
    for (i, j), v in sorted(found.sigma.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        rows.append([i, j, "sigma", truth.sigma[(i, j)], v, _wrapped_error(v, truth.sigma[(i, j)])])
    out.table("calibration", ["i", "j", "kind", "true", "estimate", "error"], rows)
    errs = np.abs([r[-1] for r in rows])
    out.record("calibration_summary", {"n_internal": len(found.internal), "n_sigma": len(found.sigma),
                                       "max_abs_error": float(errs.max()), "rms_error": float(np.sqrt(np.mean(errs**2)))})
    return {"chip": cfg["seed"]}


def _wrapped_error(a, b):
    return float(np.angle(np.exp(1j * (a - b))))


def cmd_dataset(cfg, out, jobs):
    out.text("dataset.csv", gen_dataset(cfg["kind"], cfg["n"], cfg["seed"]).to_csv())
    return {"dataset": cfg["seed"]}


COMMANDS = {
    "overlap": (cmd_overlap, "simulated two-qudit overlap experiment"),
    "classify": (cmd_classify, "quantum-kernel SVM on a synthetic or given dataset"),
    "spsa": (cmd_spsa, "online learning of random targets"),
    "cv-overlap": (cmd_cv_overlap, "phase-space Monte-Carlo overlap and sample plans"),
    "complexity": (cmd_complexity, "sample-complexity table"),
    "calibrate": (cmd_calibrate, "simulated phase calibration of a random chip"),
    "dataset": (cmd_dataset, "write a synthetic dataset"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML config file")
    common.add_argument("--seed", type=int, metavar="U64", help="run seed (overrides config)")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    common.add_argument("--format", choices=("csv", "json"), help="format of tables and records")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    parser = argparse.ArgumentParser(prog="qoverlap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def run(command, cfg, out_dir, jobs=1):
    """Execute ``command`` with a resolved config; returns the manifest dict."""
    if jobs < 1:
        raise ConfigurationError("--jobs must be positive")
    out = Output(out_dir, cfg["format"])
    start = time.perf_counter()
    seeds = COMMANDS[command][0](cfg, out, jobs)
    manifest = {
        "command": command,
        "version": __version__,
        "config": cfg,
        "seeds": seeds,
        "jobs": jobs,
        "wall_seconds": time.perf_counter() - start,
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "files": dict(sorted(out.files.items())),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_plain)
        fh.write("\n")
    return manifest


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.command, args.config, {"seed": args.seed, "format": args.format})
        manifest = run(args.command, cfg, args.out, args.jobs)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OverlapError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name in manifest["files"]:
        print(os.path.join(args.out, name))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Experiment runner: flat key=value configs, report files, dim sweeps.

Config files are flat `key = value` lines with `#` comments. Every key
is typed against the schema below and unknown keys are hard errors, so
a typo in a sweep cannot silently fall back to a default.
"""

import dataclasses
import json
import math
import os
import time
from dataclasses import dataclass

from .datasets import BlobsConfig, DenoiseConfig, gen_blobs, gen_denoise
from .errors import ConfigError, RegimeViolation
from .losses import DIST_KINDS
from .matrixio import fmt
from .moments import check_regime
from .network import ACTIVATIONS, ClassifierHead, DecoderHead, ModelSpec
from .trainer import TrainConfig, train

METRICS_HEADER = (
    "task,dist_kind,seed,embed_dim,beta,eta,epochs,"
    "source_metric,target_metric,gate_open_epoch,skipped_steps"
)

SWEEP_HEADER = (
    "dim,kind,seed,regime_ok,ratio,target_metric,source_metric,"
    "det_min,det_mean,det_final,gate_open_epoch"
)


@dataclass(frozen=True)
class RunConfig:
    task: str
    train_cfg: TrainConfig
    model_spec: ModelSpec
    blobs: BlobsConfig = None
    denoise: DenoiseConfig = None
    out_dir: str = "runs/out"
    sweep_kinds: tuple = None
    sweep_seeds: tuple = None
    echo: dict = None  # parsed primitives, for the summary file


def _parse_int(v):
    return int(v, 0)


def _parse_float(v):
    return float(v)


def _parse_floats(v):
    return tuple(float(p) for p in v.split(",") if p.strip())


def _parse_ints(v):
    return tuple(int(p) for p in v.split(",") if p.strip())


def _parse_str(v):
    return v


def _parse_layers(v):
    layers = []
    for part in v.split(","):
        part = part.strip()
        if not part:
            continue
        width, _, act = part.partition(":")
        act = act or "identity"
        if act not in ACTIVATIONS:
            raise ValueError(f"unknown activation {act!r} in layer spec {part!r}")
        layers.append((int(width), act))
    if not layers:
        raise ValueError("empty layer list")
    return tuple(layers)


_GENERAL_KEYS = {
    "task": _parse_str,
    "seed": _parse_int,
    "out_dir": _parse_str,
    "dist_kind": _parse_str,
    "beta": _parse_float,
    "eta": _parse_float,
    "epochs": _parse_int,
    "batch_source": _parse_int,
    "batch_target": _parse_int,
    "learn_rate": _parse_float,
    "optimizer": _parse_str,
    "embed_dim": _parse_int,
    "encoder": _parse_layers,
    "sweep.kinds": _parse_str,
    "sweep.seeds": _parse_ints,
}

_BLOBS_KEYS = {
    "blobs.num_classes": _parse_int,
    "blobs.samples_per_class": _parse_int,
    "blobs.input_dim": _parse_int,
    "blobs.center_radius": _parse_float,
    "blobs.cov_scale": _parse_float,
    "blobs.rotation": _parse_float,
    "blobs.translation": _parse_floats,
}

_DENOISE_KEYS = {
    "denoise.length": _parse_int,
    "denoise.samples": _parse_int,
    "denoise.noise_mean": _parse_float,
    "denoise.noise_std": _parse_float,
    "decoder": _parse_layers,
}

_REQUIRED = (
    "task",
    "seed",
    "dist_kind",
    "beta",
    "eta",
    "epochs",
    "batch_source",
    "batch_target",
    "learn_rate",
    "embed_dim",
    "encoder",
)


def parse_config_text(text, path="<config>"):
    """Parse the flat key=value format into a typed dict."""
    raw = {}
    lines_by_key = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value
        lines_by_key[key] = lineno

    task = raw.get("task")
    if task not in ("blobs", "denoise"):
        raise ConfigError(f"{path}: key 'task' must be blobs or denoise, got {task!r}")
    schema = dict(_GENERAL_KEYS)
    schema.update(_BLOBS_KEYS if task == "blobs" else _DENOISE_KEYS)

    parsed = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"{path}:{lines_by_key[key]}: unknown key {key!r} for task {task!r}")
        try:
            parsed[key] = schema[key](value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}:{lines_by_key[key]}: bad value for {key!r}: {exc}") from exc
    for key in _REQUIRED:
        if key not in parsed:
            raise ConfigError(f"{path}: missing required key {key!r}")
    return parsed


def build_run_config(parsed, seed=None, out_dir=None):
    """Assemble a RunConfig from parsed keys; seed/out_dir override the file."""
    task = parsed["task"]
    run_seed = seed if seed is not None else parsed["seed"]
    run_out = out_dir if out_dir is not None else parsed.get("out_dir", "runs/out")

    if parsed["dist_kind"] not in DIST_KINDS:
        raise ConfigError(f"dist_kind must be one of {DIST_KINDS}, got {parsed['dist_kind']!r}")
    optimizer = parsed.get("optimizer", "adam")
    try:
        train_cfg = TrainConfig(
            dist_kind=parsed["dist_kind"],
            beta=parsed["beta"],
            eta=parsed["eta"],
            epochs=parsed["epochs"],
            batch_source=parsed["batch_source"],
            batch_target=parsed["batch_target"],
            learn_rate=parsed["learn_rate"],
            seed=run_seed,
            optimizer=optimizer,
        )
    except ValueError as exc:
        raise ConfigError(f"bad training field: {exc}") from exc

    blobs = denoise = None
    try:
        if task == "blobs":
            blobs = BlobsConfig(
                num_classes=parsed.get("blobs.num_classes", 3),
                samples_per_class=parsed.get("blobs.samples_per_class", 500),
                input_dim=parsed.get("blobs.input_dim", 10),
                center_radius=parsed.get("blobs.center_radius", 4.0),
                cov_scale=parsed.get("blobs.cov_scale", 0.8),
                target_rotation=parsed.get("blobs.rotation", 0.0),
                target_translation=parsed.get("blobs.translation"),
                seed=run_seed,
            )
            input_dim = blobs.input_dim
            head = ClassifierHead(num_classes=blobs.num_classes)
        else:
            denoise = DenoiseConfig(
                length=parsed.get("denoise.length", 64),
                samples=parsed.get("denoise.samples", 2000),
                noise_mean=parsed.get("denoise.noise_mean", 0.4),
                noise_std=parsed.get("denoise.noise_std", 0.7),
                seed=run_seed,
            )
            input_dim = denoise.length
            head = DecoderHead(output_dim=denoise.length, layers=parsed.get("decoder", ()))
        model_spec = ModelSpec(
            input_dim=input_dim,
            encoder_layers=parsed["encoder"],
            embed_dim=parsed["embed_dim"],
            head=head,
        )
    except ValueError as exc:
        raise ConfigError(f"bad model/dataset field: {exc}") from exc

    sweep_kinds = None
    if "sweep.kinds" in parsed:
        sweep_kinds = tuple(k.strip() for k in parsed["sweep.kinds"].split(",") if k.strip())
        for k in sweep_kinds:
            if k not in DIST_KINDS:
                raise ConfigError(f"sweep.kinds contains unknown kind {k!r}")

    echo = dict(parsed)
    echo["seed"] = run_seed
    echo["out_dir"] = run_out
    return RunConfig(
        task=task,
        train_cfg=train_cfg,
        model_spec=model_spec,
        blobs=blobs,
        denoise=denoise,
        out_dir=run_out,
        sweep_kinds=sweep_kinds,
        sweep_seeds=parsed.get("sweep.seeds"),
        echo=echo,
    )


def load_run_config(path, seed=None, out_dir=None):
    with open(path) as fh:
        text = fh.read()
    return build_run_config(parse_config_text(text, path), seed=seed, out_dir=out_dir)


def _datasets(cfg):
    if cfg.task == "blobs":
        d = gen_blobs(cfg.blobs)
        return d.source_train, d.target_train, d.source_eval, d.target_eval
    d = gen_denoise(cfg.denoise)
    return d.source_train, d.target_train, d.source_eval, d.target_eval


def append_metrics(path, row):
    write_header = not os.path.exists(path)
    with open(path, "a") as fh:
        if write_header:
            fh.write(METRICS_HEADER + "\n")
        fh.write(
            ",".join(
                [
                    row["task"],
                    row["dist_kind"],
                    str(row["seed"]),
                    str(row["embed_dim"]),
                    fmt(row["beta"]),
                    fmt(row["eta"]),
                    str(row["epochs"]),
                    fmt(row["source_metric"]),
                    fmt(row["target_metric"]),
                    str(row["gate_open_epoch"]),
                    str(row["skipped_steps"]),
                ]
            )
            + "\n"
        )


def run_experiment(cfg, metrics_path=None):
    """Train one configuration, write report.csv / summary.json / metrics.csv."""
    source, target, eval_source, eval_target = _datasets(cfg)
    t0 = time.perf_counter()
    report = train(
        cfg.train_cfg, cfg.model_spec, source, target,
        eval_source=eval_source, eval_target=eval_target,
    )
    wall = time.perf_counter() - t0

    os.makedirs(cfg.out_dir, exist_ok=True)
    with open(os.path.join(cfg.out_dir, "report.csv"), "w") as fh:
        fh.write(report.to_csv_text())

    row = {
        "task": cfg.task,
        "dist_kind": cfg.train_cfg.dist_kind,
        "seed": cfg.train_cfg.seed,
        "embed_dim": cfg.model_spec.embed_dim,
        "beta": cfg.train_cfg.beta,
        "eta": cfg.train_cfg.eta,
        "epochs": cfg.train_cfg.epochs,
        "source_metric": float(report.source_metric[-1]),
        "target_metric": float(report.target_metric[-1]),
        "gate_open_epoch": report.gate_open_epoch,
        "skipped_steps": int(report.skipped_steps.sum()),
    }
    summary = dict(row)
    summary["wall_time_s"] = wall
    summary["config"] = {k: _jsonable(v) for k, v in (cfg.echo or {}).items()}
    with open(os.path.join(cfg.out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")

    append_metrics(metrics_path or os.path.join(cfg.out_dir, "metrics.csv"), row)
    return row, report


def _jsonable(v):
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _with_dim(cfg, dim, kind, seed):
    """Derive a run config with a new embedding width, kind and seed."""
    enc = list(cfg.model_spec.encoder_layers)
    enc[-1] = (dim, enc[-1][1])
    spec = dataclasses.replace(cfg.model_spec, encoder_layers=tuple(enc), embed_dim=dim)
    tc = dataclasses.replace(cfg.train_cfg, dist_kind=kind, seed=seed)
    blobs = dataclasses.replace(cfg.blobs, seed=seed) if cfg.blobs else None
    denoise = dataclasses.replace(cfg.denoise, seed=seed) if cfg.denoise else None
    out = os.path.join(cfg.out_dir, f"d{dim}_{kind}_s{seed}")
    return dataclasses.replace(
        cfg, model_spec=spec, train_cfg=tc, blobs=blobs, denoise=denoise, out_dir=out
    )


def sweep_dim(cfg, dims, out_dir=None):
    """Run the dimensionality sweep and write sweep.csv plus a best-dim summary.

    Dims that violate the 10x batch-size regime are recorded as flagged
    rows with NaN metrics instead of being run.
    """
    out_dir = out_dir or cfg.out_dir
    kinds = cfg.sweep_kinds or (cfg.train_cfg.dist_kind,)
    seeds = cfg.sweep_seeds or (cfg.train_cfg.seed,)
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for dim in dims:
        for kind in kinds:
            for seed in seeds:
                regime = check_regime(cfg.train_cfg.batch_source, dim)
                if not regime.ok:
                    rows.append(
                        {
                            "dim": dim, "kind": kind, "seed": seed,
                            "regime_ok": 0, "ratio": regime.ratio,
                            "target_metric": float("nan"),
                            "source_metric": float("nan"),
                            "det_min": float("nan"), "det_mean": float("nan"),
                            "det_final": float("nan"), "gate_open_epoch": -1,
                        }
                    )
                    continue
                sub = _with_dim(cfg, dim, kind, seed)
                try:
                    _, report = run_experiment(
                        sub, metrics_path=os.path.join(out_dir, "metrics.csv")
                    )
                except RegimeViolation:
                    rows.append(
                        {
                            "dim": dim, "kind": kind, "seed": seed,
                            "regime_ok": 0, "ratio": regime.ratio,
                            "target_metric": float("nan"),
                            "source_metric": float("nan"),
                            "det_min": float("nan"), "det_mean": float("nan"),
                            "det_final": float("nan"), "gate_open_epoch": -1,
                        }
                    )
                    continue
                rows.append(
                    {
                        "dim": dim, "kind": kind, "seed": seed,
                        "regime_ok": 1, "ratio": regime.ratio,
                        "target_metric": float(report.target_metric[-1]),
                        "source_metric": float(report.source_metric[-1]),
                        "det_min": float(report.det_ps.min()),
                        "det_mean": float(report.det_ps.mean()),
                        "det_final": float(report.det_ps[-1]),
                        "gate_open_epoch": report.gate_open_epoch,
                    }
                )

    csv_path = os.path.join(out_dir, "sweep.csv")
    with open(csv_path, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for r in rows:
            fh.write(
                ",".join(
                    [
                        str(r["dim"]), r["kind"], str(r["seed"]), str(r["regime_ok"]),
                        fmt(r["ratio"]), fmt(r["target_metric"]), fmt(r["source_metric"]),
                        fmt(r["det_min"]), fmt(r["det_mean"]), fmt(r["det_final"]),
                        str(r["gate_open_epoch"]),
                    ]
                )
                + "\n"
            )

    higher_better = cfg.task == "blobs"
    best = {}
    for kind in kinds:
        scored = {}
        for r in rows:
            if r["kind"] != kind or not r["regime_ok"]:
                continue
            if not math.isfinite(r["target_metric"]):
                continue
            scored.setdefault(r["dim"], []).append(r["target_metric"])
        if not scored:
            continue
        means = {d: sum(v) / len(v) for d, v in scored.items()}
        pick = max(means, key=means.get) if higher_better else min(means, key=means.get)
        best[kind] = {"best_dim": pick, "mean_target_metric": means[pick]}
    with open(os.path.join(out_dir, "sweep_summary.json"), "w") as fh:
        json.dump(best, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows, best

"""Experiment configuration, seeded runs, CSV persistence and aggregation."""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import OTCSConfig, RadiusConfig, estc_run, run_linucb, run_otcs
from .env import Instance, RegretTrace, make_benchmark_instance
from .posterior import SamplerConfig
from .prior import RelaxedPrior
from .soids import SoidsConfig, run_soids

ALGORITHM_CODES = {"soids": 0, "linucb": 1, "estc": 2, "otcs": 3}
INSTANCE_CODE = 15


def derive_seed(master: int, d: int, code: int, rep: int) -> int:
    """Injective in (d, code, rep) for d, rep < 10^6 and code < 16."""
    if not (0 <= d < 10**6 and 0 <= code < 16 and 0 <= rep < 10**6):
        raise ValueError("seed components out of range")
    return ((master * 10**6 + d) * 16 + code) * 10**6 + rep


@dataclass
class LinUCBConfig:
    delta: float = 0.01
    S: float = 10.0
    lambda_ridge: float = 1.0


@dataclass
class ESTCConfig:
    T1: dict = field(default_factory=lambda: {20: 50, 40: 100, 100: 100})
    explore: str = "uniform"

    def t1_for(self, d: int, T: int) -> int:
        if d in self.T1:
            return min(self.T1[d], T)
        return min(self.T1[min(self.T1, key=lambda k: (abs(k - d), k))], T)


@dataclass
class ExperimentConfig:
    dims: list = field(default_factory=lambda: [20, 40, 100])
    K: int = 200
    T: int = 1000
    repetitions: int = 10
    seed: int = 0
    algorithms: list = field(default_factory=lambda: ["soids", "otcs", "estc", "linucb"])
    output_dir: str = "results"
    workers: int = 1
    soids: SoidsConfig = field(default_factory=SoidsConfig)
    otcs: OTCSConfig = field(default_factory=OTCSConfig)
    linucb: LinUCBConfig = field(default_factory=LinUCBConfig)
    estc: ESTCConfig = field(default_factory=ESTCConfig)

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.T < 1:
            raise ValueError("T must be at least 1")
        unknown = set(self.algorithms) - set(ALGORITHM_CODES)
        if unknown:
            raise ValueError(f"unknown algorithm(s): {sorted(unknown)}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["estc"]["T1"] = {str(k): v for k, v in self.estc.T1.items()}
        return out

    def result_hash(self) -> str:
        """Hash of everything that affects results (not paths or workers)."""
        data = self.to_dict()
        data.pop("output_dir")
        data.pop("workers")
        data["version"] = __version__
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------- config parsing

def _bool(v: str) -> bool:
    v = v.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _list(v: str, cast=str) -> list:
    return [cast(x.strip()) for x in v.split(",") if x.strip()]


def _optional_float(v: str):
    return None if v.strip().lower() in ("", "none", "auto") else float(v)


_SCHEMA = {
    "experiment": {"dims": lambda v: _list(v, int), "k": int, "t": int, "repetitions": int, "seed": int,
                   "algorithms": _list, "output_dir": str, "workers": int},
    "soids": {"eta": _optional_float, "schedule": str, "diagnostics": _bool},
    "soids.sampler": {"m": int, "burn_in": int, "thin": int, "step_size": float,
                      "target_acceptance": float, "augment": _bool},
    "otcs": {"eta": float},
    "otcs.sampler": {"m": int, "burn_in": int, "thin": int, "step_size": float,
                     "target_acceptance": float, "augment": _bool},
    "otcs.radius": {"kind": str, "delta": float, "s": float, "lambda_ridge": float, "c": float, "value": float},
    "prior": {"rho1": float, "rho0": float, "beta": float},
    "linucb": {"delta": float, "s": float, "lambda_ridge": float},
    "estc": {"t1": lambda v: {int(k): int(x) for k, x in (p.split(":") for p in _list(v))}, "explore": str},
}

_FIELD_NAMES = {"k": "K", "t": "T", "m": "M", "s": "S", "t1": "T1"}


def parse_config(text: str, overrides=()) -> ExperimentConfig:
    """Parse INI text; ``overrides`` are ``section.key=value`` strings with
    the last dot separating section and key (``soids.sampler.M=200``)."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not of the form section.key=value")
        path, value = item.split("=", 1)
        if "." not in path:
            raise ValueError(f"override {item!r} needs a section")
        section, key = path.strip().rsplit(".", 1)
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, value.strip())

    values: dict[str, dict] = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ValueError(f"unknown config section [{section}]")
        for key, raw in cp.items(section):
            if key not in _SCHEMA[section]:
                raise ValueError(f"unknown key {key!r} in [{section}]")
            try:
                values.setdefault(section, {})[_FIELD_NAMES.get(key, key)] = _SCHEMA[section][key](raw)
            except ValueError as exc:
                raise ValueError(f"[{section}] {key}: {exc}") from None

    prior = RelaxedPrior(**values.get("prior", {}))
    soids = SoidsConfig(sampler=SamplerConfig(**values.get("soids.sampler", {})), prior=prior,
                        **values.get("soids", {}))
    otcs = OTCSConfig(sampler=SamplerConfig(**values.get("otcs.sampler", {})), prior=prior,
                      radius=RadiusConfig(**values.get("otcs.radius", {})), **values.get("otcs", {}))
    estc_vals = values.get("estc", {})
    estc = ESTCConfig(**estc_vals)
    if estc.explore not in ("uniform", "design"):
        raise ValueError("[estc] explore must be 'uniform' or 'design'")
    return ExperimentConfig(soids=soids, otcs=otcs, linucb=LinUCBConfig(**values.get("linucb", {})),
                            estc=estc, **values.get("experiment", {}))


def load_config(path, overrides=()) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


# ---------------------------------------------------------------- runs

def build_instance(cfg: ExperimentConfig, d: int, rep: int) -> Instance:
    rng = np.random.default_rng(derive_seed(cfg.seed, d, INSTANCE_CODE, rep))
    return make_benchmark_instance(d, cfg.K, rng)


def run_algorithm(name: str, instance: Instance, T: int, cfg: ExperimentConfig, seed: int,
                  log_stream=None) -> RegretTrace:
    if name == "soids":
        trace, _ = run_soids(instance, T, cfg.soids, seed, log_stream=log_stream)
        return trace
    rng = np.random.default_rng(seed)
    if name == "linucb":
        c = cfg.linucb
        return run_linucb(instance, T, rng, c.delta, c.S, c.lambda_ridge)
    if name == "estc":
        explore = None
        if cfg.estc.explore == "design":
            from .policy import exploratory_design
            explore = exploratory_design(instance.actions).mu
        return estc_run(instance, T, cfg.estc.t1_for(instance.d, T), rng, explore=explore)
    if name == "otcs":
        return run_otcs(instance, T, cfg.otcs, rng)
    raise ValueError(f"unknown algorithm {name!r}")


def trace_csv(trace: RegretTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["round", "gap", "cumulative_regret"])
    for t, (g, c) in enumerate(zip(trace.gaps, trace.cumulative), start=1):
        w.writerow([t, repr(float(g)), repr(float(c))])
    return buf.getvalue()


def read_trace_csv(path) -> np.ndarray:
    """Cumulative-regret column of a per-run CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([float(r["cumulative_regret"]) for r in rows])


def run_path(root: Path, d: int, algo: str, rep: int) -> Path:
    return root / "runs" / f"d{d}" / algo / f"rep{rep:03d}.csv"


def aggregate_path(root: Path, d: int, algo: str) -> Path:
    return root / "aggregate" / f"d{d}_{algo}.csv"


def _execute(args) -> tuple[str, float]:
    cfg, d, algo, rep, root, verbose = args
    seed = derive_seed(cfg.seed, d, ALGORITHM_CODES[algo], rep)
    instance = build_instance(cfg, d, rep)
    path = run_path(Path(root), d, algo, rep)
    path.parent.mkdir(parents=True, exist_ok=True)
    start = time.time()
    if algo == "soids":
        log_path = path.with_suffix(".jsonl")
        with open(log_path, "w", encoding="utf-8") as log:
            trace = run_algorithm(algo, instance, cfg.T, cfg, seed, log_stream=log)
    else:
        trace = run_algorithm(algo, instance, cfg.T, cfg, seed)
    path.write_text(trace_csv(trace), encoding="utf-8")
    if verbose:
        print(f"d={d} {algo} rep={rep} final={trace.cumulative[-1]:.1f} ({time.time() - start:.1f}s)",
              file=sys.stderr, flush=True)
    return str(path), time.time() - start


def aggregate(curves: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-round mean and population standard deviation over repetitions."""
    curves = np.atleast_2d(curves)
    return curves.mean(axis=0), curves.std(axis=0, ddof=0)


def write_aggregate(path: Path, d: int, algo: str, mean: np.ndarray, std: np.ndarray) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "algorithm", "round", "mean", "std"])
    for t, (m, s) in enumerate(zip(mean, std), start=1):
        w.writerow([d, algo, t, repr(float(m)), repr(float(s))])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")


def _check_writable(root: Path) -> None:
    root.mkdir(parents=True, exist_ok=True)
    probe = root / ".write_probe"
    with open(probe, "w") as fh:
        fh.write("")
    probe.unlink()


def run_experiment(cfg: ExperimentConfig, verbose: bool = False) -> dict:
    """Run every (d, algorithm, repetition), write per-run and aggregate CSVs
    and ``manifest.json``; returns the manifest."""
    root = Path(cfg.output_dir)
    _check_writable(root)
    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    tasks = [(cfg, d, algo, rep, str(root), verbose)
             for d in cfg.dims for algo in cfg.algorithms for rep in range(cfg.repetitions)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            durations = list(pool.map(_execute, tasks))
    else:
        durations = [_execute(t) for t in tasks]

    finals = {}
    for d in cfg.dims:
        for algo in cfg.algorithms:
            curves = np.array([read_trace_csv(run_path(root, d, algo, r)) for r in range(cfg.repetitions)])
            mean, std = aggregate(curves)
            write_aggregate(aggregate_path(root, d, algo), d, algo, mean, std)
            finals[f"d{d}/{algo}"] = {"mean": float(mean[-1]), "std": float(std[-1])}

    manifest = {
        "config_hash": cfg.result_hash(),
        "config": cfg.to_dict(),
        "software_version": __version__,
        "seeds": [
            {"d": d, "algorithm": algo, "repetition": rep,
             "seed": derive_seed(cfg.seed, d, ALGORITHM_CODES[algo], rep),
             "instance_seed": derive_seed(cfg.seed, d, INSTANCE_CODE, rep)}
            for d in cfg.dims for algo in cfg.algorithms for rep in range(cfg.repetitions)
        ],
        "final_regret": finals,
        "run_seconds": {p: round(s, 3) for p, s in durations},
        "started": started,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "completed": True,
    }
    tmp = root / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    os.replace(tmp, root / "manifest.json")
    return manifest


def load_manifest(root) -> dict | None:
    path = Path(root) / "manifest.json"
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cached_experiment(cfg: ExperimentConfig, verbose: bool = False) -> dict:
    """Reuse a completed run in ``cfg.output_dir`` when its config hash
    matches, otherwise run the experiment."""
    manifest = load_manifest(cfg.output_dir)
    if manifest and manifest.get("completed") and manifest.get("config_hash") == cfg.result_hash():
        return manifest
    return run_experiment(cfg, verbose=verbose)

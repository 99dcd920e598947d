"""Deterministic constrainedness sweeps.

Each (gamma point, sample) pair gets its own seed from ``derive_seed``, so
rows depend only on the ``SweepSpec``: the order in which samples run, and how many
worker processes run them, cannot change the output.
"""
from __future__ import annotations

import dataclasses
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import isotonic_regression

from .generators import GeneratorSpec, NeighborhoodSpec, RichSpec, UniformSpec, as_fraction, generate
from .network import build_graph, network_metrics
from .solver import SolverLimits, Status, solve

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (Steele, Lea & Flood 2014)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, point_idx: int, sample_idx: int) -> int:
    """``mix(mix(mix(master + G) ^ i + G) ^ j + G)`` with ``G`` the 64-bit
    golden-ratio increment; each stage is a bijection of its input."""
    if point_idx < 0 or sample_idx < 0:
        raise ValueError("indices must be non-negative")
    h = mix64(master + _GOLDEN)
    h = mix64((h ^ point_idx) + _GOLDEN)
    return mix64((h ^ sample_idx) + _GOLDEN)


def median(values: Iterable[float]) -> float:
    vals = list(values)
    if not vals:
        raise ValueError("median of empty sequence")
    return float(statistics.median(vals))


@dataclass(frozen=True)
class SweepSpec:
    template: GeneratorSpec
    gamma_start: Fraction
    gamma_stop: Fraction
    gamma_step: Fraction
    samples_per_point: int = 100
    limits: SolverLimits = SolverLimits()
    master_seed: int = 0
    compute_network_metrics: bool = False
    # wall-clock timings are the one non-reproducible column; off => nan
    timing: bool = True

    def __post_init__(self):
        for name in ("gamma_start", "gamma_stop", "gamma_step"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.gamma_step <= 0:
            raise ValueError("gamma_step must be positive")
        if self.gamma_start > self.gamma_stop:
            raise ValueError("gamma_start must not exceed gamma_stop")
        if self.gamma_start < 0:
            raise ValueError("gamma must be non-negative")
        if self.samples_per_point < 1:
            raise ValueError("samples_per_point must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master seed must be an unsigned 64-bit integer")

    def gammas(self) -> list[Fraction]:
        count = int((self.gamma_stop - self.gamma_start) // self.gamma_step) + 1
        return [self.gamma_start + i * self.gamma_step for i in range(count)]


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    n_samples: int
    pct_sat: float
    median_backtracks: float
    median_elapsed_ms: float
    n_timeouts: int
    mean_C: float | None = None
    mean_L: float | None = None
    mean_mu: float | None = None


@dataclass
class _Sample:
    status: Status
    backtracks: int
    elapsed_ms: float
    metrics: tuple[float, float, float] | None = field(default=None)


def _run_point(spec: SweepSpec, point_idx: int, gamma: Fraction) -> list[_Sample]:
    template = dataclasses.replace(spec.template, gamma=gamma)
    out = []
    for j in range(spec.samples_per_point):
        f = generate(template, derive_seed(spec.master_seed, point_idx, j))
        res = solve(f, spec.limits)
        metrics = None
        if spec.compute_network_metrics:
            m = network_metrics(build_graph(f), with_centrality=False)
            metrics = (m.C, m.L, m.mu)
        out.append(_Sample(res.status, res.backtracks, res.elapsed_ms, metrics))
    return out


def _nanmean(xs: Sequence[float]) -> float:
    vals = [x for x in xs if not math.isnan(x)]
    return sum(vals) / len(vals) if vals else math.nan


def _aggregate(spec: SweepSpec, gamma: Fraction, samples: list[_Sample]) -> SweepRow:
    done = [s for s in samples if s.status is not Status.TIMEOUT]
    n = len(samples)
    n_sat = sum(1 for s in samples if s.status is Status.SAT)
    med_bt = median(s.backtracks for s in done) if done else math.nan
    med_ms = math.nan
    if spec.timing and done:
        med_ms = median(s.elapsed_ms for s in done)
    extra = {}
    if spec.compute_network_metrics:
        extra = {
            "mean_C": _nanmean([s.metrics[0] for s in samples]),
            "mean_L": _nanmean([s.metrics[1] for s in samples]),
            "mean_mu": _nanmean([s.metrics[2] for s in samples]),
        }
    return SweepRow(
        gamma=float(gamma),
        n_samples=n,
        pct_sat=100.0 * n_sat / n,
        median_backtracks=med_bt,
        median_elapsed_ms=med_ms,
        n_timeouts=n - len(done),
        **extra,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """One row per gamma point, in gamma order.

    With ``workers > 1`` points are farmed out to a process pool; results
    are collected by point index, so the output is identical.
    """
    gammas = spec.gammas()
    if workers <= 1:
        per_point = [_run_point(spec, i, g) for i, g in enumerate(gammas)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_point, spec, i, g) for i, g in enumerate(gammas)]
            per_point = [fut.result() for fut in futures]
    return [_aggregate(spec, g, s) for g, s in zip(gammas, per_point)]


class NoCrossingError(ValueError):
    pass


def crossover_estimate(rows: Sequence[SweepRow], level: float = 50.0) -> float:
    """Gamma at which the satisfiable percentage falls through ``level``.

    ``pct_sat`` is first replaced by its decreasing isotonic fit; the result
    linearly interpolates between the two points that straddle ``level``. A
    plateau exactly at ``level`` resolves to its midpoint.
    """
    if len(rows) < 2:
        raise NoCrossingError("need at least two rows")
    gam = np.array([r.gamma for r in rows], dtype=np.float64)
    order = np.argsort(gam, kind="stable")
    gam = gam[order]
    y = np.array([rows[i].pct_sat for i in order], dtype=np.float64)
    fit = isotonic_regression(y, increasing=False).x
    if not (fit[0] >= level and fit[-1] <= level) or fit[0] == fit[-1]:
        raise NoCrossingError(f"pct_sat does not cross {level}% in [{gam[0]:g}, {gam[-1]:g}]")
    at = np.flatnonzero(fit == level)
    if at.size:
        return float((gam[at[0]] + gam[at[-1]]) / 2.0)
    i = int(np.flatnonzero(fit > level)[-1])
    y0, y1 = fit[i], fit[i + 1]
    return float(gam[i] + (y0 - level) / (y0 - y1) * (gam[i + 1] - gam[i]))


BASE_COLUMNS = ["gamma", "n_samples", "pct_sat", "median_backtracks", "median_elapsed_ms", "n_timeouts"]
NET_COLUMNS = ["mean_C", "mean_L", "mean_mu"]


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.6f}"


def format_csv(rows: Sequence[SweepRow]) -> str:
    with_net = any(r.mean_C is not None for r in rows)
    cols = BASE_COLUMNS + (NET_COLUMNS if with_net else [])
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(getattr(r, c)) for c in cols) + "\n")
    return buf.getvalue()


def write_csv(rows: Sequence[SweepRow], destination) -> None:
    text = format_csv(rows)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, newline="\n")


def parse_csv(text: str) -> list[SweepRow]:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty CSV")
    cols = lines[0].split(",")
    if cols[: len(BASE_COLUMNS)] != BASE_COLUMNS:
        raise ValueError(f"unexpected header {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        vals = dict(zip(cols, line.split(",")))
        kw = {c: float(v) for c, v in vals.items()}
        kw["n_samples"] = int(vals["n_samples"])
        kw["n_timeouts"] = int(vals["n_timeouts"])
        rows.append(SweepRow(**kw))
    return rows


# ---- key=value sweep configs ---------------------------------------------

CONFIG_KEYS = {
    "dist": str,
    "vars": int,
    "k": int,
    "copies": int,
    "bucket": int,
    "p": float,
    "gamma_start": str,
    "gamma_stop": str,
    "gamma_step": str,
    "samples": int,
    "timeout_ms": float,
    "max_backtracks": int,
    "seed": int,
    "metrics": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "timing": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def parse_config(text: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise ValueError(f"line {lineno}: bad value for {key}: {value!r}") from None
    return out


def spec_from_config(cfg: dict) -> SweepSpec:
    """Build a SweepSpec from parsed config keys (see ``CONFIG_KEYS``)."""
    missing = [k for k in ("dist", "vars", "gamma_start", "gamma_stop") if k not in cfg]
    if missing:
        raise ValueError("missing required keys: " + ", ".join(missing))
    dist = cfg["dist"]
    v, k = cfg["vars"], cfg.get("k", 3)
    start = as_fraction(cfg["gamma_start"])
    if dist == "uniform":
        if "copies" in cfg or "bucket" in cfg or "p" in cfg:
            raise ValueError("copies/bucket/p do not apply to the uniform distribution")
        template = UniformSpec(v, k, start)
    elif dist == "rich":
        if "bucket" in cfg or "p" in cfg:
            raise ValueError("bucket/p do not apply to the rich distribution")
        template = RichSpec(v, k, start, copies=cfg.get("copies", 1))
    elif dist == "nbhd":
        if "copies" in cfg:
            raise ValueError("copies does not apply to the nbhd distribution")
        template = NeighborhoodSpec(v, k, start, bucket_size=cfg.get("bucket", 10), p=cfg.get("p", 0.3))
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    return SweepSpec(
        template=template,
        gamma_start=start,
        gamma_stop=cfg["gamma_stop"],
        gamma_step=cfg.get("gamma_step", "0.1"),
        samples_per_point=cfg.get("samples", 100),
        limits=SolverLimits(cfg.get("timeout_ms", 0), cfg.get("max_backtracks", 0)),
        master_seed=cfg.get("seed", 0),
        compute_network_metrics=cfg.get("metrics", False),
        timing=cfg.get("timing", True),
    )

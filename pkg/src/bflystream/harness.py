"""Seeded experiment runner: trials, snapshots, relative error, CSV output.

A trial is fully determined by (config, seed) apart from the timing
columns: the seed fixes the estimator's hash keys, the StreamSpec fixes the
element sequence.  Trials are independent, so an experiment can fan seeds
out over worker processes.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimators import (
    DeabcBucket,
    DeabcPq,
    ExactCounter,
    Fable,
    OpCounters,
)
from .graph import exact_butterfly_count
from .hashing import HashConfig, mix64
from .streams import StreamSpec, dedup_arrays, iter_edges, materialize

ALGORITHMS = ("deabc-pq", "deabc-bucket", "fable", "exact")

_PRIORITY_TAG = 0xB7E151628AED2A6A
_POSITION_TAG = 0x243F6A8885A308D3


def hash_config_for(seed: int, sample_size: int) -> HashConfig:
    """Derive the two independent hash keys for a trial seed."""
    return HashConfig(
        priority_seed=mix64(seed ^ _PRIORITY_TAG),
        position_seed=mix64(seed ^ _POSITION_TAG),
        num_buckets=sample_size,
    )


def make_estimator(algorithm: str, sample_size: int, cfg: HashConfig):
    if algorithm == "deabc-pq":
        return DeabcPq(sample_size, cfg)
    if algorithm == "deabc-bucket":
        return DeabcBucket(sample_size, cfg)
    if algorithm == "fable":
        return Fable(sample_size, cfg)
    if algorithm == "exact":
        return ExactCounter()
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class EstimateSnapshot:
    elements: int
    distinct_estimate: float
    butterfly_estimate: float
    counters: OpCounters


@dataclass(frozen=True)
class TrialResult:
    seed: int
    algorithm: str
    sample_size: int
    elements: int
    final_estimate: float
    distinct_estimate: float
    exact_count: int | None
    relative_error: float | None
    edges_per_second: float
    snapshots: list[EstimateSnapshot]
    counters: OpCounters


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    sample_size: int
    seeds: tuple[int, ...]
    stream: StreamSpec
    snapshots: int = 100
    output: str | None = None
    ground_truth: str | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm != "exact" and self.sample_size < 16:
            raise ValueError("sample size must be at least 16")
        if self.snapshots < 1:
            raise ValueError("need at least one snapshot")
        if not self.seeds:
            raise ValueError("need at least one seed")


def relative_error_pct(exact: float, estimate: float) -> float:
    return abs(exact - estimate) / exact * 100.0


def stream_digest(us: np.ndarray, vs: np.ndarray) -> str:
    """Content digest of the distinct edge set (order-insensitive)."""
    pairs = np.stack([us, vs], axis=1)
    pairs = np.unique(pairs, axis=0)
    return hashlib.sha256(pairs.tobytes()).hexdigest()


def _sidecar_path(source: str) -> str | None:
    if source.startswith("random:"):
        return None
    return source + ".exact.json"


def exact_count_for(
    us: np.ndarray, vs: np.ndarray, sidecar: str | None = None
) -> int:
    """Exact butterfly count of the stream's distinct edges, sidecar-cached."""
    digest = stream_digest(us, vs)
    cache: dict[str, int] = {}
    if sidecar and os.path.exists(sidecar):
        with open(sidecar, "r", encoding="ascii") as fh:
            cache = json.load(fh)
        if digest in cache:
            return cache[digest]
    du, dv = dedup_arrays(us, vs)
    count = exact_butterfly_count(iter_edges(du, dv))
    if sidecar:
        cache[digest] = count
        with open(sidecar, "w", encoding="ascii") as fh:
            json.dump(cache, fh)
    return count


def _snapshot_boundaries(n: int, t: int) -> list[int]:
    bounds = sorted({max(1, (n * k) // t) for k in range(1, t + 1)} | {n})
    return bounds if n > 0 else [0]


def run_trial(
    cfg: ExperimentConfig,
    seed: int,
    stream: tuple[np.ndarray, np.ndarray] | None = None,
    exact_count: int | None = None,
) -> TrialResult:
    """Run one seeded pass over the stream, recording evenly spaced snapshots."""
    us, vs = stream if stream is not None else materialize(cfg.stream)
    n = len(us)
    estimator = make_estimator(cfg.algorithm, cfg.sample_size, hash_config_for(seed, cfg.sample_size))

    snapshots: list[EstimateSnapshot] = []
    elapsed = 0.0
    prev = 0
    for bound in _snapshot_boundaries(n, cfg.snapshots):
        t0 = time.perf_counter()
        estimator.consume(us[prev:bound], vs[prev:bound])
        elapsed += time.perf_counter() - t0
        prev = bound
        snapshots.append(
            EstimateSnapshot(
                elements=bound,
                distinct_estimate=estimator.distinct_estimate(),
                butterfly_estimate=estimator.estimate(),
                counters=estimator.counters().copy(),
            )
        )

    if exact_count is None:
        if cfg.algorithm == "exact":
            exact_count = int(estimator.estimate())
        elif cfg.ground_truth is not None:
            with open(cfg.ground_truth, "r", encoding="ascii") as fh:
                exact_count = int(fh.read().strip())

    final = estimator.estimate()
    rel = relative_error_pct(exact_count, final) if exact_count else None
    return TrialResult(
        seed=seed,
        algorithm=cfg.algorithm,
        sample_size=cfg.sample_size,
        elements=n,
        final_estimate=final,
        distinct_estimate=estimator.distinct_estimate(),
        exact_count=exact_count,
        relative_error=rel,
        edges_per_second=n / elapsed if elapsed > 0 else float("inf"),
        snapshots=snapshots,
        counters=estimator.counters(),
    )


def _trial_worker(payload: tuple[ExperimentConfig, int, int | None]) -> TrialResult:
    cfg, seed, exact = payload
    return run_trial(cfg, seed, exact_count=exact)


def csv_columns(num_snapshots: int) -> list[str]:
    return [
        "seed",
        "algorithm",
        "M",
        "elements",
        "distinct_estimate",
        "estimate",
        "estimate_stddev",
        "exact",
        "rel_err_pct",
        "edges_per_sec",
        "peak_edge_slots",
        "peak_aux_slots",
    ] + [f"snapshot_{i}" for i in range(num_snapshots)]


def _trial_row(r: TrialResult) -> dict:
    row = {
        "seed": r.seed,
        "algorithm": r.algorithm,
        "M": r.sample_size,
        "elements": r.elements,
        "distinct_estimate": repr(r.distinct_estimate),
        "estimate": repr(r.final_estimate),
        "estimate_stddev": "",
        "exact": "" if r.exact_count is None else r.exact_count,
        "rel_err_pct": "" if r.relative_error is None else repr(r.relative_error),
        "edges_per_sec": f"{r.edges_per_second:.1f}",
        "peak_edge_slots": r.counters.peak_edge_slots,
        "peak_aux_slots": r.counters.peak_aux_slots,
    }
    for i, snap in enumerate(r.snapshots):
        row[f"snapshot_{i}"] = repr(snap.butterfly_estimate)
    return row


def _summary_row(results: list[TrialResult]) -> dict:
    ests = np.array([r.final_estimate for r in results])
    rels = [r.relative_error for r in results if r.relative_error is not None]
    row = {
        "seed": "summary",
        "algorithm": results[0].algorithm,
        "M": results[0].sample_size,
        "elements": results[0].elements,
        "distinct_estimate": repr(float(np.mean([r.distinct_estimate for r in results]))),
        "estimate": repr(float(ests.mean())),
        "estimate_stddev": repr(float(ests.std(ddof=1))) if len(ests) > 1 else repr(0.0),
        "exact": "" if results[0].exact_count is None else results[0].exact_count,
        "rel_err_pct": repr(float(np.mean(rels))) if rels else "",
        "edges_per_sec": f"{np.mean([r.edges_per_second for r in results]):.1f}",
        "peak_edge_slots": max(r.counters.peak_edge_slots for r in results),
        "peak_aux_slots": max(r.counters.peak_aux_slots for r in results),
    }
    n_snaps = len(results[0].snapshots)
    for i in range(n_snaps):
        row[f"snapshot_{i}"] = repr(
            float(np.mean([r.snapshots[i].butterfly_estimate for r in results]))
        )
    return row


def run_experiment(cfg: ExperimentConfig) -> list[TrialResult]:
    """Run every seed, write per-trial rows plus one summary row as CSV."""
    us, vs = materialize(cfg.stream)
    exact: int | None = None
    if cfg.ground_truth is not None:
        with open(cfg.ground_truth, "r", encoding="ascii") as fh:
            exact = int(fh.read().strip())
    elif cfg.algorithm != "exact":
        exact = exact_count_for(us, vs, _sidecar_path(cfg.stream.source))

    if cfg.threads > 1:
        payloads = [(cfg, seed, exact) for seed in cfg.seeds]
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_trial_worker, payloads))
    else:
        results = [
            run_trial(cfg, seed, stream=(us, vs), exact_count=exact)
            for seed in cfg.seeds
        ]

    if cfg.output:
        write_csv(cfg.output, results)
    return results


def write_csv(path: str, results: list[TrialResult]) -> None:
    n_snaps = max(len(r.snapshots) for r in results)
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=csv_columns(n_snaps))
        writer.writeheader()
        for r in results:
            writer.writerow(_trial_row(r))
        writer.writerow(_summary_row(results))

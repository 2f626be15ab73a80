"""Command-line experiment runner (installed as bfly-bench)."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .harness import ALGORITHMS, ExperimentConfig, run_experiment
from .streams import StreamSpec


def parse_sample_size(text: str) -> int:
    """Accept plain integers or 2^k notation."""
    if text.startswith("2^"):
        return 2 ** int(text[2:])
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bfly-bench",
        description="Seeded butterfly-counting trials over a bipartite edge stream.",
    )
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument(
        "--sample-size",
        type=parse_sample_size,
        default=2**10,
        help="edge budget M; accepts 2^k notation (default 2^10)",
    )
    p.add_argument("--seeds", type=int, default=1, help="run seeds 0..N-1")
    p.add_argument("--seed-list", help="comma-separated explicit seed list")
    p.add_argument(
        "--input",
        required=True,
        help="edge-list path (.gz ok) or random:<nl>x<nr>:<m>:<seed> descriptor",
    )
    p.add_argument("--dup-ratio", type=float, default=0.0, help="duplicate ratio lambda")
    p.add_argument(
        "--dedup-first",
        action="store_true",
        help="drop repeat occurrences from the source before injecting duplicates",
    )
    p.add_argument("--shuffle-seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=None, help="cap on stream elements")
    p.add_argument("--snapshots", type=int, default=100)
    p.add_argument("--output", help="CSV output path")
    p.add_argument("--ground-truth", help="file holding the exact butterfly count")
    p.add_argument("--threads", type=int, default=1, help="worker processes for trials")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed_list:
        seeds = tuple(int(tok) for tok in args.seed_list.split(","))
    else:
        seeds = tuple(range(args.seeds))
    cfg = ExperimentConfig(
        algorithm=args.algorithm,
        sample_size=args.sample_size,
        seeds=seeds,
        stream=StreamSpec(
            source=args.input,
            dup_ratio=args.dup_ratio,
            shuffle_seed=args.shuffle_seed,
            limit=args.limit,
            dedup_first=args.dedup_first,
        ),
        snapshots=args.snapshots,
        output=args.output,
        ground_truth=args.ground_truth,
        threads=args.threads,
    )
    try:
        results = run_experiment(cfg)
    except (OSError, ValueError) as exc:
        print(f"bfly-bench: error: {exc}", file=sys.stderr)
        return 1

    ests = np.array([r.final_estimate for r in results])
    line = (
        f"{cfg.algorithm} M={cfg.sample_size} trials={len(results)} "
        f"estimate={ests.mean():.6g}"
    )
    if len(results) > 1:
        line += f" +/- {ests.std(ddof=1):.3g}"
    rels = [r.relative_error for r in results if r.relative_error is not None]
    if rels:
        line += f" rel_err={np.mean(rels):.4g}%"
    line += f" throughput={np.mean([r.edges_per_second for r in results]):.3g} edges/s"
    print(line)
    if cfg.output:
        print(f"wrote {cfg.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

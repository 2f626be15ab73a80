"""Edge-stream ingestion, synthetic generation, and duplicate injection.

Streams are held as a pair of uint64 arrays (left ids, right ids); Edge
objects are materialized at the API boundary.  All randomness is drawn
exclusively through random.Random().random(), the one generator method
with a cross-version reproducibility guarantee, so seeded streams replay
bit-identically.
"""
from __future__ import annotations

import gzip
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import Edge, edge

import math
import random


@dataclass(frozen=True)
class StreamSpec:
    """A replayable stream: source, duplicate ratio, shuffle seed, length cap.

    dup_ratio = 0 means pass-through in source order; dup_ratio > 0 runs
    geometric duplicate injection followed by a global shuffle.  dedup_first
    drops repeat occurrences from the source before injecting, which is the
    protocol for sweeping the ratio on datasets that already carry
    duplicates.
    """

    source: str
    dup_ratio: float = 0.0
    shuffle_seed: int = 0
    limit: int | None = None
    dedup_first: bool = False

    def __post_init__(self) -> None:
        if self.dup_ratio < 0:
            raise ValueError("dup_ratio must be non-negative")


def parse_stream(path) -> Iterator[Edge]:
    """Yield edges from a whitespace-separated edge list (KONECT style).

    Lines starting with '%' or '#' are comments; the first two integer
    tokens are left and right id, anything after (weights, timestamps) is
    ignored.  Transparently decompresses .gz files.
    """
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped[0] in "%#":
                continue
            tokens = stripped.split()
            if len(tokens) < 2:
                raise ValueError(f"{path}:{lineno}: expected at least 2 columns")
            try:
                u_id = int(tokens[0])
                v_id = int(tokens[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer id in {tokens[:2]}") from exc
            yield edge(u_id, v_id)


def edges_to_arrays(edges: Iterable[Edge]) -> tuple[np.ndarray, np.ndarray]:
    pairs = [e.ids() for e in edges]
    if not pairs:
        return np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.uint64)
    arr = np.asarray(pairs, dtype=np.uint64)
    return arr[:, 0].copy(), arr[:, 1].copy()


def iter_edges(us: np.ndarray, vs: np.ndarray) -> Iterator[Edge]:
    for u_id, v_id in zip(us.tolist(), vs.tolist()):
        yield edge(u_id, v_id)


def write_edge_file(path, us: np.ndarray, vs: np.ndarray) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for u_id, v_id in zip(us.tolist(), vs.tolist()):
            fh.write(f"{u_id} {v_id}\n")


def dedup_arrays(us: np.ndarray, vs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Keep the first occurrence of every edge, preserving arrival order."""
    seen: set[tuple[int, int]] = set()
    keep = []
    for i, pair in enumerate(zip(us.tolist(), vs.tolist())):
        if pair not in seen:
            seen.add(pair)
            keep.append(i)
    idx = np.asarray(keep, dtype=np.intp)
    return us[idx], vs[idx]


def _geometric_counts(rng: random.Random, n: int, lam: float) -> list[int]:
    # k ~ Geometric(success 1/(1+lam)) on {1, 2, ...} via inverse transform
    if lam == 0:
        return [1] * n
    log_q = math.log(lam / (1.0 + lam))
    counts = []
    for _ in range(n):
        u = rng.random()
        counts.append(1 + int(math.log(1.0 - u) / log_q))
    return counts


def _fisher_yates_perm(rng: random.Random, n: int) -> np.ndarray:
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return np.asarray(perm, dtype=np.intp)


def inject_duplicates_arrays(
    us: np.ndarray, vs: np.ndarray, lam: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Repeat each occurrence k ~ Geometric(1/(1+lam)) times, then shuffle.

    E[k] = 1 + lam, so lam is the expected fraction of extra occurrences.
    The replication draws and the shuffle consume one seeded generator, so
    the output is a deterministic function of (input, lam, seed).
    """
    if lam < 0:
        raise ValueError("duplication ratio must be non-negative")
    rng = random.Random(seed)
    counts = _geometric_counts(rng, len(us), lam)
    reps = np.asarray(counts, dtype=np.intp)
    out_u = np.repeat(us, reps)
    out_v = np.repeat(vs, reps)
    perm = _fisher_yates_perm(rng, len(out_u))
    return out_u[perm], out_v[perm]


def inject_duplicates(edges: Sequence[Edge], lam: float, seed: int) -> list[Edge]:
    """Edge-object form of inject_duplicates_arrays."""
    us, vs = edges_to_arrays(edges)
    out_u, out_v = inject_duplicates_arrays(us, vs, lam, seed)
    return list(iter_edges(out_u, out_v))


def generate_random_bipartite(
    n_left: int, n_right: int, m: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """m distinct edges drawn uniformly from the n_left x n_right grid."""
    total = n_left * n_right
    if m > total // 2:
        raise ValueError("requested density above 1/2; rejection sampling degrades")
    rng = random.Random(seed)
    seen: set[int] = set()
    order: list[int] = []
    while len(order) < m:
        k = int(rng.random() * total)
        if k not in seen:
            seen.add(k)
            order.append(k)
    idx = np.asarray(order, dtype=np.uint64)
    return idx // np.uint64(n_right), idx % np.uint64(n_right)


def complete_bipartite(n_left: int, n_right: int) -> tuple[np.ndarray, np.ndarray]:
    us, vs = np.meshgrid(
        np.arange(n_left, dtype=np.uint64), np.arange(n_right, dtype=np.uint64), indexing="ij"
    )
    return us.ravel(), vs.ravel()


def matching(n: int, left_offset: int = 0, right_offset: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """n disjoint degree-1 edges: butterfly-free filler."""
    ids = np.arange(n, dtype=np.uint64)
    return ids + np.uint64(left_offset), ids + np.uint64(right_offset)


def _parse_descriptor(desc: str) -> tuple[np.ndarray, np.ndarray]:
    # random:<n_left>x<n_right>:<edges>:<graph_seed>
    parts = desc.split(":")
    if parts[0] != "random" or len(parts) != 4:
        raise ValueError(f"unknown generator descriptor {desc!r}")
    nl, _, nr = parts[1].partition("x")
    return generate_random_bipartite(int(nl), int(nr), int(parts[2]), int(parts[3]))


def load_edge_arrays(source: str) -> tuple[np.ndarray, np.ndarray]:
    """Load a stream source: a file path or a random:NLxNR:M:SEED descriptor."""
    if source.startswith("random:"):
        return _parse_descriptor(source)
    return edges_to_arrays(parse_stream(source))


def materialize(spec: StreamSpec) -> tuple[np.ndarray, np.ndarray]:
    """Resolve a StreamSpec into the concrete element arrays it describes."""
    us, vs = load_edge_arrays(spec.source)
    if spec.dedup_first:
        us, vs = dedup_arrays(us, vs)
    if spec.dup_ratio > 0:
        us, vs = inject_duplicates_arrays(us, vs, spec.dup_ratio, spec.shuffle_seed)
    if spec.limit is not None:
        us, vs = us[: spec.limit], vs[: spec.limit]
    return us, vs

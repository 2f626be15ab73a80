"""Duplicate-edge-aware butterfly counting over bipartite graph streams."""

from .distinct import FmState, fm_observe, kmv_estimate
from .estimators import (
    DeabcBucket,
    DeabcPq,
    DuplicateNaivePq,
    ExactCounter,
    Fable,
    OpCounters,
)
from .graph import (
    Edge,
    SampledSubgraph,
    Side,
    VertexId,
    count_new_butterflies,
    edge,
    exact_butterfly_count,
)
from .hashing import HashConfig, bucket_of, priority_of, rho_of
from .oracle import (
    ButterflyPairStats,
    butterfly_pair_stats,
    chebyshev_band,
    variance_bound_deabc_pq,
    variance_deabc_bucket,
    variance_fable,
)
from .streams import StreamSpec, inject_duplicates, parse_stream

__all__ = [
    "ButterflyPairStats",
    "DeabcBucket",
    "DeabcPq",
    "DuplicateNaivePq",
    "Edge",
    "ExactCounter",
    "Fable",
    "FmState",
    "HashConfig",
    "OpCounters",
    "SampledSubgraph",
    "Side",
    "StreamSpec",
    "VertexId",
    "bucket_of",
    "butterfly_pair_stats",
    "chebyshev_band",
    "count_new_butterflies",
    "edge",
    "exact_butterfly_count",
    "fm_observe",
    "inject_duplicates",
    "kmv_estimate",
    "parse_stream",
    "priority_of",
    "rho_of",
    "variance_bound_deabc_pq",
    "variance_deabc_bucket",
    "variance_fable",
]

"""Deterministic keyed edge hashing.

Every occurrence of the same edge must map to the same priority, bucket
slot, and register value - that is the entire mechanism by which duplicate
stream elements are neutralized.  The hash is pinned bit-for-bit (test
vectors live in tests/data/hash_vectors.txt) so seeded runs reproduce
across platforms, and it has an exactly equivalent numpy form used by the
batch processing path.

Construction: both input words are passed through the 64-bit finalizer of
MurmurHash3 (fmix64), chained by xor.  Priority collisions between
distinct edges (~2^-52 per pair after the float mapping) are an accepted
risk: a collision makes the later edge behave as a duplicate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Edge

_MASK64 = (1 << 64) - 1
_MIX1 = 0xFF51AFD7ED558CCD
_MIX2 = 0xC4CEB9FE1A85EC53
_WORD_SALT = 0x9E3779B97F4A7C15  # golden-ratio offset keeping (u, v) and (v, u) apart

_TWO_NEG53 = 2.0**-53

_N_MIX1 = np.uint64(_MIX1)
_N_MIX2 = np.uint64(_MIX2)
_N33 = np.uint64(33)
_N12 = np.uint64(12)
_N1 = np.uint64(1)


def mix64(z: int) -> int:
    """fmix64: full-avalanche bijection on 64-bit words."""
    z &= _MASK64
    z ^= z >> 33
    z = (z * _MIX1) & _MASK64
    z ^= z >> 33
    z = (z * _MIX2) & _MASK64
    z ^= z >> 33
    return z


def edge_hash64(key: int, u_id: int, v_id: int) -> int:
    """Keyed 64-bit hash of an edge's canonical (left id, right id) encoding."""
    h = mix64(key ^ (u_id & _MASK64))
    return mix64(h ^ ((v_id + _WORD_SALT) & _MASK64))


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized twin of mix64 over uint64 arrays (bit-identical)."""
    z = z.copy()
    z ^= z >> _N33
    z *= _N_MIX1
    z ^= z >> _N33
    z *= _N_MIX2
    z ^= z >> _N33
    return z


def edge_hash64_array(key: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Vectorized twin of edge_hash64 over uint64 arrays (bit-identical)."""
    z = np.uint64(key) ^ us
    z ^= z >> _N33
    z *= _N_MIX1
    z ^= z >> _N33
    z *= _N_MIX2
    z ^= z >> _N33
    z ^= vs + np.uint64(_WORD_SALT)
    z ^= z >> _N33
    z *= _N_MIX1
    z ^= z >> _N33
    z *= _N_MIX2
    z ^= z >> _N33
    return z


def unit_from_hash(h64):
    """Map a 64-bit hash to the open interval (0, 1).

    Uses the top 52 bits as an odd 53-bit integer scaled by 2^-53; every
    step is exact in IEEE754, so scalar and numpy paths agree bit-for-bit
    and the result can never round to 0.0 or 1.0.
    """
    if isinstance(h64, np.ndarray):
        return (((h64 >> _N12) << _N1) | _N1).astype(np.float64) * _TWO_NEG53
    return float((h64 >> 12 << 1) | 1) * _TWO_NEG53


@dataclass(frozen=True)
class HashConfig:
    """Seeds for the two independent hash roles plus the bucket count."""

    priority_seed: int
    position_seed: int
    num_buckets: int

    def __post_init__(self) -> None:
        if self.priority_seed == self.position_seed:
            raise ValueError("priority_seed and position_seed must differ")
        if self.num_buckets < 16:
            raise ValueError("num_buckets must be at least 16")


def priority_of(cfg: HashConfig, e: Edge) -> float:
    """Priority in (0, 1); identical for every occurrence of the same edge."""
    return unit_from_hash(edge_hash64(cfg.priority_seed, e.u.id, e.v.id))


def priority_of_ids(priority_seed: int, u_id: int, v_id: int) -> float:
    return unit_from_hash(edge_hash64(priority_seed, u_id, v_id))


def bucket_of(cfg: HashConfig, e: Edge) -> int:
    return bucket_of_ids(cfg.position_seed, cfg.num_buckets, e.u.id, e.v.id)


def bucket_of_ids(position_seed: int, num_buckets: int, u_id: int, v_id: int) -> int:
    """Uniform slot in [0, num_buckets); modulo bias is ~num_buckets/2^64."""
    return edge_hash64(position_seed, u_id, v_id) % num_buckets


def rho_of(p: float) -> int:
    """-floor(log2 p) for p in (0, 1): geometric with P(rho = j) = 2^-j.

    Computed from the binary exponent (frexp), which is exact and makes the
    coupling p1 < p2 => rho(p1) >= rho(p2) hold without any rounding edge
    cases near powers of two.
    """
    return 1 - math.frexp(p)[1]


def priorities_of_array(priority_seed: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    return unit_from_hash(edge_hash64_array(priority_seed, us, vs))


def buckets_of_array(
    position_seed: int, num_buckets: int, us: np.ndarray, vs: np.ndarray
) -> np.ndarray:
    return edge_hash64_array(position_seed, us, vs) % np.uint64(num_buckets)


def write_test_vectors(path, rows) -> None:
    """Write `<u> <v> <priority_seed> <expected_hash64>` lines."""
    with open(path, "w", encoding="ascii") as fh:
        for u_id, v_id, seed, h in rows:
            fh.write(f"{u_id} {v_id} {seed} {h}\n")


def read_test_vectors(path):
    """Yield (u, v, priority_seed, expected_hash64) tuples from a vector file."""
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u_id, v_id, seed, h = (int(tok) for tok in line.split())
            yield u_id, v_id, seed, h

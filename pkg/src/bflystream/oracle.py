"""Ground-truth machinery: butterfly pair statistics and variance evaluators.

The pair statistics (zeta, delta, eta: unordered butterfly pairs sharing
0, 1, 2 edges) feed the closed-form variance expressions of the three
estimators, which the statistical acceptance tests compare against
Monte-Carlo variance.  Two distinct butterflies can never share three or
more edges, and a pair sharing two edges shares them as a wedge (two edges
with a common endpoint) - otherwise the two butterflies would coincide.
That gives a counting shortcut: per-edge and per-wedge co-membership
tallies replace the quadratic loop over butterfly pairs (the quadratic
classifier survives in the test suite as an oracle for small graphs).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .graph import Edge


@dataclass(frozen=True)
class ButterflyPairStats:
    zeta: int
    delta: int
    eta: int
    total_butterflies: int

    def pair_total(self) -> int:
        c = self.total_butterflies
        return c * (c - 1) // 2


def enumerate_butterflies(edges: Iterable[Edge]) -> list[tuple[int, int, int, int]]:
    """All butterflies as (u1, u2, v1, v2) with u1 < u2 left and v1 < v2 right."""
    left: dict[int, set[int]] = {}
    for e in edges:
        u_id, v_id = e.ids()
        left.setdefault(u_id, set()).add(v_id)
    us = sorted(left)
    out = []
    for i, u1 in enumerate(us):
        n1 = left[u1]
        for u2 in us[i + 1 :]:
            common = sorted(n1 & left[u2])
            for j, v1 in enumerate(common):
                for v2 in common[j + 1 :]:
                    out.append((u1, u2, v1, v2))
    return out


def butterfly_pair_stats(
    edges: Iterable[Edge], max_butterflies: int = 100_000
) -> ButterflyPairStats:
    """Classify all unordered butterfly pairs by shared-edge count.

    Refuses graphs with more than max_butterflies butterflies (the
    enumeration is meant for desk-scale fixtures).
    """
    flies = enumerate_butterflies(edges)
    total = len(flies)
    if total > max_butterflies:
        raise ValueError(f"{total} butterflies exceed the {max_butterflies} guard")

    per_edge: Counter[tuple[int, int]] = Counter()
    per_wedge: Counter[tuple] = Counter()
    for u1, u2, v1, v2 in flies:
        per_edge[(u1, v1)] += 1
        per_edge[(u1, v2)] += 1
        per_edge[(u2, v1)] += 1
        per_edge[(u2, v2)] += 1
        # the four wedges of a butterfly, keyed (center side, center, pair)
        per_wedge[("L", u1, v1, v2)] += 1
        per_wedge[("L", u2, v1, v2)] += 1
        per_wedge[("R", v1, u1, u2)] += 1
        per_wedge[("R", v2, u1, u2)] += 1

    # pairs sharing exactly two edges share exactly one wedge
    eta = sum(n * (n - 1) // 2 for n in per_wedge.values())
    # sum over edges of C(membership, 2) counts each pair once per shared edge
    shared_weighted = sum(n * (n - 1) // 2 for n in per_edge.values())
    delta = shared_weighted - 2 * eta
    zeta = total * (total - 1) // 2 - delta - eta
    return ButterflyPairStats(zeta=zeta, delta=delta, eta=eta, total_butterflies=total)


def _falling(x: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= x - i
    return out


def g_prime(c: float, m_d: int) -> float:
    """Derivative at m_d of g(x) = x(x-1)(x-2)(x-3) / m_d(m_d-1)(m_d-2)(m_d-3) * c."""
    m = float(m_d)
    poly = 4 * m**3 - 18 * m**2 + 22 * m - 6
    return c * poly / _falling(m, 4)


def variance_bound_deabc_pq(c: float, sample_size: int, m_d: int) -> float:
    """Upper bound c^2 + Phi1*c + Phi2*(2c^2 - 2c) for the PQ estimator."""
    m = sample_size
    if m < 16:
        raise ValueError("sample size must be at least 16")
    if m_d < 8:
        raise ValueError("need at least 8 distinct edges")
    phi1 = ((m - 4) * _falling(m_d - 4, 4)) / (m * _falling(m - 5, 4))
    phi2 = ((m - 4) ** 2 * (m_d - 6) * (m_d - 7)) / (m * (m - 6) * (m - 7) * (m - 8))
    return c**2 + phi1 * c + phi2 * (2 * c**2 - 2 * c)


def variance_deabc_bucket(
    stats: ButterflyPairStats, sample_size: int, m_d: int, nonempty: int, c: float
) -> float:
    """Bucket-estimator variance: pair terms plus the FM distinct-count term."""
    if nonempty <= 7:
        raise ValueError("need more than 7 non-empty buckets")
    if m_d < 8:
        raise ValueError("need at least 8 distinct edges")
    b = nonempty
    phi1 = _falling(m_d, 4) / _falling(b, 4)
    phi2 = phi1 * _falling(b - 4, 4) / _falling(m_d - 4, 4)
    phi3 = phi1 * _falling(b - 4, 3) / _falling(m_d - 4, 3)
    phi4 = phi1 * _falling(b - 4, 2) / _falling(m_d - 4, 2)
    main = (
        c * phi1
        + 2 * stats.zeta * phi2
        + 2 * stats.delta * phi3
        + 2 * stats.eta * phi4
        - c**2
    )
    fm_term = g_prime(c, m_d) ** 2 * m_d**2 / (1.4426 * sample_size)
    return main + fm_term


def variance_fable(
    stats: ButterflyPairStats, sample_size: int, m_d: int, c: float
) -> float:
    """FABLE variance adjusted for the KMV distinct-count noise."""
    m = sample_size
    if m < 16:
        raise ValueError("sample size must be at least 16")
    if m_d < m:
        raise ValueError("need m_d >= sample size")

    def mu(j: int) -> float:
        return _falling(m, j) / _falling(m_d, j)

    mu4 = mu(4)
    phi4 = 1.0 / mu4 - 1.0
    phi8 = mu(8) / mu4**2 - 1.0
    phi7 = mu(7) / mu4**2 - 1.0
    phi6 = mu(6) / mu4**2 - 1.0
    main = c * phi4 + 2 * stats.zeta * phi8 + 2 * stats.delta * phi7 + 2 * stats.eta * phi6
    kmv_term = g_prime(c, m_d) ** 2 * m_d**2 / (m - 2)
    return main + kmv_term


def chebyshev_band(var: float, lam: float) -> float:
    """Half-width lam * sqrt(var); mass outside is at most 1/lam^2."""
    if var < 0:
        raise ValueError("variance must be non-negative")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return lam * var**0.5

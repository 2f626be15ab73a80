"""Streaming butterfly estimators under a fixed edge budget M.

Three duplicate-aware estimators share one interface (process / consume /
estimate / counters):

* DeabcPq      - bottom-M priority queue, update factor (M-4)/M * h_max^-4.
* Fable        - bottom-M priority queue, KMV distinct-count estimate feeding
                 a falling-factorial update factor.
* DeabcBucket  - M hash buckets each keeping its minimum-priority edge, FM
                 registers with Ting's increment for the distinct count.

ExactCounter is the unbounded telescoping counter used as ground truth, and
DuplicateNaivePq is a deliberately duplicate-blind control (fresh priority
per occurrence) for duplication-sweep experiments; it is not part of the
measured toolkit.

All estimators admit each distinct edge at most once; repeat occurrences
are rejected by priority equality or sample membership, so the final state
after any stream equals the state after its first-occurrence dedup.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

from .distinct import FmState, kmv_estimate
from .graph import Edge, SampledSubgraph, closed_butterflies, edge
from .hashing import (
    HashConfig,
    buckets_of_array,
    edge_hash64,
    edge_hash64_array,
    mix64,
    mix64_array,
    priorities_of_array,
    unit_from_hash,
)


@dataclass
class OpCounters:
    """Logical operation and slot counters used to validate complexity trends."""

    elements_processed: int = 0
    distinct_samples_admitted: int = 0
    evictions: int = 0
    butterfly_probe_work: int = 0
    peak_edge_slots: int = 0
    peak_aux_slots: int = 0

    def copy(self) -> "OpCounters":
        return replace(self)


def deabc_pq_theta(m: int, h_max: float) -> float:
    return (m - 4) / m / h_max**4


def fable_sampling_probability(m: int, m_hat: float) -> float:
    """Estimated probability that all four edges of a butterfly are sampled."""
    num = m * (m - 1) * (m - 2) * (m - 3)
    den = m_hat * (m_hat - 1) * (m_hat - 2) * (m_hat - 3)
    return num / den


def fable_theta(m: int, m_hat: float) -> float:
    # the update factor is the reciprocal of the sampling probability
    return 1.0 / fable_sampling_probability(m, m_hat)


def bucket_theta(m_hat: float, nonempty: int) -> float:
    if m_hat > 3.0 and nonempty > 3:
        t = 1.0
        for i in range(4):
            t *= (m_hat - i) / (nonempty - i)
        return t
    return 1.0


class ExactCounter:
    """Exact butterfly count over the deduplicated stream (unbounded memory)."""

    name = "exact"

    def __init__(self) -> None:
        self._g = SampledSubgraph()
        self._c_hat = 0.0
        self._counters = OpCounters()

    def process(self, e: Edge) -> None:
        self._counters.elements_processed += 1
        self._insert_ids(e.u.id, e.v.id)

    def consume(self, us: np.ndarray, vs: np.ndarray) -> None:
        self._counters.elements_processed += len(us)
        insert = self._insert_ids
        for u_id, v_id in zip(us.tolist(), vs.tolist()):
            insert(u_id, v_id)

    def _insert_ids(self, u_id: int, v_id: int) -> None:
        g = self._g
        e = edge(u_id, v_id)
        if e in g:
            return
        c = self._counters
        count, work = closed_butterflies(g, e.u, e.v)
        self._c_hat += count
        g.insert_edge(e)
        c.distinct_samples_admitted += 1
        c.butterfly_probe_work += work
        c.peak_edge_slots = max(c.peak_edge_slots, g.edge_count)

    def estimate(self) -> float:
        return self._c_hat

    def distinct_estimate(self) -> float:
        return float(self._g.edge_count)

    def counters(self) -> OpCounters:
        return self._counters

    def state_digest(self):
        return ("exact", self._c_hat, self._g.edge_count)


class _PrioritySampler:
    """Bottom-M sample: the M distinct edges with smallest priorities so far.

    The max-priority entry sits on top of a negated heapq; h_max always
    mirrors the queue maximum (0.0 while empty).  Each queue entry stores
    (priority, edge), so the auxiliary footprint is two slots per entry on
    top of the sampled subgraph itself.
    """

    def __init__(self, sample_size: int, cfg: HashConfig) -> None:
        if sample_size < 16:
            raise ValueError("sample size must be at least 16")
        self._M = sample_size
        self._pri_key = cfg.priority_seed
        self._g = SampledSubgraph(capacity=sample_size)
        self._heap: list[tuple[float, int, Edge]] = []
        self._seq = 0
        self._h_max = 0.0
        self._c_hat = 0.0
        self._counters = OpCounters()

    @property
    def h_max(self) -> float:
        return self._h_max

    @property
    def sample_size(self) -> int:
        return self._M

    def sample_edges(self) -> set[tuple[int, int]]:
        return {e.ids() for _, _, e in self._heap}

    def process(self, e: Edge) -> None:
        self._counters.elements_processed += 1
        pri = unit_from_hash(edge_hash64(self._pri_key, e.u.id, e.v.id))
        self._step(pri, e.u.id, e.v.id)

    def consume(self, us: np.ndarray, vs: np.ndarray) -> None:
        pris = priorities_of_array(self._pri_key, us, vs).tolist()
        ul = us.tolist()
        vl = vs.tolist()
        n = len(ul)
        self._counters.elements_processed += n
        g = self._g
        m = self._M
        step = self._step
        i = 0
        while i < n and g.edge_count < m:
            step(pris[i], ul[i], vl[i])
            i += 1
        while i < n:
            p = pris[i]
            if p < self._h_max:
                e = edge(ul[i], vl[i])
                if e not in g:
                    self._replace(p, e)
            i += 1

    def _step(self, pri: float, u_id: int, v_id: int) -> None:
        g = self._g
        if g.edge_count < self._M:
            e = edge(u_id, v_id)
            if e not in g:
                self._admit_fill(pri, e)
        elif pri < self._h_max:
            e = edge(u_id, v_id)
            if e not in g:
                self._replace(pri, e)

    def _admit_fill(self, pri: float, e: Edge) -> None:
        c = self._counters
        count, work = closed_butterflies(self._g, e.u, e.v)
        self._c_hat += count
        self._g.insert_edge(e)
        self._seq += 1
        heapq.heappush(self._heap, (-pri, self._seq, e))
        if pri > self._h_max:
            self._h_max = pri
        c.distinct_samples_admitted += 1
        c.butterfly_probe_work += work
        c.peak_edge_slots = max(c.peak_edge_slots, self._g.edge_count)
        c.peak_aux_slots = max(c.peak_aux_slots, 2 * len(self._heap))

    def _replace(self, pri: float, e: Edge) -> None:
        raise NotImplementedError

    def estimate(self) -> float:
        return self._c_hat

    def distinct_estimate(self) -> float:
        if len(self._heap) < self._M:
            return float(len(self._heap))
        return kmv_estimate(self._h_max, self._M)

    def counters(self) -> OpCounters:
        return self._counters

    def state_digest(self):
        sample = tuple(sorted((e.ids(), -neg) for neg, _, e in self._heap))
        return (self.name, self._c_hat, self._h_max, sample)


class DeabcPq(_PrioritySampler):
    """Priority-queue estimator with update factor (M-4)/M * 1/h_max^4.

    The factor is computed from h_max *before* the replacement edge enters
    the queue, i.e. from the priority of the evicted maximum.
    """

    name = "deabc-pq"

    def _replace(self, pri: float, e: Edge) -> None:
        c = self._counters
        g = self._g
        heap = self._heap
        victim = heap[0][2]
        g.remove_edge(victim)
        theta = deabc_pq_theta(self._M, self._h_max)
        count, work = closed_butterflies(g, e.u, e.v)
        self._c_hat += theta * count
        g.insert_edge(e)
        self._seq += 1
        heapq.heapreplace(heap, (-pri, self._seq, e))
        self._h_max = -heap[0][0]
        c.distinct_samples_admitted += 1
        c.evictions += 1
        c.butterfly_probe_work += work


class Fable(_PrioritySampler):
    """Priority-queue estimator with a KMV-derived falling-factorial factor.

    Order pinned to the published listing: pop the maximum first, read the
    new queue top (M-1 entries) as the KMV h_max, compute theta, count,
    and only then insert the incoming edge.
    """

    name = "fable"

    def _replace(self, pri: float, e: Edge) -> None:
        c = self._counters
        g = self._g
        heap = self._heap
        victim = heap[0][2]
        g.remove_edge(victim)
        heapq.heappop(heap)
        m_hat = kmv_estimate(-heap[0][0], self._M)
        theta = fable_theta(self._M, m_hat)
        count, work = closed_butterflies(g, e.u, e.v)
        self._c_hat += theta * count
        g.insert_edge(e)
        self._seq += 1
        heapq.heappush(heap, (-pri, self._seq, e))
        self._h_max = -heap[0][0]
        c.distinct_samples_admitted += 1
        c.evictions += 1
        c.butterfly_probe_work += work


class DuplicateNaivePq(DeabcPq):
    """Control estimator: DeabcPq with the priority re-drawn per occurrence.

    Mixing the element index into the hash breaks duplicate consistency on
    purpose, reproducing how duplicate-blind samplers degrade as the
    duplication ratio grows.  Test/experiment use only.
    """

    name = "naive-pq"

    def process(self, e: Edge) -> None:
        c = self._counters
        t = c.elements_processed
        c.elements_processed += 1
        h = mix64(edge_hash64(self._pri_key, e.u.id, e.v.id) ^ t)
        self._step(unit_from_hash(h), e.u.id, e.v.id)

    def consume(self, us: np.ndarray, vs: np.ndarray) -> None:
        n = len(us)
        start = self._counters.elements_processed
        ticks = np.arange(start, start + n, dtype=np.uint64)
        h = mix64_array(edge_hash64_array(self._pri_key, us, vs) ^ ticks)
        pris = unit_from_hash(h).tolist()
        self._counters.elements_processed += n
        step = self._step
        for p, u_id, v_id in zip(pris, us.tolist(), vs.tolist()):
            step(p, u_id, v_id)


class DeabcBucket:
    """Bucket estimator: M slots, each keeping its minimum-priority edge.

    A replacement (or first fill) of a slot drives the FM distinct-count
    update; the update factor uses the refreshed m_hat and the number of
    non-empty buckets before the slot changes.  Empty slots hold the
    sentinel priority 2.0 so a single comparison covers both the empty and
    the occupied case.
    """

    name = "deabc-bucket"

    def __init__(self, sample_size: int, cfg: HashConfig) -> None:
        if sample_size < 16:
            raise ValueError("sample size must be at least 16")
        if cfg.num_buckets != sample_size:
            raise ValueError("bucket count must equal the sample size")
        self._M = sample_size
        self._pri_key = cfg.priority_seed
        self._pos_key = cfg.position_seed
        self._bucket_pri = [2.0] * sample_size
        self._bucket_edge: list[Edge | None] = [None] * sample_size
        self._nonempty = 0
        self._fm = FmState(sample_size)
        self._g = SampledSubgraph(capacity=sample_size)
        self._c_hat = 0.0
        self._counters = OpCounters()

    @property
    def sample_size(self) -> int:
        return self._M

    @property
    def nonempty_buckets(self) -> int:
        return self._nonempty

    @property
    def fm_state(self) -> FmState:
        return self._fm

    def sample_edges(self) -> set[tuple[int, int]]:
        return {e.ids() for e in self._bucket_edge if e is not None}

    def process(self, e: Edge) -> None:
        self._counters.elements_processed += 1
        pos = edge_hash64(self._pos_key, e.u.id, e.v.id) % self._M
        pri = unit_from_hash(edge_hash64(self._pri_key, e.u.id, e.v.id))
        if pri < self._bucket_pri[pos]:
            self._replace(pos, pri, e.u.id, e.v.id)

    def consume(self, us: np.ndarray, vs: np.ndarray) -> None:
        pris = priorities_of_array(self._pri_key, us, vs).tolist()
        poss = buckets_of_array(self._pos_key, self._M, us, vs).tolist()
        ul = us.tolist()
        vl = vs.tolist()
        self._counters.elements_processed += len(ul)
        bucket_pri = self._bucket_pri
        replace_slot = self._replace
        for i, p in enumerate(pris):
            k = poss[i]
            if p < bucket_pri[k]:
                replace_slot(k, p, ul[i], vl[i])

    def _replace(self, pos: int, pri: float, u_id: int, v_id: int) -> None:
        c = self._counters
        g = self._g
        victim = self._bucket_edge[pos]
        if victim is None:
            rho_max = 0
        else:
            rho_max = 1 - math.frexp(self._bucket_pri[pos])[1]
        rho = 1 - math.frexp(pri)[1]
        self._fm.observe(rho, rho_max)
        theta = bucket_theta(self._fm.m_hat, self._nonempty)
        if victim is not None:
            g.remove_edge(victim)
            c.evictions += 1
        e = edge(u_id, v_id)
        count, work = closed_butterflies(g, e.u, e.v)
        self._c_hat += theta * count
        g.insert_edge(e)
        self._bucket_pri[pos] = pri
        self._bucket_edge[pos] = e
        if victim is None:
            self._nonempty += 1
        c.distinct_samples_admitted += 1
        c.butterfly_probe_work += work
        c.peak_edge_slots = max(c.peak_edge_slots, g.edge_count)
        c.peak_aux_slots = max(c.peak_aux_slots, self._nonempty)

    def estimate(self) -> float:
        return self._c_hat

    def distinct_estimate(self) -> float:
        return self._fm.m_hat

    def counters(self) -> OpCounters:
        return self._counters

    def state_digest(self):
        slots = tuple(
            (i, self._bucket_pri[i], e.ids())
            for i, e in enumerate(self._bucket_edge)
            if e is not None
        )
        return (self.name, self._c_hat, self._fm.q, self._fm.m_hat, slots)

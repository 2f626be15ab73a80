"""Streaming distinct-edge estimators.

Two flavors are used by the butterfly estimators:

* an FM-register scheme with Ting's unbiased increment, driven by the
  bucket sampler's replacement events (the bucket occupant's register
  value IS the FM register, so no extra array is kept), and
* the KMV formula (M-1)/h_max read off a full bottom-M priority queue.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class FmState:
    """q = (1/M) sum(2^-rho_i) over all M registers (empty register: rho = 0).

    m_hat is updated with the value of q *before* q itself is adjusted;
    swapping that order biases the estimate.
    """

    num_buckets: int
    q: float = 1.0
    m_hat: float = 0.0

    def observe(self, rho_new: int, rho_max_old: int) -> None:
        if rho_new > rho_max_old:
            self.m_hat += 1.0 / self.q
            self.q += (2.0**-rho_new - 2.0**-rho_max_old) / self.num_buckets


def fm_observe(state: FmState, rho_new: int, rho_max_old: int) -> None:
    """Register-replacement hook: rho_max_old is 0 when the slot was empty."""
    state.observe(rho_new, rho_max_old)


def kmv_estimate(h_max: float, num_entries: int) -> float:
    """Distinct-count estimate (M-1)/h_max from a full M-entry bottom sample."""
    return (num_entries - 1) / h_max

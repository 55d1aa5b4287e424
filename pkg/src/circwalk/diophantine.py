"""Distances to the integer lattice and empirical approximation constants.

``beta_hat`` estimates the badly-approximable constant as
min_{N <= n_max} N^(1/d) <N alpha>, and ``dirichlet_b_hat`` the Dirichlet
constant as max_q q * min_{N <= q^d} <N alpha>.  Both are finite-horizon
evidence only, never certificates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._frac import frac_multiples
from .alpha import AlphaVector

DM_THRESHOLD = math.sqrt(2.0 / math.sqrt(23.0))
PLASTIC_CONJECTURED_BETA = 0.54850
SCAN_CHUNK = 2**16
DEFAULT_PER_Q_CAP = 10**6


def nearest_int_dist(x):
    """Euclidean distance from x (shape (..., d), or a scalar for d = 1) to Z^d."""
    x = np.asarray(x, dtype=float)
    f = x - np.floor(x)
    r = np.minimum(f, 1.0 - f)
    if r.ndim == 0:
        return float(r)
    out = np.sqrt(np.sum(r * r, axis=-1))
    return float(out) if out.ndim == 0 else out


def _multiple_distances(alpha: AlphaVector, start: int, stop: int) -> np.ndarray:
    n = np.arange(start, stop, dtype=np.int64)
    return nearest_int_dist(frac_multiples(n, alpha.entries))


def _scan(alpha: AlphaVector, n_max: int, chunk: int = SCAN_CHUNK) -> Iterator[tuple[int, np.ndarray]]:
    # every chunk starts from fresh products N * alpha, so no drift carries over
    for start in range(1, n_max + 1, chunk):
        stop = min(n_max + 1, start + chunk)
        yield start, _multiple_distances(alpha, start, stop)


@dataclass(frozen=True)
class BetaEstimate:
    beta_hat: float
    beta_argmin: int
    n_max: int


@dataclass(frozen=True)
class DirichletEstimate:
    b_hat: float
    b_argmax_q: int
    q_max: int
    q_effective: int
    per_q_cap: int


@dataclass(frozen=True)
class ApproximationConstants:
    beta_hat: float
    beta_argmin: int
    n_max: int
    b_hat: float
    b_argmax_q: int
    q_max: int
    q_effective: int
    per_q_cap: int


def beta_hat(alpha: AlphaVector, n_max: int, chunk: int = SCAN_CHUNK) -> BetaEstimate:
    """Streaming minimum of N^(1/d) <N alpha> over 1 <= N <= n_max (first argmin kept)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    best, arg = math.inf, 0
    for start, dist in _scan(alpha, n_max, chunk):
        n = np.arange(start, start + dist.size, dtype=float)
        vals = n ** (1.0 / alpha.d) * dist
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, arg = float(vals[i]), start + i
    return BetaEstimate(best, arg, n_max)


def _int_root(n: int, d: int) -> int:
    """Largest q with q**d <= n."""
    q = int(round(n ** (1.0 / d)))
    while q**d > n:
        q -= 1
    while (q + 1) ** d <= n:
        q += 1
    return q


def dirichlet_b_hat(
    alpha: AlphaVector, q_max: int, per_q_cap: int = DEFAULT_PER_Q_CAP
) -> DirichletEstimate:
    """max over q of q * min_{N <= q^d} <N alpha>.

    q is limited to q_effective = min(q_max, floor(per_q_cap^(1/d))) so that
    every inner minimum runs over the full range N <= q^d that the Dirichlet
    argument needs.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    d = alpha.d
    q_eff = max(1, min(q_max, _int_root(per_q_cap, d)))
    top = q_eff**d
    running = math.inf
    prefix_min = np.empty(top)
    for start, dist in _scan(alpha, top):
        pm = np.minimum.accumulate(dist)
        pm = np.minimum(pm, running)
        prefix_min[start - 1 : start - 1 + dist.size] = pm
        running = float(pm[-1])
    q = np.arange(1, q_eff + 1)
    vals = q * prefix_min[q**d - 1]
    i = int(np.argmax(vals))
    return DirichletEstimate(float(vals[i]), i + 1, q_max, q_eff, per_q_cap)


def approximation_constants(
    alpha: AlphaVector, n_max: int, q_max: int, per_q_cap: int = DEFAULT_PER_Q_CAP
) -> ApproximationConstants:
    b = beta_hat(alpha, n_max)
    q = dirichlet_b_hat(alpha, q_max, per_q_cap)
    return ApproximationConstants(
        beta_hat=b.beta_hat,
        beta_argmin=b.beta_argmin,
        n_max=n_max,
        b_hat=q.b_hat,
        b_argmax_q=q.b_argmax_q,
        q_max=q_max,
        q_effective=q.q_effective,
        per_q_cap=per_q_cap,
    )


class DMVerdict(str, enum.Enum):
    OK = "OK"
    EXCEEDS_DM = "EXCEEDS_DM"


def davenport_mahler_check(beta_candidate: float) -> DMVerdict:
    """For d = 2, no pair has approximation constant above (2/sqrt(23))^(1/2)."""
    if beta_candidate < 0:
        raise ValueError("beta_candidate must be >= 0")
    return DMVerdict.EXCEEDS_DM if beta_candidate > DM_THRESHOLD else DMVerdict.OK

"""Fourier coefficients of the step law and the discrepancy bounds built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._frac import frac_multiples
from .alpha import AlphaVector

DEFAULT_SU_MMAX = 10_000
C1_FACTOR = 0.0947
C2_FACTOR = 19.857


def q_hat(alpha: AlphaVector, m):
    """Fourier coefficient (1/d) sum_l cos(2 pi m alpha_l) of the step law.

    ``m`` may be an int or an integer array; m * alpha_l is reduced mod 1
    before the cosine so large m does not lose the phase.
    """
    scalar = np.ndim(m) == 0
    mm = np.atleast_1d(np.asarray(m, dtype=np.int64))
    phase = frac_multiples(np.abs(mm), alpha.entries)
    val = np.cos(2.0 * np.pi * phase).mean(axis=1)
    return float(val[0]) if scalar else val


def q_hat_table(alpha: AlphaVector, m_max: int) -> np.ndarray:
    """Q^(m) for m = 1..m_max (index 0 holds m = 1)."""
    return q_hat(alpha, np.arange(1, m_max + 1))


def su_lower_bound(
    alpha: AlphaVector,
    k: int,
    m_max: int = DEFAULT_SU_MMAX,
    table: Optional[np.ndarray] = None,
) -> float:
    """Truncated lower bound sqrt((2/pi^2) sum_{m<=m_max} Q^(m)^(2k) / m^2)."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    q = table[:m_max] if table is not None else q_hat_table(alpha, m_max)
    m = np.arange(1, q.size + 1, dtype=float)
    return math.sqrt(2.0 / math.pi**2 * np.sum(q ** (2 * k) / (m * m)))


def erdos_turan_profile(abs_coeffs: np.ndarray) -> np.ndarray:
    """Erdos-Turan bound 4/(M+1) + (4/pi) sum_{m<=M} |c_m|/m for every M = 1..len."""
    abs_coeffs = np.asarray(abs_coeffs, dtype=float)
    m = np.arange(1, abs_coeffs.size + 1, dtype=float)
    return 4.0 / (m + 1.0) + (4.0 / math.pi) * np.cumsum(abs_coeffs / m)


def erdos_turan_upper(
    alpha: AlphaVector, k: int, M: int, table: Optional[np.ndarray] = None
) -> float:
    if M < 1:
        raise ValueError("M must be >= 1")
    q = table[:M] if table is not None else q_hat_table(alpha, M)
    m = np.arange(1, M + 1, dtype=float)
    return 4.0 / (M + 1) + (4.0 / math.pi) * float(np.sum(np.abs(q) ** k / m))


def optimize_et_bound(abs_coeffs: np.ndarray) -> tuple[int, float]:
    """Return (M, bound) minimising the Erdos-Turan profile; the first minimiser wins."""
    prof = erdos_turan_profile(abs_coeffs)
    i = int(np.argmin(prof))
    return i + 1, float(prof[i])


def optimize_et_M(
    alpha: AlphaVector,
    k: int,
    m_cap: Optional[int] = None,
    table: Optional[np.ndarray] = None,
) -> tuple[int, float]:
    """Scan M in [1, m_cap] for the sharpest Erdos-Turan bound on D(Q^{*k})."""
    if m_cap is None:
        m_cap = default_m_cap(alpha.d)
    if m_cap < 1:
        raise ValueError("m_cap must be >= 1")
    q = table[:m_cap] if table is not None else q_hat_table(alpha, m_cap)
    return optimize_et_bound(np.abs(q) ** k)


def default_m_cap(d: int) -> int:
    return 10**6 // d


def paper_truncation_M(beta: float, k: int, d: int) -> int:
    """Largest integer M with M <= (1/2)(beta^2 k / d^3)^(d/2), at least 1."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    return max(1, math.floor(0.5 * (beta * beta * k / d**3) ** (d / 2)))


@dataclass(frozen=True)
class TheoremConstants:
    c1: float
    c2: float
    d: int
    b_used: float
    beta_used: float

    def envelopes(self, k: int) -> tuple[float, float]:
        scale = k ** (-self.d / 2)
        return self.c1 * scale, self.c2 * scale


def theorem_constants(d: int, b: float, beta: float) -> TheoremConstants:
    """C1 = 0.0947 (sqrt(d)/5B)^d and C2 = 19.857 (d sqrt(d)/beta)^d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if not b > 0:
        raise ValueError(f"Dirichlet constant B must be positive, got {b}")
    if not beta > 0:
        raise ValueError(f"approximation constant beta must be positive, got {beta}")
    rd = math.sqrt(d)
    c1 = C1_FACTOR * (rd / (5.0 * b)) ** d
    c2 = C2_FACTOR * (d * rd / beta) ** d
    return TheoremConstants(c1=c1, c2=c2, d=d, b_used=b, beta_used=beta)


@dataclass(frozen=True)
class BoundReport:
    k: int
    d_exact: Optional[float]
    su_lower: float
    et_upper: float
    et_M: int
    paper_M: Optional[int]
    c1_envelope: Optional[float]
    c2_envelope: Optional[float]
    d_montecarlo: Optional[float] = None

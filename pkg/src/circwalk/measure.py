"""Exact step-k distributions of the rotation walk and their discrepancy.

Path counts live on the coefficient lattice Z^d as Python integers (numpy
object arrays), so the distribution after k steps is exact over the
denominator (2d)**k.  Only the projection to the circle goes through floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._frac import frac_combination
from .alpha import AlphaVector

DEFAULT_SUPPORT_CAP = 5_000_000
ORACLE_ATOM_CAP = 64


class SupportCapExceeded(RuntimeError):
    """The lattice support (2k+1)**d would exceed the configured cap."""


@dataclass(frozen=True)
class LatticeDistribution:
    """Path counts after ``k`` steps; ``counts[m + k]`` holds the count at lattice point m."""

    d: int
    k: int
    counts: np.ndarray

    @property
    def denominator(self) -> int:
        return (2 * self.d) ** self.k

    def count(self, m) -> int:
        m = tuple(int(v) for v in np.atleast_1d(m))
        if len(m) != self.d:
            raise ValueError("lattice point has wrong dimension")
        if any(abs(v) > self.k for v in m):
            return 0
        return int(self.counts[tuple(v + self.k for v in m)])

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Lattice points with nonzero count, shape (n, d), and their counts (object array)."""
        idx = np.nonzero(self.counts != 0)
        points = np.stack(idx, axis=-1).astype(np.int64) - self.k
        return points, self.counts[idx]

    def as_dict(self) -> dict[tuple[int, ...], int]:
        points, counts = self.support()
        return {tuple(int(v) for v in p): int(c) for p, c in zip(points, counts)}


def check_support(d: int, k: int, support_cap: int = DEFAULT_SUPPORT_CAP) -> None:
    size = (2 * k + 1) ** d
    if size > support_cap:
        raise SupportCapExceeded(
            f"support (2k+1)^d = {size} exceeds cap {support_cap} (d={d}, k={k})"
        )


def _step(counts: np.ndarray, d: int) -> np.ndarray:
    n = counts.shape[0]
    out = np.zeros((n + 2,) * d, dtype=object)
    centre = [slice(1, n + 1)] * d
    for axis in range(d):
        for lo in (0, 2):
            sl = list(centre)
            sl[axis] = slice(lo, lo + n)
            out[tuple(sl)] += counts
    return out


def walk_distributions(
    d: int, k_max: int, support_cap: int = DEFAULT_SUPPORT_CAP
) -> Iterator[LatticeDistribution]:
    """Yield the exact distributions for k = 0, 1, ..., k_max in order."""
    if d < 1 or k_max < 0:
        raise ValueError("need d >= 1 and k >= 0")
    check_support(d, k_max, support_cap)
    counts = np.ones((1,) * d, dtype=object)
    yield LatticeDistribution(d, 0, counts)
    for k in range(1, k_max + 1):
        counts = _step(counts, d)
        yield LatticeDistribution(d, k, counts)


def convolve_power(
    d: int, k: int, support_cap: int = DEFAULT_SUPPORT_CAP
) -> LatticeDistribution:
    """Exact distribution of the walk on Z^d after k steps."""
    dist = None
    for dist in walk_distributions(d, k, support_cap):
        pass
    return dist


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely supported probability measure on [0, 1), atoms sorted by position."""

    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.positions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "weights", w)
        if x.ndim != 1 or x.shape != w.shape or x.size == 0:
            raise ValueError("positions and weights must be equal-length nonempty vectors")
        if np.any(x < 0.0) or np.any(x >= 1.0):
            raise ValueError("positions must lie in [0, 1)")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("positions must be strictly increasing")
        if np.any(w <= 0.0):
            raise ValueError("weights must be positive")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    @classmethod
    def from_pairs(cls, pairs) -> "AtomicMeasure":
        """Build from unsorted (position, weight) pairs; identical positions are merged."""
        arr = np.asarray(list(pairs), dtype=float).reshape(-1, 2)
        pos, inv = np.unique(arr[:, 0], return_inverse=True)
        return cls(pos, np.bincount(inv, weights=arr[:, 1]))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.positions.tolist(), self.weights.tolist()))

    def __len__(self) -> int:
        return self.positions.size

    def fourier(self, m: int) -> complex:
        """Fourier coefficient sum_i w_i exp(2 pi i m x_i)."""
        phase = 2.0 * np.pi * ((m * self.positions) % 1.0)
        return complex(np.sum(self.weights * np.cos(phase)), np.sum(self.weights * np.sin(phase)))


def atoms_on_circle(dist: LatticeDistribution, alpha: AlphaVector) -> AtomicMeasure:
    """Project lattice point m to frac(sum_j m_j alpha_j); only bit-identical positions merge."""
    if dist.d != alpha.d:
        raise ValueError(f"dimension mismatch: distribution d={dist.d}, alpha d={alpha.d}")
    points, counts = dist.support()
    pos = frac_combination(points, alpha.entries)
    order = np.argsort(pos, kind="stable")
    pos = pos[order]
    counts = counts[order]
    starts = np.flatnonzero(np.r_[True, pos[1:] != pos[:-1]])
    merged = np.add.reduceat(counts, starts) if starts.size < pos.size else counts
    denom = dist.denominator
    weights = np.array([c / denom for c in merged], dtype=float)
    # far tails (mass below the smallest subnormal) underflow to 0 and are dropped
    keep = weights > 0.0
    return AtomicMeasure(pos[starts][keep], weights[keep])


def discrepancy_exact(p: AtomicMeasure) -> float:
    """sup over arcs |P(I) - U(I)|, as the range of the centered CDF F(x) - x."""
    x = p.positions
    g = np.cumsum(p.weights)
    g_prev = np.concatenate(([0.0], g[:-1]))
    hi = max(0.0, float(np.max(g - x)))
    lo = min(0.0, float(np.min(g_prev - x)))
    return min(1.0, hi - lo)


def discrepancy_oracle(p: AtomicMeasure, cap: int = ORACLE_ATOM_CAP) -> float:
    """Brute force over every arc between two atoms, all four endpoint conventions.

    Arcs run counterclockwise from atom i to atom j.  Their complements are
    the arcs from j to i with the endpoint conventions flipped, so they are
    already in the enumeration, and arcs avoiding all atoms are the open
    arcs between neighbours.
    """
    n = len(p)
    if n > cap:
        raise ValueError(f"oracle limited to {cap} atoms, got {n}")
    xs = p.positions.tolist()
    ws = p.weights.tolist()
    best = 0.0
    for i in range(n):
        # atoms in counterclockwise order starting at i, with arc length from x_i
        order = [(i + t) % n for t in range(n)]
        offs = [(xs[t] - xs[i]) % 1.0 for t in order]
        inner = 0.0  # mass strictly between x_i and x_j
        for jj in range(n):
            j = order[jj]
            if jj == 0:
                # degenerate arcs: the point itself, and the circle minus the point
                cands = [(ws[i], 0.0), (1.0 - ws[i], 1.0)]
            else:
                length = offs[jj]
                if jj > 1:
                    inner += ws[order[jj - 1]]
                cands = [
                    (inner + ws[i] + ws[j], length),
                    (inner + ws[j], length),
                    (inner + ws[i], length),
                    (inner, length),
                ]
            for mass, length in cands:
                best = max(best, abs(mass - length))
    return best


def sample_walk(alpha: AlphaVector, k: int, n_samples: int, seed) -> AtomicMeasure:
    """Empirical measure of ``n_samples`` independent k-step walks.

    ``seed`` is anything ``numpy.random.default_rng`` accepts; a fixed seed
    gives bit-identical output.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    d = alpha.d
    rng = np.random.default_rng(seed)
    m = np.zeros((n_samples, d), dtype=np.int64)
    rows = np.arange(n_samples)
    for _ in range(k):
        move = rng.integers(0, 2 * d, size=n_samples)
        m[rows, move // 2] += 1 - 2 * (move % 2)
    pos = frac_combination(m, alpha.entries)
    uniq, counts = np.unique(pos, return_counts=True)
    return AtomicMeasure(uniq, counts / n_samples)

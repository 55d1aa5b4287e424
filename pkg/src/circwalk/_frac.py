"""Fractional parts of integer combinations of reals, without the k*ulp blow-up.

Each generator is split (Dekker) into a 26-bit head and a small tail.  For
integer multipliers below 2**27 the head product is exact, so its fractional
part is exact too; only the tail contributes rounding error.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
MAX_MULTIPLIER = 2**27


def split(a):
    """Return (head, tail) with head + tail == a and head holding <= 26 bits."""
    a = np.asarray(a, dtype=float)
    c = _SPLITTER * a
    head = c - (c - a)
    return head, a - head


def wrap_unit(x):
    """Reduce to [0, 1); rounding that lands exactly on 1.0 is folded to 0.0."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x)
    return np.where(r >= 1.0, 0.0, r)


def frac_combination(m, alpha):
    """frac(sum_j m[..., j] * alpha[j]) for integer array ``m`` of shape (..., d)."""
    m = np.asarray(m, dtype=np.int64)
    alpha = np.asarray(alpha, dtype=float)
    if m.size and np.abs(m).max() >= MAX_MULTIPLIER:
        raise ValueError("integer multiplier too large for exact head products")
    head, tail = split(alpha)
    mf = m.astype(float)
    acc = np.zeros(m.shape[:-1])
    low = np.zeros(m.shape[:-1])
    for j in range(alpha.shape[0]):
        t = mf[..., j] * head[j]  # exact
        acc = wrap_unit(acc + (t - np.floor(t)))
        low = low + mf[..., j] * tail[j]
    return wrap_unit(acc + low)


def frac_multiples(n, alpha):
    """frac(n * alpha) for a 1-D integer array ``n``; returns shape (len(n), d)."""
    n = np.asarray(n, dtype=np.int64)
    alpha = np.asarray(alpha, dtype=float)
    if n.size and np.abs(n).max() >= MAX_MULTIPLIER:
        raise ValueError("integer multiplier too large for exact head products")
    head, tail = split(alpha)
    nf = n.astype(float)[:, None]
    t = nf * head[None, :]
    return wrap_unit((t - np.floor(t)) + nf * tail[None, :])

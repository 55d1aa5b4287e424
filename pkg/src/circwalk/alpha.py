"""Generator tuples for the walk and the textual grammar that names them.

Grammar::

    phi | plastic | sqrt:<int>[,<int>...] | dec:<decimal>[,<decimal>...]
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class AlphaSpecError(ValueError):
    """Raised for a malformed or unusable alpha specification."""


def _unit(x: float) -> float:
    r = x % 1.0
    return 0.0 if r >= 1.0 else r


@dataclass(frozen=True)
class AlphaVector:
    entries: tuple[float, ...]
    spec: str = ""

    def __post_init__(self):
        if len(self.entries) == 0:
            raise AlphaSpecError("alpha tuple is empty")
        for a in self.entries:
            if not math.isfinite(a):
                raise AlphaSpecError(f"non-finite entry {a!r}")
            if not 0.0 <= a < 1.0:
                raise AlphaSpecError(f"entry {a!r} not reduced into [0, 1)")

    @property
    def d(self) -> int:
        return len(self.entries)

    @classmethod
    def from_values(cls, values, spec: str = "") -> "AlphaVector":
        vals = [float(v) for v in values]
        for v in vals:
            if not math.isfinite(v):
                raise AlphaSpecError(f"non-finite entry {v!r}")
        return cls(tuple(_unit(v) for v in vals), spec)


def plastic_number(tol: float = 0.0, max_iter: int = 100) -> float:
    """Real root of x**3 - x - 1 by Newton's method, iterated to a fixed point."""
    x = 1.5
    for _ in range(max_iter):
        step = (x**3 - x - 1.0) / (3.0 * x * x - 1.0)
        x_new = x - step
        if abs(x_new - x) <= tol:
            return x_new
        x = x_new
    return x


GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def make_alpha(spec: str) -> AlphaVector:
    """Parse an alpha spec such as ``phi`` or ``sqrt:2,3`` into an AlphaVector."""
    if not isinstance(spec, str):
        raise AlphaSpecError("alpha spec must be text")
    text = spec.strip()
    if text == "phi":
        return AlphaVector.from_values([GOLDEN], spec)
    if text == "plastic":
        g = plastic_number()
        return AlphaVector.from_values([1.0 / (g * g), 1.0 / g], spec)

    kind, sep, body = text.partition(":")
    if not sep or kind not in ("sqrt", "dec"):
        raise AlphaSpecError(f"unrecognised alpha spec {spec!r}")
    items = [s.strip() for s in body.split(",")]
    if not body.strip() or any(not s for s in items):
        raise AlphaSpecError(f"empty entry in alpha spec {spec!r}")

    if kind == "sqrt":
        values = []
        for s in items:
            try:
                n = int(s)
            except ValueError:
                raise AlphaSpecError(f"sqrt entry {s!r} is not an integer") from None
            if n < 0:
                raise AlphaSpecError(f"sqrt entry {n} is negative")
            r = math.isqrt(n)
            # exact integer part keeps the fractional part clean for large n
            values.append(0.0 if r * r == n else math.sqrt(n) - r)
        return AlphaVector.from_values(values, spec)

    values = []
    for s in items:
        try:
            v = float(s)
        except ValueError:
            raise AlphaSpecError(f"dec entry {s!r} is not a number") from None
        if not math.isfinite(v):
            raise AlphaSpecError(f"dec entry {s!r} is not finite")
        values.append(v)
    return AlphaVector.from_values(values, spec)

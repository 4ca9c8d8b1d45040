"""Hölder exponents in [1, inf] paired with their conjugates."""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


def _conjugate_value(p):
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class Exponent:
    """An exponent ``value`` and its conjugate, both stored.

    Build with :meth:`of`; :meth:`dual` swaps the two fields so that
    conjugating twice returns the original object exactly.
    """

    value: float
    conjugate: float

    def __post_init__(self):
        for x in (self.value, self.conjugate):
            if not (x >= 1) or math.isnan(x):
                raise ValueError(f"exponent must lie in [1, inf], got {x}")

    @classmethod
    def of(cls, p) -> "Exponent":
        if isinstance(p, Exponent):
            return p
        p = parse_extended(p)
        if not p >= 1:
            raise ValueError(f"exponent must lie in [1, inf], got {p}")
        return cls(float(p), float(_conjugate_value(p)))

    def dual(self) -> "Exponent":
        return Exponent(self.conjugate, self.value)

    @property
    def inverse(self) -> float:
        """1/p with 1/inf = 0."""
        return 0.0 if self.value == INF else 1.0 / self.value

    @property
    def is_inf(self) -> bool:
        return self.value == INF

    def __float__(self):
        return self.value

    def to_json(self):
        return "inf" if self.is_inf else self.value

    def __str__(self):
        return "inf" if self.is_inf else repr(self.value)


def parse_extended(x) -> float:
    """Parse a real or one of the strings ``inf``/``infinity``."""
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "+inf", "∞"):
            return INF
        return float(s)
    return float(x)


def as_exponent(p) -> Exponent:
    return Exponent.of(p)

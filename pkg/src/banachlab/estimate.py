"""Certified two-sided norm estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class NormEstimate:
    value: float
    lower: float
    upper: float
    method: str
    restarts: int = 0
    witness: tuple = field(default=())

    def __post_init__(self):
        if not self.lower <= self.value <= self.upper * (1 + 1e-9) + 1e-300:
            raise ValueError(
                f"inconsistent estimate: lower={self.lower} value={self.value} upper={self.upper}")

    def to_json(self):
        return {
            "value": self.value,
            "lower": self.lower,
            "upper": None if math.isinf(self.upper) else self.upper,
            "method": self.method,
            "restarts": self.restarts,
            "witness": [float(w) for w in self.witness],
        }

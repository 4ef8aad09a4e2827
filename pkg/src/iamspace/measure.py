"""Linear space forms ``units + x_count * X``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

__all__ = ["SpaceMeasure", "ZERO", "ONE", "X1", "smax", "default_x"]


@dataclass(frozen=True, slots=True, order=False)
class SpaceMeasure:
    units: int = 0
    x_count: int = 0

    def eval(self, x: int) -> int:
        return self.units + self.x_count * x

    def __add__(self, other: "SpaceMeasure") -> "SpaceMeasure":
        return SpaceMeasure(self.units + other.units, self.x_count + other.x_count)

    def plus(self, units: int = 0, x_count: int = 0) -> "SpaceMeasure":
        return SpaceMeasure(self.units + units, self.x_count + x_count)

    def key(self, x: int) -> tuple[int, int]:
        # ties at the concrete X go to the larger X coefficient
        return (self.eval(x), self.x_count)

    def __str__(self) -> str:
        if self.x_count == 0:
            return str(self.units)
        xs = "X" if self.x_count == 1 else f"{self.x_count}X"
        return xs if self.units == 0 else f"{xs}+{self.units}"


ZERO = SpaceMeasure(0, 0)
ONE = SpaceMeasure(1, 0)
X1 = SpaceMeasure(0, 1)


def smax(items: Iterable[SpaceMeasure], x: int, default: SpaceMeasure = ZERO) -> SpaceMeasure:
    """Maximum at concrete ``x``."""
    best = None
    for m in items:
        if best is None or m.key(x) > best.key(x):
            best = m
    return default if best is None else best


def default_x(node_count: int) -> int:
    """``max(1, ceil(log2(node_count)))``."""
    if node_count <= 1:
        return 1
    return max(1, math.ceil(math.log2(node_count)))

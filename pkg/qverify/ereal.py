# qverify/ereal.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

Number = Union[int, Fraction]


@total_ordering
@dataclass(frozen=True)
class EReal:
    """Non-negative rational or infinity. `value is None` encodes infinity."""

    value: Fraction | None

    def __post_init__(self):
        if self.value is not None:
            if not isinstance(self.value, Fraction):
                object.__setattr__(self, "value", Fraction(self.value))
            if self.value < 0:
                raise ValueError(f"EReal must be non-negative, got {self.value}")

    @classmethod
    def of(cls, q: Number | "EReal") -> "EReal":
        if isinstance(q, EReal):
            return q
        return cls(Fraction(q))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    # 0 * inf = inf * 0 = 0
    def __mul__(self, other: "EReal") -> "EReal":
        other = EReal.of(other)
        if self.value == 0 or other.value == 0:
            return ZERO
        if self.is_inf or other.is_inf:
            return INF
        return EReal(self.value * other.value)

    __rmul__ = __mul__

    def __add__(self, other: "EReal") -> "EReal":
        other = EReal.of(other)
        if self.is_inf or other.is_inf:
            return INF
        return EReal(self.value + other.value)

    __radd__ = __add__

    def __lt__(self, other: "EReal") -> bool:
        other = EReal.of(other)
        if self.is_inf:
            return False
        if other.is_inf:
            return True
        return self.value < other.value

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = EReal.of(other) if other >= 0 else None
        if not isinstance(other, EReal):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        if self.is_inf:
            return "\\infty"
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self) -> str:
        return f"EReal({self})"


ZERO = EReal(Fraction(0))
ONE = EReal(Fraction(1))
INF = EReal(None)


def emin(a: EReal, b: EReal) -> EReal:
    return a if a <= b else b


def emax(a: EReal, b: EReal) -> EReal:
    return a if a >= b else b

"""Pluggable numeric backends for the quantity sort.

The quantity sort is an ordered Euclidean field: a linearly ordered field in
which every nonnegative element has a square root.  Two backends satisfy the
contract at desk scale:

* ``EXACT`` works over arbitrary-precision rationals.  Field laws hold
  bit-exactly; ``sqrt`` is defined only for perfect-square rationals, which is
  all the test suites ever need because velocities are drawn from Pythagorean
  configurations.
* ``F64`` works over IEEE doubles.  ``sqrt`` is total on nonnegatives;
  comparisons are exact IEEE comparisons, tolerances belong to test
  assertions, not to the backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float, int]


class FieldError(Exception):
    """Base class for quantity-backend errors."""


class DivisionByZero(FieldError):
    pass


class NegativeArgument(FieldError):
    pass


class NotPerfectSquare(FieldError):
    pass


def exact_sqrt(a: Fraction) -> Fraction:
    """Square root of a perfect-square rational.

    Raises NegativeArgument for a < 0 and NotPerfectSquare when either the
    numerator or the denominator is not a perfect square.
    """
    if a < 0:
        raise NegativeArgument(f"sqrt of negative rational {a}")
    num, den = a.numerator, a.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NotPerfectSquare(f"{a} is not a perfect-square rational")
    return Fraction(rn, rd)


class ExactField:
    """Arbitrary-precision rational backend."""

    name = "exact"

    def of(self, value) -> Fraction:
        if isinstance(value, float):
            # Floats round-trip exactly, but the caller almost always means a
            # decimal literal; Fraction(float) preserves the IEEE value.
            return Fraction(value)
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero(f"{a} / 0")
        return Fraction(a) / b

    def cmp(self, a, b) -> int:
        if a < b:
            return -1
        if a > b:
            return 1
        return 0

    def sqrt(self, a) -> Fraction:
        return exact_sqrt(Fraction(a))

    def to_float(self, a) -> float:
        return float(a)


class F64Field:
    """IEEE double backend; sqrt total on nonnegatives."""

    name = "f64"

    def of(self, value) -> float:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1.0 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero(f"{a} / 0")
        return a / b

    def cmp(self, a, b) -> int:
        if a < b:
            return -1
        if a > b:
            return 1
        return 0

    def sqrt(self, a) -> float:
        if a < 0:
            raise NegativeArgument(f"sqrt of negative {a}")
        return math.sqrt(a)

    def to_float(self, a) -> float:
        return float(a)


EXACT = ExactField()
F64 = F64Field()

_FIELDS = {"exact": EXACT, "f64": F64}


def field_by_name(name: str):
    try:
        return _FIELDS[name]
    except KeyError:
        raise FieldError(f"unknown field backend {name!r} (expected exact|f64)") from None


def parse_scalar(text: str) -> Fraction:
    """Parse a 'p/q' rational literal or a decimal string."""
    return Fraction(str(text))


def format_scalar(value) -> str:
    """Serialize a scalar as 'p/q' (or a bare integer / float repr)."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


@dataclass(frozen=True)
class PythagoreanVelocity:
    """A speed v with exactly rational clock factor sqrt(1 - v^2/c^2).

    Built from the rational parametrization of the unit circle so that
    (v/c)^2 + gamma_inv^2 = 1 holds bit-exactly.
    """

    v: Fraction
    gamma_inv: Fraction


def pythagorean_velocity(t, c=1, field=EXACT) -> PythagoreanVelocity:
    """Map circle parameter t in [0,1) to (v, gamma_inv).

    v = c * 2t/(1+t^2) and gamma_inv = (1-t^2)/(1+t^2); both rational for
    rational t, and v ranges over [0, c) as t ranges over [0, 1).
    """
    t = field.of(t)
    c = field.of(c)
    if not (0 <= t < 1):
        raise FieldError(f"circle parameter {t} outside [0, 1)")
    denom = 1 + t * t
    v = c * 2 * t / denom
    gamma_inv = (1 - t * t) / denom
    return PythagoreanVelocity(v=v, gamma_inv=gamma_inv)

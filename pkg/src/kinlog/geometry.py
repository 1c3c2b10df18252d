"""Coordinate geometry of Q^4: events, separations, worldlines, light cones.

Events are plain 4-tuples (time coordinate first), velocities 3-tuples.
Squared-distance variants are preferred throughout so the exact backend never
needs a radical; the radical version exists for display and for Pythagorean
configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .scalars import EXACT, NotPerfectSquare

Event = Tuple
Vel3 = Tuple


class GeometryError(Exception):
    pass


class HorizontalSegment(GeometryError):
    """Speed/velocity are undefined on a segment with equal time coordinates."""


def as_event(coords: Sequence) -> Event:
    if len(coords) != 4:
        raise GeometryError(f"event needs 4 coordinates, got {len(coords)}")
    return tuple(Fraction(c) if not isinstance(c, float) else c for c in coords)


def space_sq(x: Event, y: Event):
    """Squared spatial distance; total, never needs a radical."""
    return sum((x[i] - y[i]) ** 2 for i in (1, 2, 3))


def space(x: Event, y: Event, field=EXACT):
    """Spatial distance sqrt((x1-y1)^2 + (x2-y2)^2 + (x3-y3)^2).

    In the exact backend the squared distance must be a perfect square;
    callers that cannot guarantee that should use space_sq.
    """
    return field.sqrt(space_sq(x, y))


def time_diff(x: Event, y: Event):
    """Time difference |x0 - y0|."""
    return abs(x[0] - y[0])


# Contract alias; `time` is the operation's published name.
time = time_diff


def sub4(x: Event, y: Event) -> Event:
    return tuple(a - b for a, b in zip(x, y))


def add4(x: Event, y: Event) -> Event:
    return tuple(a + b for a, b in zip(x, y))


def dot3(u: Vel3, v: Vel3):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def norm_sq3(v: Vel3):
    return dot3(v, v)


@dataclass(frozen=True)
class LightCone:
    """Cone of classical light lines with apex, drift velocity, and speed c.

    Drift velocity (0,0,0) gives a right cone.
    """

    apex: Event
    velocity: Vel3
    c: object

    def __post_init__(self):
        if not self.c > 0:
            raise GeometryError(f"light cone needs c > 0, got {self.c}")


def on_cone(x: Event, cone: LightCone) -> bool:
    """Whether x satisfies (x-vt)^2 + (y-vt)^2 + (z-vt)^2 = (ct)^2 apex-relatively."""
    d = sub4(x, cone.apex)
    t = d[0]
    rel = tuple(d[i + 1] - cone.velocity[i] * t for i in range(3))
    return norm_sq3(rel) == (cone.c * t) ** 2


@dataclass(frozen=True)
class WorldlineSegment:
    a: Event
    b: Event

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise GeometryError("worldline segment endpoints must be distinct")

    @property
    def horizontal(self) -> bool:
        return self.a[0] == self.b[0]


def segment_velocity(seg: WorldlineSegment) -> Vel3:
    """Space displacement per unit time along the segment.

    Undefined (HorizontalSegment) when the endpoints are simultaneous; the
    partial functions speed/velocity are only written where defined.
    """
    dt = seg.b[0] - seg.a[0]
    if dt == 0:
        raise HorizontalSegment(f"segment {seg.a} -> {seg.b} is horizontal")
    return tuple((seg.b[i] - seg.a[i]) / dt for i in (1, 2, 3))


def _is_multiple(target: Event, base: Event) -> bool:
    """Whether target = a * base for some scalar a."""
    pivot = next((i for i in range(4) if base[i] != 0), None)
    if pivot is None:
        return all(c == 0 for c in target)
    a = target[pivot] / base[pivot]
    return all(target[i] == a * base[i] for i in range(4))


def collinear(x: Event, y: Event, z: Event) -> bool:
    """Whether some scalar a satisfies z-x = a(y-x) or y-z = a(z-x)."""
    return _is_multiple(sub4(z, x), sub4(y, x)) or _is_multiple(sub4(y, z), sub4(z, x))

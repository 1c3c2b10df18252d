"""Deterministic generators of exactly-representable test data.

Velocities come from Pythagorean configurations so that every radical the
transformation suite needs (|v| and sqrt(1 - v^2/c^2)) is rational: speeds
are drawn from the rational circle parametrization and directions from
integer vectors whose norm is an integer.  Rotations come from integer
quaternions, which always produce rational orthogonal matrices.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, List, Tuple

from .transforms import AffineMap4, boost_to_rest, compose_all, galilean_boost, lorentz_boost, rotation_to_axis
from .scalars import pythagorean_velocity

# Integer direction vectors with integer Euclidean norm, one representative
# per shape; signs and coordinate permutations are applied on top.
_PYTHAGOREAN_TRIPLES: Tuple[Tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1),
    (3, 4, 0, 5),
    (1, 2, 2, 3),
    (2, 3, 6, 7),
    (1, 4, 8, 9),
    (4, 4, 7, 9),
    (2, 6, 9, 11),
    (6, 6, 7, 11),
    (2, 5, 14, 15),
    (12, 15, 16, 25),
)


def unit_directions(rng: random.Random) -> Iterator[Tuple[Fraction, Fraction, Fraction]]:
    """Endless stream of rational unit 3-vectors."""
    while True:
        a, b, c, n = _PYTHAGOREAN_TRIPLES[rng.randrange(len(_PYTHAGOREAN_TRIPLES))]
        comps = [Fraction(a, n), Fraction(b, n), Fraction(c, n)]
        rng.shuffle(comps)
        yield tuple(comp * rng.choice((1, -1)) for comp in comps)


def pythagorean_speeds(count: int, c=1, rng: random.Random | None = None) -> List[Fraction]:
    """Speeds in [0, c) whose clock factor sqrt(1 - v^2/c^2) is rational."""
    rng = rng or random.Random(0)
    out = [Fraction(0)]
    while len(out) < count:
        q = rng.randrange(2, 12)
        p = rng.randrange(1, q)
        out.append(pythagorean_velocity(Fraction(p, q), c).v)
    return out[:count]


def pythagorean_velocities(count: int, c=1, rng: random.Random | None = None, include_zero=True) -> List[Tuple]:
    """STL velocity 3-vectors with rational |v| and rational clock factor."""
    rng = rng or random.Random(0)
    dirs = unit_directions(rng)
    out = [(Fraction(0), Fraction(0), Fraction(0))] if include_zero else []
    speeds = pythagorean_speeds(count + 1, c, rng)[1:]
    for v in speeds:
        if len(out) >= count:
            break
        u = next(dirs)
        out.append(tuple(v * comp for comp in u))
    return out[:count]


def ftl_velocities(count: int, rng: random.Random | None = None, lo=Fraction(1, 20), hi=Fraction(50)) -> List[Tuple]:
    """Finite-speed 3-vectors with rational norm spanning several magnitudes."""
    rng = rng or random.Random(0)
    dirs = unit_directions(rng)
    out = []
    span = float(hi / lo)
    for i in range(count):
        frac = i / max(count - 1, 1)
        mag = lo * Fraction(round(span**frac * 16), 16)
        if mag == 0:
            mag = lo
        u = next(dirs)
        out.append(tuple(mag * comp for comp in u))
    return out


def rational_rotation(rng: random.Random):
    """Rational orthogonal 3x3 with determinant +1 from an integer quaternion."""
    while True:
        a, b, c, d = (rng.randrange(-4, 5) for _ in range(4))
        n = a * a + b * b + c * c + d * d
        if n:
            break
    n = Fraction(n)
    return (
        (Fraction(a * a + b * b - c * c - d * d) / n, Fraction(2 * (b * c - a * d)) / n, Fraction(2 * (b * d + a * c)) / n),
        (Fraction(2 * (b * c + a * d)) / n, Fraction(a * a - b * b + c * c - d * d) / n, Fraction(2 * (c * d - a * b)) / n),
        (Fraction(2 * (b * d - a * c)) / n, Fraction(2 * (c * d + a * b)) / n, Fraction(a * a - b * b - c * c + d * d) / n),
    )


def spatial_isometry_map(rng: random.Random, allow_reflection=True) -> AffineMap4:
    """Linear map fixing e0 whose spatial block is a rational isometry."""
    rot = rational_rotation(rng)
    if allow_reflection and rng.random() < 0.3:
        rot = tuple((r[0], r[1], -r[2]) for r in rot)
    rows = [[1, 0, 0, 0]] + [[0, *row] for row in rot]
    return AffineMap4.from_rows(rows)


def _rand_frac(rng: random.Random, num=6, den=4) -> Fraction:
    return Fraction(rng.randrange(-num, num + 1), rng.randrange(1, den + 1))


def random_translation(rng: random.Random) -> Tuple:
    return tuple(_rand_frac(rng) for _ in range(4))


def trivial_maps(count: int, rng: random.Random | None = None) -> List[AffineMap4]:
    """Spatial isometries combined with arbitrary spacetime translations."""
    rng = rng or random.Random(0)
    out = [AffineMap4.identity(), AffineMap4.translation_by((1, 0, 0, 0))]
    while len(out) < count:
        m = spatial_isometry_map(rng)
        out.append(AffineMap4(m.linear, random_translation(rng)))
    return out[:count]


def galilean_maps(count: int, rng: random.Random | None = None) -> List[AffineMap4]:
    """Time-orientation-preserving Galilean maps: isometry, boost, translation."""
    rng = rng or random.Random(0)
    out = []
    while len(out) < count:
        boost = galilean_boost(tuple(_rand_frac(rng) for _ in range(3)))
        m = compose_all(spatial_isometry_map(rng), boost)
        out.append(AffineMap4(m.linear, random_translation(rng)))
    return out[:count]


def poincare_maps(count: int, c=1, rng: random.Random | None = None) -> List[AffineMap4]:
    """Exact Poincare maps: isometries around x-axis Lorentz boosts."""
    rng = rng or random.Random(0)
    speeds = pythagorean_speeds(count + 1, c, rng)
    out = []
    for v in speeds[:count]:
        m = compose_all(spatial_isometry_map(rng), lorentz_boost(v, c), spatial_isometry_map(rng))
        out.append(AffineMap4(m.linear, random_translation(rng)))
    return out


def compatible_galilean_pair(w: AffineMap4, u: Tuple) -> Tuple:
    """Ether velocity seen downstream of w given velocity u upstream.

    For a time-orientation-preserving Galilean w, the image of the direction
    (1, u) is (1, v); returns v.  This is exactly the relation between
    v_h(e) and v_k(e) when w is the worldview transformation from h to k.
    """
    img = w.apply_vector((Fraction(1), *u))
    if img[0] != 1:
        raise ValueError("map does not preserve time orientation")
    return tuple(img[1:])

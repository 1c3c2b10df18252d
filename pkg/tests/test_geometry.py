import itertools
import random
from fractions import Fraction

import pytest

from kinlog.geometry import (
    GeometryError,
    HorizontalSegment,
    LightCone,
    WorldlineSegment,
    collinear,
    on_cone,
    segment_velocity,
    space,
    space_sq,
    sub4,
    time_diff,
)


def ev(*coords):
    return tuple(Fraction(c) for c in coords)


def test_space_examples():
    assert space(ev(0, 0, 0, 0), ev(0, 3, 4, 0)) == 5
    x = ev(1, 2, 3, 4)
    assert space(x, x) == 0
    assert space_sq(ev(1, 1, 2, 2), ev(0, 0, 0, 0)) == 9


def test_time_examples():
    assert time_diff(ev(3, 0, 0, 0), ev(1, 5, 5, 5)) == 2
    x = ev(7, 1, 1, 1)
    assert time_diff(x, x) == 0
    assert time_diff(ev(-1, 0, 0, 0), ev(1, 0, 0, 0)) == 2


def test_space_sq_symmetric_nonnegative():
    rng = random.Random(11)
    for _ in range(1000):
        x = tuple(Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(4))
        y = tuple(Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(4))
        assert space_sq(x, y) == space_sq(y, x) >= 0


def test_on_cone_examples():
    origin = ev(0, 0, 0, 0)
    right = LightCone(apex=origin, velocity=(0, 0, 0), c=Fraction(1))
    assert on_cone(ev(1, 1, 0, 0), right)
    assert not on_cone(ev(1, 0, 0, 0), right)
    v = Fraction(2, 7)
    moving = LightCone(apex=origin, velocity=(v, 0, 0), c=Fraction(1))
    assert on_cone(ev(1, v + 1, 0, 0), moving)
    assert not on_cone(ev(1, 0, 0, 0), moving)
    # timelike axis point sits on the cone only when the drift speed equals c
    grazing = LightCone(apex=origin, velocity=(Fraction(1), 0, 0), c=Fraction(1))
    assert on_cone(ev(1, 0, 0, 0), grazing)


def test_on_cone_translation_invariant():
    rng = random.Random(3)
    for _ in range(200):
        apex = tuple(Fraction(rng.randrange(-5, 6)) for _ in range(4))
        shift = tuple(Fraction(rng.randrange(-5, 6)) for _ in range(4))
        v = (Fraction(1, 3), Fraction(-1, 2), Fraction(0))
        cone = LightCone(apex=apex, velocity=v, c=Fraction(2))
        t = Fraction(rng.randrange(-4, 5))
        u = (Fraction(2, 3), Fraction(2, 3), Fraction(1, 3))  # unit vector
        x = tuple(
            a + d
            for a, d in zip(apex, (t, *(v[i] * t + 2 * u[i] * t for i in range(3))))
        )
        assert on_cone(x, cone)
        moved = LightCone(apex=tuple(a + s for a, s in zip(apex, shift)), velocity=v, c=Fraction(2))
        assert on_cone(tuple(a + s for a, s in zip(x, shift)), moved)


def test_cone_rejects_degenerate_c():
    with pytest.raises(GeometryError):
        LightCone(apex=ev(0, 0, 0, 0), velocity=(0, 0, 0), c=Fraction(0))


def test_segment_velocity():
    seg = WorldlineSegment(ev(0, 0, 0, 0), ev(1, Fraction(3, 5), 0, 0))
    assert segment_velocity(seg) == (Fraction(3, 5), 0, 0)
    seg = WorldlineSegment(ev(1, 1, 1, 1), ev(3, 5, 1, 1))
    assert segment_velocity(seg) == (2, 0, 0)
    with pytest.raises(HorizontalSegment):
        segment_velocity(WorldlineSegment(ev(0, 0, 0, 0), ev(0, 1, 0, 0)))
    with pytest.raises(GeometryError):
        WorldlineSegment(ev(0, 0, 0, 0), ev(0, 0, 0, 0))


def test_collinear_examples():
    p = ev(2, 3, 4, 5)
    assert collinear(p, p, p)
    assert collinear(ev(0, 0, 0, 0), ev(1, 1, 0, 0), ev(2, 2, 0, 0))
    assert not collinear(ev(0, 0, 0, 0), ev(1, 0, 0, 0), ev(1, 1, 0, 0))


def _rank_le_1(d1, d2):
    for i, j in itertools.combinations(range(4), 2):
        if d1[i] * d2[j] - d1[j] * d2[i] != 0:
            return False
    return True


def test_collinear_matches_rank_oracle_on_grid():
    grid = [
        (Fraction(a), Fraction(b), Fraction(0), Fraction(c))
        for a in range(-1, 2)
        for b in range(-1, 2)
        for c in range(-1, 2)
    ]
    rng = random.Random(5)
    triples = [tuple(rng.choice(grid) for _ in range(3)) for _ in range(400)]
    triples += [(grid[0], grid[1], grid[2]), (grid[4], grid[4], grid[7])]
    for x, y, z in triples:
        expected = _rank_le_1(sub4(y, x), sub4(z, x))
        assert collinear(x, y, z) == expected

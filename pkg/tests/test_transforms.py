import random
from fractions import Fraction

import pytest

from kinlog.generators import (
    compatible_galilean_pair,
    ftl_velocities,
    galilean_maps,
    poincare_maps,
    pythagorean_speeds,
    pythagorean_velocities,
    trivial_maps,
)
from kinlog.geometry import LightCone, norm_sq3, on_cone
from kinlog.scalars import EXACT, NotPerfectSquare
from kinlog.transforms import (
    AffineMap4,
    SpeedNotSTL,
    Singular,
    boost_to_rest,
    classify,
    clock_scale,
    compose_all,
    core_map,
    einstein_sync,
    ftl_of_stl,
    galilean_boost,
    lorentz_boost,
    radarization,
    rotation_to_axis,
    stl_of_ftl,
    x_map,
    y_map,
)

F = Fraction
ID = AffineMap4.identity()


def test_affine_group_laws():
    rng = random.Random(2)
    for m in galilean_maps(10, rng) + poincare_maps(10, 1, rng):
        assert m.inverse().compose(m) == ID
        assert m.compose(m.inverse()) == ID
        assert m.determinant() != 0
    with pytest.raises(Singular):
        AffineMap4.from_rows([[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).inverse()


def test_galilean_boost_examples():
    assert galilean_boost((0, 0, 0)) == ID
    b = galilean_boost((F(1, 2), 0, 0))
    assert b.apply((2, -1, 0, 0)) == (2, 0, 0, 0)
    b = galilean_boost((1, 2, 3))
    assert b.apply((1, 0, 0, 0)) == (1, 1, 2, 3)


def test_rotation_to_axis_cases():
    assert rotation_to_axis((F(-3), 0, 0)) == ID
    r = rotation_to_axis((F(3), 0, 0))
    assert r.linear == AffineMap4.from_rows([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]).linear
    r = rotation_to_axis((0, F(4), F(3)))
    assert r.apply((1, 0, 4, 3)) == (1, -5, 0, 0)


def test_rotation_is_time_fixing_isometry():
    rng = random.Random(7)
    for v in pythagorean_velocities(40, 1, rng):
        r = rotation_to_axis(v)
        cls = classify(r, 1)
        assert cls.trivial and cls.galilean
        s2 = norm_sq3(v)
        got = r.apply((1, *v))
        assert got[0] == 1 and got[1] ** 2 == s2 and got[2] == 0 and got[3] == 0
        if any(c != 0 for c in v):
            assert got[1] <= 0
        assert r.inverse().compose(r) == ID


def test_einstein_sync_examples():
    assert einstein_sync(0, 1) == ID
    e = einstein_sync(F(3, 5), 1)
    assert e.apply((1, F(3, 5), 0, 0)) == (1, 0, 0, 0)
    assert e.apply((0, 0, 1, 1)) == (0, 0, F(5, 4), F(5, 4))
    with pytest.raises(SpeedNotSTL):
        einstein_sync(1, 1)
    with pytest.raises(NotPerfectSquare):
        einstein_sync(F(1, 2), 1)


def test_lorentz_boost_examples():
    assert lorentz_boost(0, 1) == ID
    l = lorentz_boost(F(3, 5), 1)
    assert l.linear[0][:2] == (F(5, 4), F(-3, 4))
    assert l.linear[1][:2] == (F(-3, 4), F(5, 4))
    assert l.linear[2] == (0, 0, 1, 0) and l.linear[3] == (0, 0, 0, 1)
    cls = classify(l, 1)
    assert cls.poincare and not cls.galilean and not cls.trivial
    # factorization: lorentz = scale after sync
    assert l == clock_scale(F(3, 5), 1).compose(einstein_sync(F(3, 5), 1))


def test_core_map_examples():
    assert core_map(0, 1) == ID
    v, c = F(3, 5), 1
    cm = core_map(v, c)
    assert cm == lorentz_boost(v, c).compose(galilean_boost((v, 0, 0)))
    assert cm.apply((1, -v, 0, 0)) == tuple(F(5, 4) * x for x in (1, -v, 0, 0))
    assert cm.apply((1, 0, 0, 0)) == (F(4, 5), 0, 0, 0)


def test_radarization_examples():
    assert radarization((0, 0, 0), 1) == ID
    rad = radarization((F(3, 5), 0, 0), 1)
    assert rad.apply((0, 0, 1, 0)) == (0, 0, 1, 0)
    assert rad.apply((1, 0, 0, 0)) == (F(4, 5), 0, 0, 0)
    with pytest.raises(SpeedNotSTL):
        radarization((1, 0, 0), 1)


def _rad_cases(count, c=1, seed=4):
    rng = random.Random(seed)
    return [(v, radarization(v, c)) for v in pythagorean_velocities(count, c, rng)]


def test_rad_time_axis_and_scale():
    c = 1
    for v, rad in _rad_cases(100):
        g = EXACT.sqrt(1 - norm_sq3(v) / (c * c))
        for t in (F(1), F(-2), F(7, 3)):
            img = rad.apply((t, 0, 0, 0))
            assert img == (g * t, 0, 0, 0)
        # conversely only time-axis points land on the time axis
        inv = rad.inverse()
        assert inv.apply((1, 0, 0, 0))[1:] == (0, 0, 0)


def test_rad_moving_cone_to_right_cone():
    c = F(2)
    rng = random.Random(9)
    for v in pythagorean_velocities(25, c, rng):
        rad = radarization(v, c)
        cone = LightCone(apex=(0, 0, 0, 0), velocity=v, c=c)
        right = LightCone(apex=(0, 0, 0, 0), velocity=(0, 0, 0), c=c)
        for t in (F(1), F(-1), F(3, 2), F(2)):
            for u in ((1, 0, 0), (0, 1, 0), (F(3, 5), F(4, 5), 0), (F(2, 3), F(2, 3), F(1, 3))):
                x = (t, *(v[i] * t + c * u[i] * t for i in range(3)))
                assert on_cone(x, cone)
                assert on_cone(rad.apply(x), right)


def test_rad_orthogonal_fixpoints_and_drift_line():
    c = 1
    rng = random.Random(13)
    for v, rad in _rad_cases(100, seed=13):
        if all(comp == 0 for comp in v):
            continue
        # two independent spatial vectors orthogonal to v
        vx, vy, vz = v
        for w in ((0, -vz, vy), (-vy, vx, 0), (-vz, 0, vx)):
            if all(comp == 0 for comp in w):
                continue
            x = (0, *w)
            assert rad.apply(x) == x
        img = rad.apply((1, *v))
        # the drift line through the origin is preserved
        assert img[0] != 0
        lam = img[0]
        assert img == tuple(lam * comp for comp in (1, *v))
        # parallel lines map to parallel ones
        base = (F(1, 3), F(-2), F(5, 7), F(1))
        d = tuple(rad.apply(tuple(b + p for b, p in zip(base, (1, *v))))[i] - rad.apply(base)[i] for i in range(4))
        assert d == img


def test_classify_examples():
    cls = classify(ID, 1)
    assert cls.galilean and cls.poincare and cls.trivial
    cls = classify(galilean_boost((F(1, 2), 0, 0)), 1)
    assert cls.galilean and not cls.poincare and not cls.trivial
    rng = random.Random(21)
    for t in trivial_maps(20, rng):
        cls = classify(t, 1)
        assert cls.trivial and cls.galilean and cls.poincare
    for g in galilean_maps(20, rng):
        assert classify(g, 1).galilean
    for p in poincare_maps(20, 1, rng):
        assert classify(p, 1).poincare


def test_speed_remaps():
    c = F(1)
    assert stl_of_ftl((0, 0, 0), c) == (0, 0, 0)
    assert ftl_of_stl((0, 0, 0), c) == (0, 0, 0)
    assert ftl_of_stl((F(1, 2), 0, 0), c) == (1, 0, 0)
    with pytest.raises(SpeedNotSTL):
        ftl_of_stl((1, 0, 0), c)
    rng = random.Random(31)
    for v in pythagorean_velocities(50, c, rng):
        V = ftl_of_stl(v, c)
        assert stl_of_ftl(V, c) == v
    for V in ftl_velocities(50, rng):
        v = stl_of_ftl(V, c)
        assert norm_sq3(v) < c * c
        assert ftl_of_stl(v, c) == V


def test_xy_maps():
    c = F(1)
    assert x_map((0, 0, 0), c) == ID
    rng = random.Random(37)
    for V in ftl_velocities(60, rng):
        v = stl_of_ftl(V, c)
        assert x_map(V, c).inverse() == y_map(v, c)
        img = x_map(V, c).apply((1, *V))
        assert img == (1, *v)


def test_cannon_and_mosquito_shapes():
    # placements built from Pythagorean data keep both ether velocities exactly
    # representable; w is the worldview transformation between the two frames
    c = F(1)
    rng = random.Random(41)
    from kinlog.generators import random_translation, spatial_isometry_map

    vels = pythagorean_velocities(60, c, rng)
    checked = 0
    for a, b in zip(vels[::2], vels[1::2]):
        ph = AffineMap4(compose_all(spatial_isometry_map(rng), galilean_boost(a)).linear, random_translation(rng))
        pk = AffineMap4(compose_all(spatial_isometry_map(rng), galilean_boost(b)).linear, random_translation(rng))
        w = pk.inverse().compose(ph)
        u = ph.inverse().apply_vector((1, 0, 0, 0))[1:]
        v = pk.inverse().apply_vector((1, 0, 0, 0))[1:]
        assert compatible_galilean_pair(w, u) == v
        conj = compose_all(radarization(v, c), w, radarization(u, c).inverse())
        assert classify(conj, c).poincare
        back = compose_all(radarization(v, c).inverse(), conj, radarization(u, c))
        assert back == w
        assert classify(back, c).galilean
        checked += 1
    assert checked >= 25

"""Exact affine maps of Q^4 and the concrete transformations of kinematics.

Everything here is an invertible affine map: Galilean boosts, the rotation
that puts a drift velocity onto the negative x-axis, the Poincare-Einstein
synchronisation map, the clock-scale correction, Lorentz boosts, the core map,
radarization, the slower-than-light speed remaps and their boost composites.
Composition and inversion are exact in the rational backend, so group laws and
the lemma suites can assert bit-equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .geometry import Vel3, dot3, norm_sq3
from .scalars import EXACT, NotPerfectSquare

Row = Tuple
Matrix = Tuple[Row, Row, Row, Row]


class TransformError(Exception):
    pass


class SpeedNotSTL(TransformError):
    """Raised when a construction requires a slower-than-light speed."""


class Singular(TransformError):
    pass


def _frac_rows(rows) -> Matrix:
    return tuple(tuple(Fraction(v) if not isinstance(v, float) else v for v in row) for row in rows)


_ID4 = _frac_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4)
    )


def _mat_vec(a: Matrix, v) -> Tuple:
    return tuple(sum(a[i][k] * v[k] for k in range(4)) for i in range(4))


def _mat_inv(a: Matrix) -> Matrix:
    # Gauss-Jordan with exact pivoting; entries are rationals (or floats in
    # the f64 backend, where ordinary partial pivoting applies).
    n = 4
    aug = [list(a[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot][col] == 0:
            raise Singular("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [rv - f * cv for rv, cv in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _det(a: Matrix):
    rows = [list(r) for r in a]
    det = 1
    for col in range(4):
        pivot = next((r for r in range(col, 4) if rows[r][col] != 0), None)
        if pivot is None:
            return 0 * rows[0][0]
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = rows[col][col]
        for r in range(col + 1, 4):
            if rows[r][col] != 0:
                f = rows[r][col] / inv
                rows[r] = [rv - f * cv for rv, cv in zip(rows[r], rows[col])]
    return det


@dataclass(frozen=True)
class AffineMap4:
    """Invertible affine map of Q^4: x -> linear @ x + translation."""

    linear: Matrix
    translation: Tuple = (Fraction(0),) * 4

    @staticmethod
    def identity() -> "AffineMap4":
        return AffineMap4(_ID4)

    @staticmethod
    def from_rows(rows, translation=(0, 0, 0, 0)) -> "AffineMap4":
        return AffineMap4(_frac_rows(rows), tuple(Fraction(t) if not isinstance(t, float) else t for t in translation))

    @staticmethod
    def translation_by(offset) -> "AffineMap4":
        return AffineMap4.from_rows(_ID4, offset)

    def apply(self, point) -> Tuple:
        img = _mat_vec(self.linear, point)
        return tuple(a + b for a, b in zip(img, self.translation))

    def apply_vector(self, d) -> Tuple:
        """Apply the linear part only (difference vectors)."""
        return _mat_vec(self.linear, d)

    def compose(self, other: "AffineMap4") -> "AffineMap4":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        lin = _mat_mul(self.linear, other.linear)
        tr = tuple(a + b for a, b in zip(_mat_vec(self.linear, other.translation), self.translation))
        return AffineMap4(lin, tr)

    def inverse(self) -> "AffineMap4":
        inv = _mat_inv(self.linear)
        tr = tuple(-v for v in _mat_vec(inv, self.translation))
        return AffineMap4(inv, tr)

    def determinant(self):
        return _det(self.linear)

    @property
    def is_linear(self) -> bool:
        return all(t == 0 for t in self.translation)

    def to_lists(self):
        """Row-major 4x4 plus 4-vector, for report dumps."""
        return [list(r) for r in self.linear], list(self.translation)


def compose_all(*maps: AffineMap4) -> AffineMap4:
    """Compose left to right in application order: compose_all(f, g)(x) = f(g(x))."""
    out = maps[0]
    for m in maps[1:]:
        out = out.compose(m)
    return out


def galilean_boost(v: Vel3) -> AffineMap4:
    """Time-dependent translation (t,x,y,z) -> (t, x+t*vx, y+t*vy, z+t*vz).

    The scalar tx-plane boost with speed v is galilean_boost((v,0,0)); it maps
    the line x = -vt to the time axis.
    """
    vx, vy, vz = (Fraction(c) if not isinstance(c, float) else c for c in v)
    return AffineMap4.from_rows(
        [[1, 0, 0, 0], [vx, 1, 0, 0], [vy, 0, 1, 0], [vz, 0, 0, 1]]
    )


def boost_to_rest(v: Vel3) -> AffineMap4:
    """Galilean boost that maps bodies moving with velocity v to stationary ones."""
    return galilean_boost(tuple(-c for c in v))


def rotation_to_axis(v: Vel3, field=EXACT) -> AffineMap4:
    """Spatial isometry fixing the time axis with R(1,vx,vy,vz) = (1,-|v|,0,0).

    Case split:
      * vy != 0 or vz != 0: the general matrix (spatial block scaled by 1/|v|);
      * vx <= 0 and vy = vz = 0: the identity;
      * vx > 0 and vy = vz = 0: diag(1,-1,-1,-1).

    Exactness requires |v| to be computable in the backend (|v|^2 a perfect
    square in the exact backend; the test generators guarantee this).
    """
    vx, vy, vz = v
    if vy == 0 and vz == 0:
        if vx <= 0:
            return AffineMap4.identity()
        return AffineMap4.from_rows(
            [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
        )
    s = field.sqrt(norm_sq3(v))
    p = vy * vy + vz * vz
    w = (s - vx) / p
    rows = [
        [1, 0, 0, 0],
        [0, -vx / s, -vy / s, -vz / s],
        [0, vy / s, (-vx - vz * vz * w) / s, (vy * vz * w) / s],
        [0, vz / s, (vy * vz * w) / s, (-vx - vy * vy * w) / s],
    ]
    return AffineMap4.from_rows(rows)


def _gamma_inv(v, c, field):
    """sqrt(1 - v^2/c^2); raises SpeedNotSTL unless |v| < c.

    Signed speeds are accepted: the synchronisation and boost formulas are
    algebraic in v, and the internal constructions use both orientations.
    """
    if not v * v < c * c:
        raise SpeedNotSTL(f"speed {v} not inside (-c, c) for c={c}")
    return field.sqrt(1 - (v * v) / (c * c))


def einstein_sync(v, c, field=EXACT) -> AffineMap4:
    """Radar-synchronisation map for an observer moving with speed v along x.

    Built from the two light-signal equations: the event (t1, x1) read off by
    radar becomes ((c^2 t1 - v x1)/(c^2 - v^2), (c^2 x1 - c^2 v t1)/(c^2-v^2));
    directions orthogonal to the motion stretch by 1/sqrt(1 - v^2/c^2).
    """
    g = _gamma_inv(v, c, field)
    d = 1 - (v * v) / (c * c)
    return AffineMap4.from_rows(
        [
            [1 / d, (-v / (c * c)) / d, 0, 0],
            [-v / d, 1 / d, 0, 0],
            [0, 0, 1 / g, 0],
            [0, 0, 0, 1 / g],
        ]
    )


def clock_scale(v, c, field=EXACT) -> AffineMap4:
    """Uniform scaling by sqrt(1 - v^2/c^2) that slows the moving clock down."""
    g = _gamma_inv(v, c, field)
    return AffineMap4.from_rows(
        [[g, 0, 0, 0], [0, g, 0, 0], [0, 0, g, 0], [0, 0, 0, g]]
    )


def lorentz_boost(v, c, field=EXACT) -> AffineMap4:
    """Lorentz boost along x: the clock-scale correction after radar sync."""
    g = _gamma_inv(v, c, field)
    return AffineMap4.from_rows(
        [
            [1 / g, (-v / (c * c)) / g, 0, 0],
            [-v / g, 1 / g, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]
    )


def core_map(v, c, field=EXACT) -> AffineMap4:
    """The speed-only part of radarization: scale after sync after boost.

    Equals lorentz_boost(v,c) composed with galilean_boost((v,0,0)).
    """
    g = _gamma_inv(v, c, field)
    return AffineMap4.from_rows(
        [
            [g, (-v / (c * c)) / g, 0, 0],
            [0, 1 / g, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]
    )


def radarization(v: Vel3, c, field=EXACT) -> AffineMap4:
    """Radar re-coordinatization for an observer seeing the ether drift with v.

    The composite R^-1 o S o E o G o R: rotate the drift into the negative
    x direction, boost the drift line to the time axis, apply radar
    synchronisation and the clock-scale correction, rotate back.  A linear
    bijection for every |v| < c.
    """
    s_sq = norm_sq3(v)
    if not s_sq < c * c:
        raise SpeedNotSTL(f"|v|^2 = {s_sq} not below c^2 = {c * c}")
    if all(comp == 0 for comp in v):
        return AffineMap4.identity()
    s = field.sqrt(s_sq)
    r = rotation_to_axis(v, field)
    return compose_all(r.inverse(), core_map(s, c, field), r)


def stl_of_ftl(V: Vel3, c, field=EXACT) -> Vel3:
    """Map an arbitrary finite velocity V to the slower-than-light c*V/(1+|V|)."""
    n = field.sqrt(norm_sq3(V))
    return tuple(c * comp / (1 + n) for comp in V)


def ftl_of_stl(v: Vel3, c, field=EXACT) -> Vel3:
    """Inverse remap v/(c - |v|); requires |v| < c."""
    n = field.sqrt(norm_sq3(v))
    if not n < c:
        raise SpeedNotSTL(f"|v| = {n} not below c = {c}")
    return tuple(comp / (c - n) for comp in v)


def x_map(V: Vel3, c, field=EXACT) -> AffineMap4:
    """Boost composite sending the velocity-V line to the velocity-v line,
    where v is the slower-than-light remap of V."""
    v = stl_of_ftl(V, c, field)
    return boost_to_rest(v).inverse().compose(boost_to_rest(V))


def y_map(v: Vel3, c, field=EXACT) -> AffineMap4:
    """Boost composite sending the velocity-v line to the velocity-V line,
    where V is the finite-speed remap of v; requires |v| < c."""
    V = ftl_of_stl(v, c, field)
    return boost_to_rest(V).inverse().compose(boost_to_rest(v))


@dataclass(frozen=True)
class TransformClass:
    galilean: bool
    poincare: bool
    trivial: bool


_BASE_POINTS = (
    (Fraction(0),) * 4,
    (Fraction(1), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
)
_PROBE_SHIFT = (Fraction(1), Fraction(2), Fraction(3), Fraction(4))


def classify(m: AffineMap4, c) -> TransformClass:
    """Decide the Galilean / Poincare / trivial flags by finite point pairs.

    The defining conditions are polynomial identities of degree <= 2 in the
    entries of the linear part A (translations cancel in pair differences), so
    checking them on the 10 unordered pairs of {origin, e0, e1, e2, e3} and on
    the same pairs shifted by a probe vector is sufficient:

    * the pair differences are the unit vectors ei and the differences ei-ej;
    * Galilean: |time| preservation on (0,e0) forces |A00| = 1 and on (0,ei)
      forces A0i = 0 (i >= 1), after which |(Ad)0| = |d0| holds for every d;
      the simultaneity clause needs the spatial block B to be orthogonal,
      which the unit norms |B ei| = 1 (pairs (0,ei)) plus the polarization
      identities |B(ei-ej)|^2 = 2 (pairs (ei,ej)) pin down exactly;
    * Poincare: preservation of q(d) = c^2 d0^2 - |d|^2 on the ei fixes the
      diagonal of A^T eta A and on the ei-ej fixes the off-diagonal entries,
      i.e. A^T eta A = eta in full;
    * trivial: additionally A e0 = e0 exactly (time direction preserved, no
      spatial drift of the time axis) and A0i = 0, making A a time-preserving
      spatial isometry; the translation is unconstrained.

    The shifted copies re-run the identical difference computation through
    `apply`, guarding the affine assumption itself.
    """

    def q(d):
        return c * c * d[0] * d[0] - (d[1] * d[1] + d[2] * d[2] + d[3] * d[3])

    def sp_sq(d):
        return d[1] * d[1] + d[2] * d[2] + d[3] * d[3]

    galilean = True
    poincare = True
    trivial = True
    for shift in ((Fraction(0),) * 4, _PROBE_SHIFT):
        pts = [tuple(a + b for a, b in zip(p, shift)) for p in _BASE_POINTS]
        imgs = [m.apply(p) for p in pts]
        for i in range(5):
            for j in range(i + 1, 5):
                d = tuple(a - b for a, b in zip(pts[j], pts[i]))
                dd = tuple(a - b for a, b in zip(imgs[j], imgs[i]))
                if q(dd) != q(d):
                    poincare = False
                if abs(dd[0]) != abs(d[0]):
                    galilean = False
                    trivial = False
                if d[0] == 0:
                    if dd[0] != 0 or sp_sq(dd) != sp_sq(d):
                        galilean = False
                        trivial = False
                else:
                    if dd[0] != d[0] or sp_sq(dd) != sp_sq(d):
                        trivial = False
    return TransformClass(galilean=galilean, poincare=poincare, trivial=trivial)

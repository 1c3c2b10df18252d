"""Desk-scale intensional models of the four kinematic theories.

A model carries a field backend, a light speed, and a finite roster of
bodies, each with an analytic placement: observers own an invertible affine
map from their coordinates to the distinguished frame, photons own a light
line in the distinguished frame.  The observer and photon sorts are
conceptually infinite (spacetime is full of potential bodies); the roster is
the finite sample that body quantifiers range over, and evaluation may
synthesize further members from the theory's transformation group.

Classical placements are Galilean maps, relativistic ones Poincare maps;
relativistic rosters are built by conjugating classical placements with
radar re-coordinatization, which realizes the model-transformation direction
of the translation and makes the justification-theorem invariants hold by
construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..generators import pythagorean_speeds, rational_rotation, unit_directions
from ..geometry import norm_sq3
from ..scalars import EXACT, field_by_name, parse_scalar
from ..transforms import (
    AffineMap4,
    classify,
    compose_all,
    galilean_boost,
    lorentz_boost,
    radarization,
    rotation_to_axis,
)

THEORIES = ("CK", "CK-STL", "SR", "SR-e")
CLASSICAL = ("CK", "CK-STL")
RELATIVISTIC = ("SR", "SR-e")


class InvalidSpec(Exception):
    pass


class FTLObserverPresent(InvalidSpec):
    pass


class NotAnObserver(Exception):
    pass


@dataclass(frozen=True)
class Body:
    name: str
    kind: str  # "observer" | "photon"
    placement: Optional[AffineMap4] = None  # observers: own coords -> frame coords
    line: Optional[Tuple[Tuple, Tuple]] = None  # photons: (point, velocity) in frame
    ether: bool = False  # classical ether membership / primitive-ether flag
    synthesized: bool = False

    @property
    def is_observer(self):
        return self.kind == "observer"

    @property
    def is_photon(self):
        return self.kind == "photon"


@dataclass
class Model:
    theory: str
    field: object
    c: Fraction
    bodies: Dict[str, Body]
    frame: str = "e0"
    seed: int = 0
    spec: Optional[dict] = None

    @property
    def is_classical(self):
        return self.theory in CLASSICAL

    def observers(self) -> List[Body]:
        return [b for b in self.bodies.values() if b.is_observer]

    def photons(self) -> List[Body]:
        return [b for b in self.bodies.values() if b.is_photon]

    def ether_members(self) -> List[Body]:
        return [b for b in self.bodies.values() if b.ether]

    def body(self, name: str) -> Body:
        return self.bodies[name]

    def worldview_transform(self, k, h) -> AffineMap4:
        """Map from k's coordinates to h's coordinates."""
        k, h = self._observer(k), self._observer(h)
        return h.placement.inverse().compose(k.placement)

    def _observer(self, b) -> Body:
        if isinstance(b, str):
            b = self.bodies[b]
        if not b.is_observer:
            raise NotAnObserver(f"{b.name} is a {b.kind}")
        return b

    def velocity_of(self, k, b) -> Optional[Tuple]:
        """Velocity of body b in observer k's coordinates; None if undefined."""
        k = self._observer(k)
        if isinstance(b, str):
            b = self.bodies[b]
        inv = k.placement.inverse()
        if b.is_observer:
            d = inv.compose(b.placement).apply_vector((1, 0, 0, 0))
        else:
            p0, v = b.line
            d = inv.apply_vector((Fraction(1), *v))
        if d[0] == 0:
            return None
        return tuple(comp / d[0] for comp in d[1:])

    def frame_event(self, k, x) -> Tuple:
        """k's coordinate point x as an event of the distinguished frame."""
        return self._observer(k).placement.apply(x)

    def sees(self, k, b, x) -> bool:
        """The worldview relation: observer k coordinatizes body b at x."""
        if isinstance(k, str):
            k = self.bodies[k]
        if isinstance(b, str):
            b = self.bodies[b]
        if not k.is_observer:
            return False
        ev = k.placement.apply(x)
        if b.is_observer:
            own = b.placement.inverse().apply(ev)
            return own[1] == 0 and own[2] == 0 and own[3] == 0
        p0, v = b.line
        dt = ev[0] - p0[0]
        return all(ev[i + 1] - p0[i + 1] == v[i] * dt for i in range(3))

    def isotropic_observer(self, e) -> bool:
        """Whether e sees light exactly on right cones of the model speed.

        Relativistic placements preserve right cones, so every observer
        qualifies; classically only the trivially-placed (ether) ones do.
        """
        if isinstance(e, str):
            e = self.bodies[e]
        if not e.is_observer:
            return False
        if not self.is_classical:
            return True
        return classify(e.placement, self.c).trivial

    def add_body(self, body: Body) -> None:
        if body.name in self.bodies:
            raise InvalidSpec(f"duplicate body name {body.name}")
        self.bodies[body.name] = body


def _classical_placement(velocity, offset, rotation) -> AffineMap4:
    rot_rows = [[1, 0, 0, 0]] + [[0, *row] for row in rotation]
    lin = compose_all(galilean_boost(velocity), AffineMap4.from_rows(rot_rows))
    return AffineMap4(lin.linear, tuple(offset))


def ether_drift(placement: AffineMap4) -> Tuple:
    """Velocity of the distinguished frame in the placed observer's coordinates."""
    d = placement.inverse().apply_vector((1, 0, 0, 0))
    return tuple(comp / d[0] for comp in d[1:])


def relativize_placement(placement: AffineMap4, c, field=EXACT) -> AffineMap4:
    """Conjugate a classical placement by radar re-coordinatization."""
    drift = ether_drift(placement)
    return placement.compose(radarization(drift, c, field).inverse())


def sr_boost_placement(velocity, c, field=EXACT) -> AffineMap4:
    """Rational Poincare map whose time-axis image moves with the velocity.

    Built as the inverse of rotate-boost-rotate; exact whenever |velocity|
    and the clock factor are rational.
    """
    if all(comp == 0 for comp in velocity):
        return AffineMap4.identity()
    r = rotation_to_axis(velocity, field)
    speed = field.sqrt(norm_sq3(velocity))
    to_rest = compose_all(r.inverse(), lorentz_boost(-speed, c, field), r)
    return to_rest.inverse()


def _parse_vec(values, n, what):
    if len(values) != n:
        raise InvalidSpec(f"{what} needs {n} components, got {len(values)}")
    return tuple(parse_scalar(v) for v in values)


def build_model(spec: dict) -> Model:
    """Build and validate a model from a specification dictionary.

    Schema: {"theory", "c", "seed", "bodies": [{"kind", "name"?, "velocity",
    "offset"?, "rotation"?, "trivial_orbit"?, "ether"?}]}.  Scalars are
    rational strings; observer velocities are relative to the distinguished
    frame and must be Pythagorean data in exact mode; a resting frame
    observer e0 is supplied automatically when absent.  The ether flag marks
    classical ether membership or the primitive-ether class and is validated
    against the placement.
    """
    theory = spec.get("theory")
    if theory not in THEORIES:
        raise InvalidSpec(f"theory must be one of {THEORIES}, got {theory!r}")
    fld = field_by_name(spec.get("field", "exact"))
    c = fld.of(parse_scalar(str(spec.get("c", "1"))))
    if not c > 0:
        raise InvalidSpec(f"light speed must be positive, got {c}")
    seed = int(spec.get("seed", 0))
    rng = random.Random(seed)

    classical_placements: Dict[str, Tuple[AffineMap4, bool]] = {}
    photons: List[Body] = []
    counter = {"observer": 0, "photon": 0}

    def next_name(kind):
        counter[kind] += 1
        return f"{'k' if kind == 'observer' else 'ph'}{counter[kind]}"

    body_specs = list(spec.get("bodies", ()))
    names = [bs.get("name") for bs in body_specs if bs.get("name")]
    if "e0" not in names:
        body_specs.insert(0, {"kind": "observer", "name": "e0", "velocity": ["0", "0", "0"], "ether": True})

    for bs in body_specs:
        kind = bs.get("kind", "observer")
        name = bs.get("name") or next_name(kind)
        if kind == "photon":
            v = _parse_vec(bs.get("velocity", ["1", "0", "0"]), 3, "photon velocity")
            if norm_sq3(v) != c * c:
                raise InvalidSpec(f"photon {name} must move at the light speed exactly")
            p0 = _parse_vec(bs.get("offset", [0, 0, 0, 0]), 4, "photon offset")
            photons.append(Body(name=name, kind="photon", line=(p0, v)))
            continue
        if kind != "observer":
            raise InvalidSpec(f"unknown body kind {kind!r}")
        v = _parse_vec(bs.get("velocity", [0, 0, 0]), 3, "observer velocity")
        offset = _parse_vec(bs.get("offset", [0, 0, 0, 0]), 4, "observer offset")
        rotation = bs.get("rotation")
        rot = rational_rotation(random.Random(int(rotation))) if isinstance(rotation, int) else None
        if rotation is None:
            rot = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        placement = _classical_placement(v, offset, rot)
        declared_ether = bool(bs.get("ether"))
        classical_placements[name] = (placement, declared_ether)
        for i in range(int(bs.get("trivial_orbit", 0))):
            extra = _classical_placement(
                v,
                tuple(offset[j] + Fraction(i + 1, 2) * Fraction(j + 1) for j in range(4)),
                rational_rotation(rng),
            )
            classical_placements[f"{name}_t{i + 1}"] = (extra, declared_ether)

    relativistic = theory in RELATIVISTIC
    bodies: Dict[str, Body] = {}
    for name, (placement, declared_ether) in classical_placements.items():
        cls = classify(placement, c)
        if not cls.galilean:
            raise InvalidSpec(f"observer {name}: classical placement is not Galilean")
        drift = ether_drift(placement)
        stl = norm_sq3(drift) < c * c
        if theory == "CK-STL" and not stl:
            raise InvalidSpec(f"observer {name} is not slower than light (AxNoFTL)")
        if relativistic:
            if not stl:
                raise FTLObserverPresent(f"observer {name} moves at or above the light speed")
            placement = relativize_placement(placement, c, fld)
            if not classify(placement, c).poincare:
                raise InvalidSpec(f"observer {name}: relativistic placement is not Poincare")
        is_ether = classify(placement, c).trivial
        if declared_ether and not is_ether:
            raise InvalidSpec(
                f"observer {name} is declared in the ether class but is not trivially placed"
            )
        flag = is_ether if theory in ("CK", "CK-STL", "SR-e") else False
        bodies[name] = Body(name=name, kind="observer", placement=placement, ether=flag)

    model = Model(theory=theory, field=fld, c=c, bodies=bodies, seed=seed, spec=spec)
    for ph in photons:
        model.add_body(ph)

    if theory in CLASSICAL and not model.ether_members():
        raise InvalidSpec("classical models need at least one ether observer")
    if theory == "SR-e" and not model.ether_members():
        raise InvalidSpec("extended relativistic models need at least one primitive-ether member")
    return model


def transform_model(m: Model) -> Model:
    """Turn a classical model into the relativistic model its translation induces."""
    if not m.is_classical:
        raise InvalidSpec(f"transform_model takes a classical model, got {m.theory}")
    bodies: Dict[str, Body] = {}
    for b in m.bodies.values():
        if b.is_photon:
            bodies[b.name] = b
            continue
        drift = ether_drift(b.placement)
        if not norm_sq3(drift) < m.c * m.c:
            raise FTLObserverPresent(f"observer {b.name} moves at or above the light speed")
        placement = relativize_placement(b.placement, m.c, m.field)
        bodies[b.name] = replace(b, placement=placement)
    return Model(
        theory="SR-e" if m.theory == "CK-STL" else "SR",
        field=m.field,
        c=m.c,
        bodies=bodies,
        frame=m.frame,
        seed=m.seed,
        spec=None,
    )


def standard_spec(theory: str, seed: int = 7, observers: int = 6) -> dict:
    """The standard desk roster: one ether orbit, STL observers, photon
    templates along the axes, plus one finite faster-than-light observer in
    unrestricted classical kinematics."""
    rng = random.Random(seed)
    dirs = unit_directions(rng)
    speeds = pythagorean_speeds(observers + 1, 1, rng)[1:]
    bodies = [
        {"kind": "observer", "name": "e0", "velocity": ["0", "0", "0"], "ether": True, "trivial_orbit": 2}
    ]
    for i, speed in enumerate(speeds):
        u = next(dirs)
        vel = [str(speed * comp) for comp in u]
        offset = [str(Fraction(rng.randrange(-3, 4), 2)) for _ in range(4)]
        bodies.append(
            {
                "kind": "observer",
                "name": f"k{i + 1}",
                "velocity": vel,
                "offset": offset,
                "rotation": rng.randrange(1000),
            }
        )
    if theory == "CK":
        u = next(dirs)
        bodies.append(
            {
                "kind": "observer",
                "name": "ftl1",
                "velocity": [str(Fraction(3, 2) * comp) for comp in u],
                "offset": ["1", "0", "1/2", "0"],
            }
        )
    for i, d in enumerate(((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))):
        bodies.append(
            {
                "kind": "photon",
                "name": f"ph{i + 1}",
                "velocity": [str(x) for x in d],
                "offset": ["0", "0", "0", "0"] if i < 3 else ["1", "1", "0", "0"],
            }
        )
    return {"theory": theory, "c": "1", "seed": seed, "bodies": bodies}

"""The translation functions between the kinematic theories.

All five are syntactic rewriters that are homomorphic over connectives and
quantifiers, preserve equality and mathematics, and rewrite the basic
concepts:

* ``tr``: relativistic formulas into classical ones.  Inertial observers
  become classical inertial observers slower than light with respect to the
  ether frame; worldview atoms are pulled back through radar
  re-coordinatization (universally over ether observers).
* ``tr_plus`` / ``tr_plus_inv``: the pair connecting relativity extended
  with a primitive ether class to slower-than-light classical kinematics;
  tr_plus extends tr by mapping the primitive class to the defined ether,
  tr_plus_inv pushes classical worldviews forward through radarization
  (universally over primitive-ether members).
* ``tr_star`` / ``tr_star_inv``: the pair connecting slower-than-light
  classical kinematics to full classical kinematics via the finite/
  unbounded speed remaps; worldview atoms split into an observer case
  (worldline read off the remapped time axis) and a non-observer case.

Translators take macro-expanded input (defined concepts already eliminated),
so only core atoms need clauses; their output may use defined-relation atoms
(Ether bounds, map applications), which expand_macros can eliminate again.
Translator-introduced bound variables live in the reserved "_" namespace so
they can never capture user variables.
"""

from __future__ import annotations

import itertools

from .logic import syntax as s
from .logic.macros import expand_macros
from .logic.syntax import (
    And,
    EvEq,
    Exists,
    Forall,
    ForallIn,
    IOb,
    Implies,
    Iff,
    MapApp,
    Not,
    StlAtom,
    conj,
    exists,
    lit,
)


class SignatureViolation(s.LogicError):
    pass


_counter = itertools.count()


def _fresh(base: str, sort: str) -> s.Var:
    return s.Var(f"_{base}{next(_counter)}", sort)


def _fresh_point(base: str):
    n = next(_counter)
    return tuple(s.Var(f"_{base}{n}_{i}", s.Q) for i in range(4))


def _require_no_primitive_ether(f, name):
    if s.uses_primitive_ether(f):
        raise SignatureViolation(f"{name} takes formulas without the primitive ether class E")


def _rewrite(f, atom_fn, bound_fn):
    """Homomorphic walk: connectives and quantifiers preserved."""
    if isinstance(f, (s.Forall, s.Exists)):
        return type(f)(f.var, _rewrite(f.body, atom_fn, bound_fn))
    if isinstance(f, (s.ForallIn, s.ExistsIn)):
        return bound_fn(f, lambda g: _rewrite(g, atom_fn, bound_fn))
    if isinstance(f, s.ATOM_TYPES):
        return atom_fn(f)
    return s.map_children(f, lambda t: t, lambda g: _rewrite(g, atom_fn, bound_fn))


_MATH_ATOMS = (s.Eq, s.Le, s.Lt, s.BodyEq, s.EField, s.MapEq)


def _tr_core(f, ether_rel: str, primitive_ether_clause):
    """Shared worker for tr and tr_plus; ether_rel bounds the output quantifier."""

    def atom_fn(a):
        if isinstance(a, _MATH_ATOMS):
            return a
        if isinstance(a, s.Ph):
            return a
        if isinstance(a, s.IOb):
            e = _fresh("e", s.B)
            return conj(IOb(a.body), ForallIn(e, ether_rel, StlAtom(a.body, e)))
        if isinstance(a, s.W):
            e = _fresh("e", s.B)
            y = _fresh_point("y")
            inner = exists(y, conj(MapApp("rad", a.obs, e, y, a.coords), s.W(a.obs, a.body, y)))
            return ForallIn(e, ether_rel, inner)
        if isinstance(a, s.E):
            if primitive_ether_clause is None:
                raise SignatureViolation("the source signature has no primitive ether class E")
            return primitive_ether_clause(a)
        raise SignatureViolation(f"unexpected defined atom {type(a).__name__} (expand macros first)")

    def bound_fn(q, rec):
        if q.rel == "Ph":
            return type(q)(q.var, "Ph", rec(q.body))
        if q.rel == "E":
            if primitive_ether_clause is None:
                raise SignatureViolation("the source signature has no primitive ether class E")
            # the primitive class maps to the defined ether, so the bound swaps
            return type(q)(q.var, "Ether", rec(q.body))
        # IOb bound: the guard itself is translated
        guard = atom_fn(s.IOb(q.var))
        if isinstance(q, s.ForallIn):
            return Forall(q.var, Implies(guard, rec(q.body)))
        return Exists(q.var, conj(guard, rec(q.body)))

    return _rewrite(f, atom_fn, bound_fn)


def tr(f):
    """Relativistic to classical; rejects the extended signature."""
    f = expand_macros(f)
    _require_no_primitive_ether(f, "tr")
    return _tr_core(f, "Ether", None)


def tr_plus(f):
    """Extended relativistic to slower-than-light classical."""
    f = expand_macros(f)
    return _tr_core(f, "Ether", lambda a: s.EtherAtom(a.body))


def tr_plus_inv(f):
    """Slower-than-light classical to extended relativistic."""
    f = expand_macros(f)
    _require_no_primitive_ether(f, "tr_plus_inv")

    def atom_fn(a):
        if isinstance(a, _MATH_ATOMS + (s.Ph, s.IOb)):
            return a
        if isinstance(a, s.W):
            e = _fresh("e", s.B)
            y = _fresh_point("y")
            inner = exists(y, conj(MapApp("rad", a.obs, e, a.coords, y), s.W(a.obs, a.body, y)))
            return ForallIn(e, "E", inner)
        raise SignatureViolation(f"unexpected defined atom {type(a).__name__} (expand macros first)")

    def bound_fn(q, rec):
        return type(q)(q.var, q.rel, rec(q.body))

    return _rewrite(f, atom_fn, bound_fn)


def _tr_star_core(f, kind: str):
    """Shared worker for the speed-remap pair; kind selects the boost composite."""
    f = expand_macros(f)
    _require_no_primitive_ether(f, "tr_star" if kind == "x" else "tr_star_inv")

    def atom_fn(a):
        if isinstance(a, _MATH_ATOMS + (s.Ph, s.IOb)):
            return a
        if isinstance(a, s.W):
            e = _fresh("e", s.B)
            xp = _fresh_point("u")
            non_observer = exists(
                xp, conj(MapApp(kind, a.obs, e, xp, a.coords), s.W(a.obs, a.body, xp))
            )
            t = _fresh("t", s.Q)
            xq = _fresh_point("v")
            yq = _fresh_point("w")
            axis = (t, lit(0), lit(0), lit(0))
            observer = Exists(
                t,
                exists(
                    [*xq, *yq],
                    conj(
                        MapApp(kind, a.obs, e, xq, a.coords),
                        MapApp(kind, a.body, e, yq, axis),
                        EvEq(a.obs, a.body, xq, yq),
                    ),
                ),
            )
            return ForallIn(
                e,
                "Ether",
                conj(
                    Implies(Not(IOb(a.body)), non_observer),
                    Implies(IOb(a.body), observer),
                ),
            )
        raise SignatureViolation(f"unexpected defined atom {type(a).__name__} (expand macros first)")

    def bound_fn(q, rec):
        return type(q)(q.var, q.rel, rec(q.body))

    return _rewrite(f, atom_fn, bound_fn)


def tr_star(f):
    """Slower-than-light classical into full classical kinematics."""
    return _tr_star_core(f, "x")


def tr_star_inv(f):
    """Full classical kinematics into the slower-than-light fragment."""
    return _tr_star_core(f, "y")


def compose(outer, inner):
    """Function composition: compose(t1, t2)(f) = t1(t2(f)).

    The outer translator re-expands the inner one's defined-atom output, so
    chains stay inside the clause tables.
    """

    def composed(f):
        return outer(inner(f))

    composed.__name__ = f"{getattr(outer, '__name__', 'outer')}_of_{getattr(inner, '__name__', 'inner')}"
    return composed


TRANSLATORS = {
    "tr": tr,
    "tr+": tr_plus,
    "tr+inv": tr_plus_inv,
    "tr*": tr_star,
    "tr*inv": tr_star_inv,
    "tr*tr+": compose(tr_star, tr_plus),
}
# unicode alias accepted on the command line
TRANSLATORS["tr*∘tr+"] = TRANSLATORS["tr*tr+"]


def translator_by_name(name: str):
    try:
        return TRANSLATORS[name]
    except KeyError:
        raise s.LogicError(
            f"unknown translator {name!r} (expected tr|tr+|tr+inv|tr*|tr*inv|tr*tr+)"
        ) from None

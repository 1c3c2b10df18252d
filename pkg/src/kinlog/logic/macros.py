"""Elimination of defined concepts down to the core signature.

Every defined-relation atom expands into a first-order formula over
{IOb, Ph, E, W, =, <=, <, +, -, *} (MapEq atoms count as mathematics and are
kept unless `expand_maps` is set, in which case they unfold into witness
arithmetic: the speed and clock-factor witnesses demanded by partial square
roots, intermediate points for the factor maps, and the rotation case split).
Partial-function uses are eliminated in the standard way: an application
f(x) = y inside a formula becomes an existential witness constrained by the
graph of f.  Distance and duration comparisons go through their squared
forms; speed carries an explicit nonnegativity guard so the mirrored root is
excluded.
"""

from __future__ import annotations

from fractions import Fraction

from . import syntax as s
from .axioms import etherspeed_body, lightspeed_body, space_sq_term, sq, sum_terms, time_sq_term
from .syntax import (
    And,
    Eq,
    EtherSpeedAtom,
    Exists,
    Forall,
    Iff,
    Implies,
    Le,
    Lit,
    Lt,
    MapEq,
    Mul,
    Not,
    Sub,
    VelEq,
    W,
    conj,
    disj,
    exists,
    forall,
    fresh_var,
    lit,
    point,
    qvar,
)

ZERO = lit(0)
ONE = lit(1)


def _avoid(f):
    return set(s.free_vars(f))


def _fresh_point(prefix, used):
    out = []
    for i in range(4):
        v = s.fresh_var(f"{prefix}{i}", used, s.Q)
        used.add(v)
        out.append(v)
    return tuple(out)


def _wl_pair_guard(k, b, x, y, body):
    """forall x,y on wl_k(b): W-guarded universal."""
    return forall([*x, *y], Implies(conj(W(k, b, x), W(k, b, y)), body))


def expand_atom(f):
    """One-step expansion of a defined atom; returns None for core atoms."""
    if isinstance(f, s.EtherAtom):
        used = {f.e}
        c = s.fresh_var("c", used, s.Q)
        return conj(s.IOb(f.e), Exists(c, conj(Lt(ZERO, c), EtherSpeedAtom(f.e, c))))
    if isinstance(f, s.ObAtom):
        used = {f.k}
        b = s.fresh_var("b", used, s.B)
        used.add(b)
        x = _fresh_point("x", used)
        return Exists(b, exists(x, W(f.k, b, x)))
    if isinstance(f, s.StlAtom):
        used = {f.k, f.e}
        c = s.fresh_var("c", used, s.Q)
        used.add(c)
        v = s.fresh_var("v", used, s.Q)
        return exists(
            [c, v],
            conj(
                Lt(ZERO, c),
                EtherSpeedAtom(f.e, c),
                s.SpeedEq(f.e, f.k, v),
                Lt(v, c),
            ),
        )
    if isinstance(f, s.SpeedEq):
        used = {f.k, f.b} | s.term_vars(f.val)
        x = _fresh_point("sx", used)
        y = _fresh_point("sy", used)
        some_pair = exists(
            [*x, *y],
            conj(W(f.k, f.b, x), W(f.k, f.b, y), Not(s.Eq(x[0], y[0]))),
        )
        law = _wl_pair_guard(
            f.k, f.b, x, y, Eq(space_sq_term(x, y), Mul(sq(f.val), time_sq_term(x, y)))
        )
        return conj(Le(ZERO, f.val), some_pair, law)
    if isinstance(f, s.VelEq):
        used = {f.k, f.b} | set().union(*[s.term_vars(t) for t in f.vel])
        x = _fresh_point("vx", used)
        y = _fresh_point("vy", used)
        some_pair = exists(
            [*x, *y],
            conj(W(f.k, f.b, x), W(f.k, f.b, y), s.Not(s.Eq(x[0], y[0]))),
        )
        comp = conj(
            *[Eq(Sub(y[i + 1], x[i + 1]), Mul(f.vel[i], Sub(y[0], x[0]))) for i in range(3)]
        )
        law = _wl_pair_guard(f.k, f.b, x, y, comp)
        return conj(some_pair, law)
    if isinstance(f, s.EvEq):
        used = {f.k, f.h} | set().union(*[s.term_vars(t) for t in f.x + f.y])
        b = s.fresh_var("b", used, s.B)
        return Forall(b, Iff(W(f.k, b, f.x), W(f.h, b, f.y)))
    if isinstance(f, s.LightSpeedAtom):
        return lightspeed_body(f.c)
    if isinstance(f, s.EtherSpeedAtom):
        return etherspeed_body(f.e, f.c)
    if isinstance(f, s.TrivRelated):
        from .axioms import triv_constraint, triv_params, wvt_is_map

        q = triv_params("tq")
        return exists(q, conj(triv_constraint(q), wvt_is_map(f.k, f.h, q)))
    if isinstance(f, s.MapApp):
        used = {f.k, f.e} | set().union(*[s.term_vars(t) for t in f.src + f.dst])
        c = s.fresh_var("c", used, s.Q)
        used.add(c)
        vel = tuple(s.fresh_var(f"w{i}", used, s.Q) for i in range(3))
        used.update(vel)
        return Exists(
            c,
            conj(
                Lt(ZERO, c),
                EtherSpeedAtom(f.e, c),
                exists(
                    vel,
                    conj(VelEq(f.k, f.e, vel), MapEq(f.kind, c, vel, f.src, f.dst)),
                ),
            ),
        )
    return None


def _sum_sq(ts):
    return sum_terms([sq(t) for t in ts])


def expand_map_eq(f: MapEq):
    """Unfold a velocity-indexed map equation into witness arithmetic.

    Introduces the speed witness s (s >= 0, s^2 = |vel|^2) and, for the
    radar map, the clock factor g (g >= 0, c^2 g^2 = c^2 - s^2) plus
    intermediate points for the rotation / boost / synchronisation stages.
    Denominators are cleared so every equation is polynomial.
    """
    c, vel, src, dst = f.c, f.vel, f.src, f.dst
    used = set(s.term_vars(c)) | set().union(*[set(s.term_vars(t)) for t in vel + src + dst])
    sp = s.fresh_var("ms", used, s.Q)
    used.add(sp)
    speed_def = conj(Le(ZERO, sp), Eq(sq(sp), _sum_sq(vel)))

    if f.kind == "x":
        # drift w = c*vel/(1+s) - vel, image = src + src0 * w
        w = tuple(s.fresh_var(f"mw{i}", used, s.Q) for i in range(3))
        used.update(w)
        w_def = conj(
            *[
                Eq(Mul(s.Add(ONE, sp), w[i]), Sub(Mul(c, vel[i]), Mul(s.Add(ONE, sp), vel[i])))
                for i in range(3)
            ]
        )
        img = conj(
            Eq(dst[0], src[0]),
            *[Eq(dst[i + 1], s.Add(src[i + 1], Mul(src[0], w[i]))) for i in range(3)],
        )
        return Exists(sp, conj(speed_def, exists(w, conj(w_def, img))))

    if f.kind == "y":
        # requires s < c; drift w = vel/(c-s) - vel
        w = tuple(s.fresh_var(f"mw{i}", used, s.Q) for i in range(3))
        used.update(w)
        cs = Sub(c, sp)
        w_def = conj(
            *[Eq(Mul(cs, w[i]), Sub(vel[i], Mul(cs, vel[i]))) for i in range(3)]
        )
        img = conj(
            Eq(dst[0], src[0]),
            *[Eq(dst[i + 1], s.Add(src[i + 1], Mul(src[0], w[i]))) for i in range(3)],
        )
        return Exists(sp, conj(speed_def, Lt(sp, c), exists(w, conj(w_def, img))))

    if f.kind != "rad":
        raise s.LogicError(f"unknown map kind {f.kind!r}")

    g = s.fresh_var("mg", used, s.Q)
    used.add(g)
    p = _fresh_point("mp", used)  # rotated source
    q = _fresh_point("mq", used)  # after drift boost
    r = _fresh_point("mr", used)  # after the tx-plane Lorentz map; dst rotates onto it
    g_def = conj(Le(ZERO, g), Eq(Mul(sq(c), sq(g)), Sub(sq(c), sq(sp))))

    def rot_eqs(a, b):
        """b = R(a) for the drift rotation, denominators cleared; case split."""
        v1, v2, v3 = vel
        pl = s.Add(sq(v2), sq(v3))  # vy^2 + vz^2
        diff = Sub(sp, v1)  # |v| - vx
        generic = conj(
            Eq(b[0], a[0]),
            Eq(Mul(sp, b[1]), s.Neg(sum_terms([Mul(vel[i], a[i + 1]) for i in range(3)]))),
            Eq(
                Mul(Mul(sp, pl), b[2]),
                s.Add(
                    Mul(Mul(v2, pl), a[1]),
                    s.Add(
                        Mul(Sub(Mul(s.Neg(v1), pl), Mul(sq(v3), diff)), a[2]),
                        Mul(Mul(Mul(v2, v3), diff), a[3]),
                    ),
                ),
            ),
            Eq(
                Mul(Mul(sp, pl), b[3]),
                s.Add(
                    Mul(Mul(v3, pl), a[1]),
                    s.Add(
                        Mul(Mul(Mul(v2, v3), diff), a[2]),
                        Mul(Sub(Mul(s.Neg(v1), pl), Mul(sq(v2), diff)), a[3]),
                    ),
                ),
            ),
        )
        on_axis = conj(Eq(v2, ZERO), Eq(v3, ZERO))
        keep = conj(*[Eq(b[i], a[i]) for i in range(4)])
        flip = conj(
            Eq(b[0], a[0]), *[Eq(b[i], s.Neg(a[i])) for i in (1, 2, 3)]
        )
        return conj(
            Implies(Not(on_axis), generic),
            Implies(conj(on_axis, Le(v1, ZERO)), keep),
            Implies(conj(on_axis, Lt(ZERO, v1)), flip),
        )

    boost = conj(
        Eq(q[0], p[0]),
        Eq(q[1], s.Add(p[1], Mul(sp, p[0]))),
        Eq(q[2], p[2]),
        Eq(q[3], p[3]),
    )
    # r = L(q): c^2 g r0 = c^2 q0 - s q1 ; g r1 = q1 - s q0 ; r2,3 = q2,3
    lorentz = conj(
        Eq(Mul(Mul(sq(c), g), r[0]), Sub(Mul(sq(c), q[0]), Mul(sp, q[1]))),
        Eq(Mul(g, r[1]), Sub(q[1], Mul(sp, q[0]))),
        Eq(r[2], q[2]),
        Eq(r[3], q[3]),
    )
    chain = conj(rot_eqs(src, p), boost, lorentz, rot_eqs(dst, r))
    return Exists(
        sp,
        conj(
            speed_def,
            Lt(sp, c),
            Exists(g, conj(g_def, exists([*p, *q, *r], chain))),
        ),
    )


def desugar_bounded(f):
    """One layer: bounded quantifier to guarded plain quantifier."""
    guard = {
        "IOb": s.IOb,
        "Ph": s.Ph,
        "E": s.E,
        "Ether": s.EtherAtom,
    }[f.rel](f.var)
    if isinstance(f, s.ForallIn):
        return Forall(f.var, Implies(guard, f.body))
    return Exists(f.var, And((guard, f.body)))


def expand_macros(f, expand_maps=False, keep_bounded=("IOb", "Ph", "E")):
    """Eliminate defined symbols; idempotent.

    Bounded quantifiers over primitive relations are kept (they are plain
    sugar); Ether-bounded ones must desugar because Ether itself is defined.
    With expand_maps the MapEq mathematics unfolds to witness arithmetic too.
    """

    def rec(g):
        return expand_macros(g, expand_maps, keep_bounded)

    if isinstance(g := f, (s.ForallIn, s.ExistsIn)):
        if g.rel in keep_bounded:
            return type(g)(g.var, g.rel, rec(g.body))
        return rec(desugar_bounded(g))
    if isinstance(f, (s.Forall, s.Exists)):
        return type(f)(f.var, rec(f.body))
    if isinstance(f, s.MapEq) and expand_maps:
        return rec(expand_map_eq(f))
    expanded = expand_atom(f)
    if expanded is not None:
        return rec(expanded)
    if isinstance(f, s.ATOM_TYPES):
        return f
    return s.map_children(f, lambda t: t, rec)

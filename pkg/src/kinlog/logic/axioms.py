"""Catalog of the named axioms and the theory sets built from them.

Axiom builders return closed formulas over the two-sorted signature, using
the defined-relation atoms where the displays do (Ether, Ob, the
slower-than-light comparison, trivial-relatedness).  Distance and duration
comparisons are emitted radical-free through their squared forms, which are
equivalent because both sides are nonnegative.  The quantification over
trivial transformations is a 20-parameter quantity block (16 linear entries
row-major, then 4 translation components) guarded by the constraints that
pin the linear part to a time-preserving spatial isometry.
"""

from __future__ import annotations

from .syntax import (
    Add,
    And,
    BodyEq,
    E,
    EField,
    Eq,
    EtherAtom,
    EtherSpeedAtom,
    EvEq,
    Exists,
    ExistsIn,
    Forall,
    ForallIn,
    IOb,
    Iff,
    Implies,
    LightSpeedAtom,
    Lit,
    Lt,
    Mul,
    Not,
    ObAtom,
    Or,
    Ph,
    StlAtom,
    Sub,
    TrivRelated,
    Var,
    W,
    bvar,
    conj,
    disj,
    exists,
    forall,
    lit,
    point,
    qvar,
)

ZERO = lit(0)
ONE = lit(1)


class UnknownAxiom(Exception):
    pass


def sq(t):
    return Mul(t, t)


def sum_terms(parts):
    out = parts[0]
    for p in parts[1:]:
        out = Add(out, p)
    return out


def space_sq_term(x, y):
    return sum_terms([sq(Sub(x[i], y[i])) for i in (1, 2, 3)])


def time_sq_term(x, y):
    return sq(Sub(x[0], y[0]))


def space_eq(x, y, x2, y2):
    return Eq(space_sq_term(x, y), space_sq_term(x2, y2))


def time_eq(x, y, x2, y2):
    return Eq(time_sq_term(x, y), time_sq_term(x2, y2))


def space_vs_ctime(rel, x, y, c):
    """space(x,y) rel c*time(x,y) via squares; sound for rel in {Eq, Lt} and c > 0."""
    return rel(space_sq_term(x, y), Mul(Mul(c, c), time_sq_term(x, y)))


def points_eq(x, y):
    return conj(*[Eq(x[i], y[i]) for i in range(4)])


def points_distinct(x, y):
    return Not(points_eq(x, y))


def wl_pair(k, b, x, y):
    return conj(W(k, b, x), W(k, b, y))


def lightspeed_body(c):
    """The displayed body of the light-speed axioms for a given speed term c."""
    k = bvar("k")
    x, y = point("x"), point("y")
    p = bvar("p")
    bicond = Iff(
        Exists(p, conj(Ph(p), W(k, p, x), W(k, p, y))),
        space_vs_ctime(Eq, x, y, c),
    )
    return ForallIn(k, "IOb", forall([*x, *y], bicond))


def etherspeed_body(e, c):
    """Light seen by observer e lies exactly on right cones of speed c."""
    x, y = point("x"), point("y")
    p = bvar("p")
    bicond = Iff(
        Exists(p, conj(Ph(p), W(e, p, x), W(e, p, y))),
        space_vs_ctime(Eq, x, y, c),
    )
    return forall([*x, *y], bicond)


TRIV_PARAM_COUNT = 20


def triv_params(prefix="q"):
    """20 quantity variables: linear part row-major (q1..q16), then translation."""
    return [qvar(f"{prefix}{i}") for i in range(1, TRIV_PARAM_COUNT + 1)]


def triv_constraint(q):
    """The linear part is a time-preserving spatial isometry.

    Row 0 is (1,0,0,0), column 0 below it vanishes, and the spatial rows are
    orthonormal.
    """
    lin = [q[0:4], q[4:8], q[8:12], q[12:16]]
    clauses = [Eq(lin[0][0], ONE), Eq(lin[0][1], ZERO), Eq(lin[0][2], ZERO), Eq(lin[0][3], ZERO)]
    clauses += [Eq(lin[1][0], ZERO), Eq(lin[2][0], ZERO), Eq(lin[3][0], ZERO)]
    for i in range(1, 4):
        for j in range(i, 4):
            dot = sum_terms([Mul(lin[i][a], lin[j][a]) for a in (1, 2, 3)])
            clauses.append(Eq(dot, ONE if i == j else ZERO))
    return conj(*clauses)


def triv_apply_eqs(q, x, y):
    """y = Lx + t componentwise for the 20-parameter map."""
    lin = [q[0:4], q[4:8], q[8:12], q[12:16]]
    tr = q[16:20]
    eqs = []
    for i in range(4):
        rhs = sum_terms([Mul(lin[i][j], x[j]) for j in range(4)] + [tr[i]])
        eqs.append(Eq(y[i], rhs))
    return conj(*eqs)


def wvt_is_map(k, h, q):
    """The worldview transformation from k to h is the 20-parameter affine map."""
    x, y = point("wx"), point("wy")
    return forall([*x, *y], Iff(EvEq(k, h, x, y), triv_apply_eqs(q, x, y)))


# ------------------------------------------------------------- the axioms


def _ax_efield():
    return EField()


def _ax_ev():
    k, h = bvar("k"), bvar("h")
    x, y = point("x"), point("y")
    return ForallIn(k, "IOb", ForallIn(h, "IOb", forall(x, exists(y, EvEq(k, h, x, y)))))


def _ax_self():
    k = bvar("k")
    t, x, y, z = qvar("t"), qvar("x"), qvar("y"), qvar("z")
    body = Iff(W(k, k, (t, x, y, z)), conj(Eq(x, ZERO), Eq(y, ZERO), Eq(z, ZERO)))
    return ForallIn(k, "IOb", forall([t, x, y, z], body))


def _ax_symd():
    k, h = bvar("k"), bvar("h")
    x, y, x2, y2 = point("x"), point("y"), point("u"), point("v")
    ante = conj(
        Eq(x[0], y[0]),
        Eq(x2[0], y2[0]),
        EvEq(k, h, x, x2),
        EvEq(k, h, y, y2),
    )
    body = Implies(ante, space_eq(x, y, x2, y2))
    return ForallIn(k, "IOb", ForallIn(h, "IOb", forall([*x, *y, *x2, *y2], body)))


def _ax_line():
    k, h = bvar("k"), bvar("h")
    x, y, z = point("x"), point("y"), point("z")
    a = qvar("a")
    case1 = conj(*[Eq(Sub(z[i], x[i]), Mul(a, Sub(y[i], x[i]))) for i in range(4)])
    case2 = conj(*[Eq(Sub(y[i], z[i]), Mul(a, Sub(z[i], x[i]))) for i in range(4)])
    body = Implies(
        conj(W(k, h, x), W(k, h, y), W(k, h, z)),
        Exists(a, disj(case1, case2)),
    )
    return ForallIn(k, "IOb", ForallIn(h, "IOb", forall([*x, *y, *z], body)))


def _ax_triv():
    q = triv_params()
    k, h = bvar("k"), bvar("h")
    body = ForallIn(k, "IOb", ExistsIn(h, "IOb", wvt_is_map(k, h, q)))
    return forall(q, Implies(triv_constraint(q), body))


def _ax_noacc():
    k = bvar("k")
    return Forall(k, Implies(ObAtom(k), IOb(k)))


def _ax_abstime():
    k, h = bvar("k"), bvar("h")
    x, y, x2, y2 = point("x"), point("y"), point("u"), point("v")
    body = Implies(
        conj(EvEq(k, h, x, x2), EvEq(k, h, y, y2)),
        time_eq(x, y, x2, y2),
    )
    return ForallIn(k, "IOb", ForallIn(h, "IOb", forall([*x, *y, *x2, *y2], body)))


def _ax_thexp_plus():
    h, k, h2 = bvar("h"), bvar("k"), bvar("h2")
    x, y = point("x"), point("y")
    inner = Implies(
        Not(Eq(x[0], y[0])),
        ExistsIn(h2, "IOb", wl_pair(k, h2, x, y)),
    )
    return conj(
        Exists(h, IOb(h)),
        ForallIn(k, "IOb", forall([*x, *y], inner)),
    )


def _ax_ether():
    e = bvar("e")
    return Exists(e, EtherAtom(e))


def _ax_ph():
    c = qvar("c")
    return Exists(c, conj(Lt(ZERO, c), LightSpeedAtom(c)))


def _ax_thexp():
    h, k, h2 = bvar("h"), bvar("k"), bvar("h2")
    c = qvar("c")
    x, y = point("x"), point("y")
    inner = Implies(
        space_vs_ctime(Lt, x, y, c),
        ExistsIn(h2, "IOb", wl_pair(k, h2, x, y)),
    )
    return conj(
        Exists(h, IOb(h)),
        Exists(c, conj(Lt(ZERO, c), LightSpeedAtom(c), ForallIn(k, "IOb", forall([*x, *y], inner)))),
    )


def _ax_noftl():
    k, e = bvar("k"), bvar("e")
    return ForallIn(k, "IOb", ForallIn(e, "Ether", StlAtom(k, e)))


def _ax_thexp_stl():
    h, e, k = bvar("h"), bvar("e"), bvar("k")
    c = qvar("c")
    x, y = point("x"), point("y")
    inner = Implies(
        space_vs_ctime(Lt, x, y, c),
        ExistsIn(k, "IOb", wl_pair(e, k, x, y)),
    )
    return conj(
        Exists(h, IOb(h)),
        ForallIn(
            e,
            "Ether",
            Exists(c, conj(Lt(ZERO, c), EtherSpeedAtom(e, c), forall([*x, *y], inner))),
        ),
    )


def _ax_primitive_ether():
    e, k = bvar("e"), bvar("k")
    member = conj(IOb(k), TrivRelated(e, k))
    return ExistsIn(e, "IOb", Forall(k, Iff(member, E(k))))


_BUILDERS = {
    "AxEField": _ax_efield,
    "AxEv": _ax_ev,
    "AxSelf": _ax_self,
    "AxSymD": _ax_symd,
    "AxLine": _ax_line,
    "AxTriv": _ax_triv,
    "AxNoAcc": _ax_noacc,
    "AxAbsTime": _ax_abstime,
    "AxThExp+": _ax_thexp_plus,
    "AxEther": _ax_ether,
    "AxPh_c": _ax_ph,
    "AxThExp": _ax_thexp,
    "AxNoFTL": _ax_noftl,
    "AxThExpSTL": _ax_thexp_stl,
    "AxPrimitiveEther": _ax_primitive_ether,
}

_CACHE: dict = {}


def axiom(name: str):
    if name not in _BUILDERS:
        raise UnknownAxiom(f"unknown axiom {name!r}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def axiom_names():
    return tuple(_BUILDERS)


KIN_FULL = ("AxEField", "AxEv", "AxSelf", "AxSymD", "AxLine", "AxTriv", "AxNoAcc")
CLASSICAL_KIN_FULL = KIN_FULL + ("AxAbsTime", "AxThExp+", "AxEther")
CLASSICAL_KIN_STL_FULL = tuple(n for n in CLASSICAL_KIN_FULL if n != "AxThExp+") + (
    "AxNoFTL",
    "AxThExpSTL",
)
SPECREL_FULL = KIN_FULL + ("AxPh_c", "AxThExp")
SPECREL_E_FULL = SPECREL_FULL + ("AxPrimitiveEther",)

THEORIES = {
    "Kin_Full": KIN_FULL,
    "ClassicalKin_Full": CLASSICAL_KIN_FULL,
    "ClassicalKin_STL_Full": CLASSICAL_KIN_STL_FULL,
    "SpecRel_Full": SPECREL_FULL,
    "SpecRel_e_Full": SPECREL_E_FULL,
}

THEORY_OF_TAG = {
    "CK": "ClassicalKin_Full",
    "CK-STL": "ClassicalKin_STL_Full",
    "SR": "SpecRel_Full",
    "SR-e": "SpecRel_e_Full",
}


def theory_axioms(name: str):
    try:
        names = THEORIES[name]
    except KeyError:
        raise UnknownAxiom(f"unknown theory {name!r}") from None
    return {n: axiom(n) for n in names}

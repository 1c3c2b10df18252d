"""Two-sorted first-order abstract syntax.

Sorts are "B" (bodies) and "Q" (quantities).  Terms exist only at sort Q
(body terms are just body variables).  Atoms split into the core signature
(worldview relation W, IOb, Ph, the primitive-ether class E, equalities and
order, plus velocity-indexed map-application equations treated as
mathematics) and defined-relation atoms (Ether, Ob, slower-than-light,
speed/velocity equations, event equality, trivial-relatedness, map
applications indexed by an observer pair).  Defined atoms are macro
expandable down to the core signature; keeping them as nodes keeps printed
formulas readable and lets the evaluator compute them analytically.

Bounded quantifiers over the unary relations IOb, Ph, E and Ether are sugar
nodes; desugaring is a guarded plain quantifier.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple, Union

B = "B"
Q = "Q"

BOUND_RELATIONS = ("IOb", "Ph", "E", "Ether")


class LogicError(Exception):
    pass


class SortMismatch(LogicError):
    pass


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class Lit:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Add:
    a: "Term"
    b: "Term"


@dataclass(frozen=True)
class Sub:
    a: "Term"
    b: "Term"


@dataclass(frozen=True)
class Mul:
    a: "Term"
    b: "Term"


@dataclass(frozen=True)
class Neg:
    a: "Term"


Term = Union[Var, Lit, Add, Sub, Mul, Neg]
TERM_TYPES = (Var, Lit, Add, Sub, Mul, Neg)


def lit(x) -> Lit:
    return Lit(Fraction(x))


def qvar(name: str) -> Var:
    return Var(name, Q)


def bvar(name: str) -> Var:
    return Var(name, B)


def point(prefix: str) -> Tuple[Var, Var, Var, Var]:
    return tuple(qvar(f"{prefix}{i}") for i in range(4))


# ---------------------------------------------------------------- atoms


@dataclass(frozen=True)
class W:
    obs: Var
    body: Var
    coords: Tuple[Term, Term, Term, Term]


@dataclass(frozen=True)
class IOb:
    body: Var


@dataclass(frozen=True)
class Ph:
    body: Var


@dataclass(frozen=True)
class E:
    body: Var


@dataclass(frozen=True)
class BodyEq:
    a: Var
    b: Var


@dataclass(frozen=True)
class Eq:
    a: Term
    b: Term


@dataclass(frozen=True)
class Le:
    a: Term
    b: Term


@dataclass(frozen=True)
class Lt:
    a: Term
    b: Term


@dataclass(frozen=True)
class EField:
    """Semantic marker: the quantity sort is a Euclidean field.

    Never evaluated syntactically; the scalar backend guarantees it.
    """


@dataclass(frozen=True)
class MapEq:
    """kind_{vel, c}(src) = dst for kind in rad|x|y.

    A mathematical atom: translators map it to itself.  `vel` are velocity
    component terms, `c` the light-speed term the map is built with.
    """

    kind: str
    c: Term
    vel: Tuple[Term, Term, Term]
    src: Tuple[Term, Term, Term, Term]
    dst: Tuple[Term, Term, Term, Term]


# ------------------------------------------------- defined-relation atoms


@dataclass(frozen=True)
class EtherAtom:
    """e is an inertial observer seeing isotropic, uniform light speed."""

    e: Var


@dataclass(frozen=True)
class ObAtom:
    """k coordinatizes at least one body somewhere."""

    k: Var


@dataclass(frozen=True)
class StlAtom:
    """speed_e(k) is below the light speed that ether observer e measures."""

    k: Var
    e: Var


@dataclass(frozen=True)
class SpeedEq:
    """speed_k(b) = val (partial: defined only on non-horizontal lines)."""

    k: Var
    b: Var
    val: Term


@dataclass(frozen=True)
class VelEq:
    """velocity_k(b) = vel componentwise (partial, like SpeedEq)."""

    k: Var
    b: Var
    vel: Tuple[Term, Term, Term]


@dataclass(frozen=True)
class EvEq:
    """ev_k(x) = ev_h(y): both observers see the same event there."""

    k: Var
    h: Var
    x: Tuple[Term, Term, Term, Term]
    y: Tuple[Term, Term, Term, Term]


@dataclass(frozen=True)
class LightSpeedAtom:
    """Every inertial observer sends/receives light at exactly speed c."""

    c: Term


@dataclass(frozen=True)
class EtherSpeedAtom:
    """Observer e sees light exactly on right cones of speed c."""

    e: Var
    c: Term


@dataclass(frozen=True)
class TrivRelated:
    """Some trivial transformation is the worldview transformation k -> h."""

    k: Var
    h: Var


@dataclass(frozen=True)
class MapApp:
    """kind_{v_k(e)}(src) = dst: map application indexed by an observer pair.

    The inverse application needs no separate node: kind^-1(y) = x is the
    same relation with src and dst swapped.
    """

    kind: str
    k: Var
    e: Var
    src: Tuple[Term, Term, Term, Term]
    dst: Tuple[Term, Term, Term, Term]


# ---------------------------------------------------------- connectives


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Implies:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class Iff:
    a: "Formula"
    b: "Formula"


# ----------------------------------------------------------- quantifiers


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class ForallIn:
    var: Var
    rel: str
    body: "Formula"

    def __post_init__(self):
        if self.rel not in BOUND_RELATIONS:
            raise LogicError(f"unknown bound relation {self.rel}")


@dataclass(frozen=True)
class ExistsIn:
    var: Var
    rel: str
    body: "Formula"

    def __post_init__(self):
        if self.rel not in BOUND_RELATIONS:
            raise LogicError(f"unknown bound relation {self.rel}")


ATOM_TYPES = (
    W,
    IOb,
    Ph,
    E,
    BodyEq,
    Eq,
    Le,
    Lt,
    EField,
    MapEq,
    EtherAtom,
    ObAtom,
    StlAtom,
    SpeedEq,
    VelEq,
    EvEq,
    LightSpeedAtom,
    EtherSpeedAtom,
    TrivRelated,
    MapApp,
)
CONNECTIVE_TYPES = (Not, And, Or, Implies, Iff)
QUANTIFIER_TYPES = (Forall, Exists, ForallIn, ExistsIn)
FORMULA_TYPES = ATOM_TYPES + CONNECTIVE_TYPES + QUANTIFIER_TYPES

Formula = Union[FORMULA_TYPES]

DEFINED_ATOM_TYPES = (
    EtherAtom,
    ObAtom,
    StlAtom,
    SpeedEq,
    VelEq,
    EvEq,
    LightSpeedAtom,
    EtherSpeedAtom,
    TrivRelated,
    MapApp,
)


def conj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, And):
            flat.extend(a.args)
        else:
            flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Or):
            flat.extend(a.args)
        else:
            flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def forall(vs, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


def exists(vs, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


def forall_in(vs, rel: str, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = ForallIn(v, rel, body)
    return body


def exists_in(vs, rel: str, body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = ExistsIn(v, rel, body)
    return body


# ------------------------------------------------------------- traversal


def _map_value(val, term_fn, formula_fn):
    if isinstance(val, TERM_TYPES):
        return term_fn(val)
    if isinstance(val, FORMULA_TYPES):
        return formula_fn(val)
    if isinstance(val, tuple):
        return tuple(_map_value(v, term_fn, formula_fn) for v in val)
    return val


def map_children(node, term_fn, formula_fn):
    """Rebuild node with term_fn on Var/Term fields and formula_fn on subformulas.

    Quantifier binder variables are NOT fed through term_fn; callers that
    substitute must handle binders themselves.
    """
    if isinstance(node, QUANTIFIER_TYPES):
        raise LogicError("map_children does not handle binders")
    kwargs = {}
    for fld in dataclasses.fields(node):
        kwargs[fld.name] = _map_value(getattr(node, fld.name), term_fn, formula_fn)
    return type(node)(**kwargs)


def _iter_values(val) -> Iterator:
    if isinstance(val, tuple):
        for v in val:
            yield from _iter_values(v)
    else:
        yield val


def children(node) -> Iterator:
    """All Var/Term/Formula values directly inside a node (binders included)."""
    for fld in dataclasses.fields(node):
        yield from _iter_values(getattr(node, fld.name))


def subformulas(node) -> Iterator:
    for v in children(node):
        if isinstance(v, FORMULA_TYPES):
            yield v


def walk(f: Formula) -> Iterator[Formula]:
    """Every formula node, preorder."""
    yield f
    for sub in subformulas(f):
        yield from walk(sub)


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t,))
    if isinstance(t, Lit):
        return frozenset()
    if isinstance(t, Neg):
        return term_vars(t.a)
    return term_vars(t.a) | term_vars(t.b)


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, QUANTIFIER_TYPES):
        return free_vars(f.body) - {f.var}
    out = set()
    for v in children(f):
        if isinstance(v, Var):
            out.add(v)
        elif isinstance(v, TERM_TYPES):
            out |= term_vars(v)
        elif isinstance(v, FORMULA_TYPES):
            out |= free_vars(v)
    return frozenset(out)


def fresh_var(base: str, used, sort: str) -> Var:
    names = {v.name for v in used}
    if base not in names:
        return Var(base, sort)
    i = 1
    while f"{base}{i}" in names:
        i += 1
    return Var(f"{base}{i}", sort)


def substitute_term(t: Term, mapping) -> Term:
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, Lit):
        return t
    if isinstance(t, Neg):
        return Neg(substitute_term(t.a, mapping))
    return type(t)(substitute_term(t.a, mapping), substitute_term(t.b, mapping))


def substitute_many(f: Formula, mapping: dict) -> Formula:
    """Capture-avoiding simultaneous substitution.

    Body variables map to body variables; quantity variables map to terms.
    """
    for var, repl in mapping.items():
        if var.sort == B and not (isinstance(repl, Var) and repl.sort == B):
            raise SortMismatch(f"body variable {var.name} must map to a body variable")
        if var.sort == Q and not isinstance(repl, TERM_TYPES):
            raise SortMismatch(f"quantity variable {var.name} must map to a term")
        if var.sort == Q and isinstance(repl, Var) and repl.sort != Q:
            raise SortMismatch(f"quantity variable {var.name} mapped to body variable")
    if not mapping:
        return f
    return _subst(f, mapping)


def _subst(f: Formula, mapping: dict) -> Formula:
    if isinstance(f, QUANTIFIER_TYPES):
        mapping = {v: r for v, r in mapping.items() if v != f.var}
        if not mapping:
            return f
        repl_free = set()
        for r in mapping.values():
            repl_free |= term_vars(r) if isinstance(r, TERM_TYPES) else {r}
        var = f.var
        body = f.body
        if var in repl_free:
            var = fresh_var(f.var.name, repl_free | free_vars(f.body), f.var.sort)
            body = _subst(body, {f.var: var})
        if isinstance(f, (ForallIn, ExistsIn)):
            return type(f)(var, f.rel, _subst(body, mapping))
        return type(f)(var, _subst(body, mapping))

    def term_fn(t):
        if isinstance(t, Var) and t.sort == B:
            return mapping.get(t, t)
        return substitute_term(t, mapping)

    return map_children(f, term_fn, lambda g: _subst(g, mapping))


def substitute(f: Formula, var: Var, replacement) -> Formula:
    return substitute_many(f, {var: replacement})


def alpha_equal(f: Formula, g: Formula, env_f=None, env_g=None, depth=0) -> bool:
    """Structural equality up to bound-variable names."""
    env_f = env_f or {}
    env_g = env_g or {}
    if type(f) is not type(g):
        return False
    if isinstance(f, QUANTIFIER_TYPES):
        if isinstance(f, (ForallIn, ExistsIn)) and f.rel != g.rel:
            return False
        if f.var.sort != g.var.sort:
            return False
        ef = dict(env_f)
        eg = dict(env_g)
        ef[f.var] = depth
        eg[g.var] = depth
        return alpha_equal(f.body, g.body, ef, eg, depth + 1)

    def var_eq(a, b):
        if (a in env_f) != (b in env_g):
            return False
        if a in env_f:
            return env_f[a] == env_g[b]
        return a == b

    fields_f = list(children(f))
    fields_g = list(children(g))
    if len(fields_f) != len(fields_g):
        return False
    for a, b in zip(fields_f, fields_g):
        if isinstance(a, Var) and isinstance(b, Var):
            if not var_eq(a, b):
                return False
        elif isinstance(a, TERM_TYPES) and isinstance(b, TERM_TYPES):
            if not _term_alpha(a, b, env_f, env_g):
                return False
        elif isinstance(a, FORMULA_TYPES) and isinstance(b, FORMULA_TYPES):
            if not alpha_equal(a, b, env_f, env_g, depth):
                return False
        else:
            if a != b:
                return False
    return True


def _term_alpha(a, b, env_f, env_g) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        if (a in env_f) != (b in env_g):
            return False
        return env_f[a] == env_g[b] if a in env_f else a == b
    if isinstance(a, Lit):
        return a.value == b.value
    if isinstance(a, Neg):
        return _term_alpha(a.a, b.a, env_f, env_g)
    return _term_alpha(a.a, b.a, env_f, env_g) and _term_alpha(a.b, b.b, env_f, env_g)


def uses_primitive_ether(f: Formula) -> bool:
    """Whether the primitive relation E occurs (as atom or quantifier bound)."""
    for node in walk(f):
        if isinstance(node, E):
            return True
        if isinstance(node, (ForallIn, ExistsIn)) and node.rel == "E":
            return True
    return False


def defined_atoms(f: Formula):
    return [node for node in walk(f) if isinstance(node, DEFINED_ATOM_TYPES)]

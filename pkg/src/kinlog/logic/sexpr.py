"""S-expression concrete syntax for formulas.

Grammar (UTF-8, one formula per form; `;` starts a line comment):

    formula := (W k b t t t t) | (IOb k) | (Ph k) | (E k) | (efield)
             | (= s s) | (<= t t) | (< t t)
             | (ether k) | (ob k) | (stl k e)
             | (speed= k b t) | (vel= k b (t t t))
             | (ev= k h (t t t t) (t t t t))
             | (triv~ k h)
             | (lightspeed t) | (etherspeed e t)
             | (rad k e (t t t t) (t t t t))          ; Rad_{v_k(e)}(src)=dst
             | (x-of k e (t t t t) (t t t t))
             | (y-of k e (t t t t) (t t t t))
             | (rad-map (t t t) t (t t t t) (t t t t)) ; vel, c, src, dst
             | (x-map ...) | (y-map ...)
             | (not f) | (and f f ...) | (or f f ...) | (-> f f) | (<-> f f)
             | (forall ((v S) ...) f) | (exists ((v S) ...) f)      ; S: B | Q
             | (forall-in ((v R) ...) f) | (exists-in ((v R) ...) f) ; R: IOb Ph E Ether
    term    := name | rational | (+ t t ...) | (* t t ...) | (- t t) | (- t)

Equality `=` is resolved by sort: if both sides are body variables it is body
equality, otherwise a quantity equation.  All variables must be bound by a
quantifier or declared via the `free` parameter of parse.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import syntax as s

_TOKEN = re.compile(r"""\(|\)|;[^\n]*|[^\s();]+""")
_NUMBER = re.compile(r"^-?\d+(/\d+|\.\d+)?$")


class ParseError(s.LogicError):
    def __init__(self, message, pos=None):
        super().__init__(f"{message}" + (f" (at offset {pos})" if pos is not None else ""))
        self.pos = pos


def _tokenize(text):
    pos = 0
    for m in _TOKEN.finditer(text):
        between = text[pos : m.start()]
        if between.strip():
            raise ParseError(f"unexpected characters {between.strip()!r}", pos)
        pos = m.end()
        tok = m.group()
        if tok.startswith(";"):
            continue
        yield tok, m.start()
    if text[pos:].strip():
        raise ParseError(f"unexpected trailing {text[pos:].strip()!r}", pos)


def _read_forms(text):
    stack = [[]]
    positions = [0]
    for tok, at in _tokenize(text):
        if tok == "(":
            stack.append([])
            positions.append(at)
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", at)
            done = stack.pop()
            positions.pop()
            stack[-1].append(done)
        else:
            stack[-1].append((tok, at))
    if len(stack) != 1:
        raise ParseError("unbalanced '('", positions[-1])
    return stack[0]


_CONNECTIVES = {"not", "and", "or", "->", "<->"}
_BINDERS = {"forall": s.Forall, "exists": s.Exists, "forall-in": s.ForallIn, "exists-in": s.ExistsIn}
_MAP_APP = {"rad": "rad", "x-of": "x", "y-of": "y"}
_MAP_EQ = {"rad-map": "rad", "x-map": "x", "y-map": "y"}


def _sym(form):
    if not isinstance(form, tuple):
        raise ParseError("expected a symbol, got a list")
    return form[0]


def _head(form):
    if isinstance(form, tuple) or not form:
        return None
    h = form[0]
    return h[0] if isinstance(h, tuple) else None


class _Elaborator:
    def __init__(self, env):
        self.env = dict(env)

    def bvar(self, form):
        name = _sym(form)
        var = self.env.get(name)
        if var is None:
            raise ParseError(f"unbound variable {name!r}", form[1])
        if var.sort != s.B:
            raise ParseError(f"{name!r} is a quantity variable where a body is needed", form[1])
        return var

    def term(self, form):
        if isinstance(form, tuple):
            name, at = form
            if _NUMBER.match(name):
                return s.Lit(Fraction(name))
            var = self.env.get(name)
            if var is None:
                raise ParseError(f"unbound variable {name!r}", at)
            if var.sort != s.Q:
                raise ParseError(f"{name!r} is a body variable inside a quantity term", at)
            return var
        head = _head(form)
        args = form[1:]
        if head == "+" and len(args) >= 2:
            out = self.term(args[0])
            for a in args[1:]:
                out = s.Add(out, self.term(a))
            return out
        if head == "*" and len(args) >= 2:
            out = self.term(args[0])
            for a in args[1:]:
                out = s.Mul(out, self.term(a))
            return out
        if head == "-" and len(args) == 2:
            return s.Sub(self.term(args[0]), self.term(args[1]))
        if head == "-" and len(args) == 1:
            return s.Neg(self.term(args[0]))
        raise ParseError(f"bad term head {head!r}")

    def terms(self, form, n):
        if isinstance(form, tuple) or len(form) != n:
            raise ParseError(f"expected a list of {n} terms")
        return tuple(self.term(a) for a in form)

    def formula(self, form):
        if isinstance(form, tuple):
            raise ParseError(f"bare symbol {form[0]!r} is not a formula", form[1])
        head = _head(form)
        args = form[1:]
        if head in _BINDERS:
            if len(args) != 2 or isinstance(args[0], tuple):
                raise ParseError(f"{head} needs a binder list and a body")
            pairs = []
            for p in args[0]:
                if isinstance(p, tuple) or len(p) != 2:
                    raise ParseError(f"bad binder in {head}")
                pairs.append((_sym(p[0]), _sym(p[1])))
            saved = dict(self.env)
            binders = []
            for name, ann in pairs:
                if head in ("forall", "exists"):
                    if ann not in (s.B, s.Q):
                        raise ParseError(f"sort {ann!r} must be B or Q")
                    var = s.Var(name, ann)
                else:
                    if ann not in s.BOUND_RELATIONS:
                        raise ParseError(f"bound relation {ann!r} unknown")
                    var = s.Var(name, s.B)
                self.env[name] = var
                binders.append((var, ann))
            body = self.formula(args[1])
            self.env = saved
            node = body
            for var, ann in reversed(binders):
                if head in ("forall", "exists"):
                    node = _BINDERS[head](var, node)
                else:
                    node = _BINDERS[head](var, ann, node)
            return node
        if head == "not":
            (a,) = args
            return s.Not(self.formula(a))
        if head == "and":
            return s.And(tuple(self.formula(a) for a in args))
        if head == "or":
            return s.Or(tuple(self.formula(a) for a in args))
        if head == "->":
            a, b = args
            return s.Implies(self.formula(a), self.formula(b))
        if head == "<->":
            a, b = args
            return s.Iff(self.formula(a), self.formula(b))
        if head == "W":
            k, b, *coords = args
            if len(coords) != 4:
                raise ParseError("W takes observer, body and 4 coordinates")
            return s.W(self.bvar(k), self.bvar(b), tuple(self.term(c) for c in coords))
        if head in ("IOb", "Ph", "E", "ether", "ob"):
            (k,) = args
            cls = {"IOb": s.IOb, "Ph": s.Ph, "E": s.E, "ether": s.EtherAtom, "ob": s.ObAtom}[head]
            return cls(self.bvar(k))
        if head == "efield":
            return s.EField()
        if head == "stl":
            k, e = args
            return s.StlAtom(self.bvar(k), self.bvar(e))
        if head == "speed=":
            k, b, t = args
            return s.SpeedEq(self.bvar(k), self.bvar(b), self.term(t))
        if head == "vel=":
            k, b, v = args
            return s.VelEq(self.bvar(k), self.bvar(b), self.terms(v, 3))
        if head == "ev=":
            k, h, x, y = args
            return s.EvEq(self.bvar(k), self.bvar(h), self.terms(x, 4), self.terms(y, 4))
        if head == "triv~":
            k, h = args
            return s.TrivRelated(self.bvar(k), self.bvar(h))
        if head == "lightspeed":
            (t,) = args
            return s.LightSpeedAtom(self.term(t))
        if head == "etherspeed":
            e, t = args
            return s.EtherSpeedAtom(self.bvar(e), self.term(t))
        if head in _MAP_APP:
            k, e, src, dst = args
            return s.MapApp(_MAP_APP[head], self.bvar(k), self.bvar(e), self.terms(src, 4), self.terms(dst, 4))
        if head in _MAP_EQ:
            vel, c, src, dst = args
            return s.MapEq(_MAP_EQ[head], self.term(c), self.terms(vel, 3), self.terms(src, 4), self.terms(dst, 4))
        if head == "=":
            a, b = args
            if (
                isinstance(a, tuple)
                and isinstance(b, tuple)
                and not _NUMBER.match(a[0])
                and not _NUMBER.match(b[0])
            ):
                va = self.env.get(a[0])
                vb = self.env.get(b[0])
                if va is None:
                    raise ParseError(f"unbound variable {a[0]!r}", a[1])
                if vb is None:
                    raise ParseError(f"unbound variable {b[0]!r}", b[1])
                if va.sort == s.B or vb.sort == s.B:
                    if va.sort != vb.sort:
                        raise ParseError(f"equality between sorts {va.sort} and {vb.sort}", a[1])
                    return s.BodyEq(va, vb)
            return s.Eq(self.term(a), self.term(b))
        if head == "<=":
            a, b = args
            return s.Le(self.term(a), self.term(b))
        if head == "<":
            a, b = args
            return s.Lt(self.term(a), self.term(b))
        raise ParseError(f"unknown formula head {head!r}")


def parse(text: str, free: dict | None = None) -> s.Formula:
    """Parse a single formula; `free` maps free-variable names to sorts."""
    forms = _read_forms(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one formula, found {len(forms)}")
    env = {name: s.Var(name, sort) for name, sort in (free or {}).items()}
    return _Elaborator(env).formula(forms[0])


def parse_many(text: str, free: dict | None = None) -> list:
    env = {name: s.Var(name, sort) for name, sort in (free or {}).items()}
    return [_Elaborator(env).formula(f) for f in _read_forms(text)]


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def print_term(t) -> str:
    if isinstance(t, s.Var):
        return t.name
    if isinstance(t, s.Lit):
        return _fmt_frac(t.value)
    if isinstance(t, s.Add):
        return f"(+ {print_term(t.a)} {print_term(t.b)})"
    if isinstance(t, s.Sub):
        return f"(- {print_term(t.a)} {print_term(t.b)})"
    if isinstance(t, s.Mul):
        return f"(* {print_term(t.a)} {print_term(t.b)})"
    if isinstance(t, s.Neg):
        return f"(- {print_term(t.a)})"
    raise s.LogicError(f"not a term: {t!r}")


def _terms(ts) -> str:
    return "(" + " ".join(print_term(t) for t in ts) + ")"


_MAP_APP_NAMES = {"rad": "rad", "x": "x-of", "y": "y-of"}
_MAP_EQ_NAMES = {"rad": "rad-map", "x": "x-map", "y": "y-map"}


def print_formula(f) -> str:
    p = print_formula
    if isinstance(f, s.W):
        return f"(W {f.obs.name} {f.body.name} " + " ".join(print_term(c) for c in f.coords) + ")"
    if isinstance(f, s.IOb):
        return f"(IOb {f.body.name})"
    if isinstance(f, s.Ph):
        return f"(Ph {f.body.name})"
    if isinstance(f, s.E):
        return f"(E {f.body.name})"
    if isinstance(f, s.EtherAtom):
        return f"(ether {f.e.name})"
    if isinstance(f, s.ObAtom):
        return f"(ob {f.k.name})"
    if isinstance(f, s.StlAtom):
        return f"(stl {f.k.name} {f.e.name})"
    if isinstance(f, s.SpeedEq):
        return f"(speed= {f.k.name} {f.b.name} {print_term(f.val)})"
    if isinstance(f, s.VelEq):
        return f"(vel= {f.k.name} {f.b.name} {_terms(f.vel)})"
    if isinstance(f, s.EvEq):
        return f"(ev= {f.k.name} {f.h.name} {_terms(f.x)} {_terms(f.y)})"
    if isinstance(f, s.TrivRelated):
        return f"(triv~ {f.k.name} {f.h.name})"
    if isinstance(f, s.LightSpeedAtom):
        return f"(lightspeed {print_term(f.c)})"
    if isinstance(f, s.EtherSpeedAtom):
        return f"(etherspeed {f.e.name} {print_term(f.c)})"
    if isinstance(f, s.MapApp):
        return f"({_MAP_APP_NAMES[f.kind]} {f.k.name} {f.e.name} {_terms(f.src)} {_terms(f.dst)})"
    if isinstance(f, s.MapEq):
        return f"({_MAP_EQ_NAMES[f.kind]} {_terms(f.vel)} {print_term(f.c)} {_terms(f.src)} {_terms(f.dst)})"
    if isinstance(f, s.BodyEq):
        return f"(= {f.a.name} {f.b.name})"
    if isinstance(f, s.Eq):
        return f"(= {print_term(f.a)} {print_term(f.b)})"
    if isinstance(f, s.Le):
        return f"(<= {print_term(f.a)} {print_term(f.b)})"
    if isinstance(f, s.Lt):
        return f"(< {print_term(f.a)} {print_term(f.b)})"
    if isinstance(f, s.EField):
        return "(efield)"
    if isinstance(f, s.Not):
        return f"(not {p(f.f)})"
    if isinstance(f, s.And):
        return "(and " + " ".join(p(a) for a in f.args) + ")"
    if isinstance(f, s.Or):
        return "(or " + " ".join(p(a) for a in f.args) + ")"
    if isinstance(f, s.Implies):
        return f"(-> {p(f.a)} {p(f.b)})"
    if isinstance(f, s.Iff):
        return f"(<-> {p(f.a)} {p(f.b)})"
    if isinstance(f, s.Forall):
        return f"(forall (({f.var.name} {f.var.sort})) {p(f.body)})"
    if isinstance(f, s.Exists):
        return f"(exists (({f.var.name} {f.var.sort})) {p(f.body)})"
    if isinstance(f, s.ForallIn):
        return f"(forall-in (({f.var.name} {f.rel})) {p(f.body)})"
    if isinstance(f, s.ExistsIn):
        return f"(exists-in (({f.var.name} {f.rel})) {p(f.body)})"
    raise s.LogicError(f"not a formula: {f!r}")

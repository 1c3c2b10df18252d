"""Sampling- and witness-based evaluation of formulas on desk models.

Semantics are standard Tarskian over the intensional model shape.  Body
quantifiers range over the finite roster (universals are therefore a
falsification-failure check, not a proof); existential body quantifiers may
synthesize new roster members (photons through required events, observers on
required lines, trivially-shifted observers) because the potential-body
sorts are closed under the theory's transformation group.  Quantity
universals are sampled: adversarial values first, then seeded random
rationals, with variables that are forced by equational constraints solved
rather than sampled so that implication antecedents are actually exercised.
Quantity existentials are solved from the equational structure of their
body (map applications, event equalities, velocity definitions, light-speed
pinning), which also yields decisive refutations when the forced equations
are inconsistent.

A ``fails`` verdict always carries a concrete assignment for the root
quantifier prefix plus the printed matrix, and ``recheck`` re-evaluates that
matrix under the assignment independently of the search path that found it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..logic import syntax as s
from ..logic.sexpr import print_formula
from ..scalars import NotPerfectSquare, format_scalar, parse_scalar
from ..transforms import (
    AffineMap4,
    SpeedNotSTL,
    galilean_boost,
    radarization,
    x_map,
    y_map,
)
from ..geometry import norm_sq3
from .core import Body, Model, sr_boost_placement

UNKNOWN = None

HOLDS = "holds-on-samples"
FAILS = "fails"
UNDECIDED = "unknown"


@dataclass
class EvalResult:
    verdict: str
    counterexample: Optional[dict] = None
    samples_used: int = 0
    core: Optional[str] = None
    core_formula: object = None
    synthesized: List[dict] = field(default_factory=list)

    @property
    def holds(self):
        return self.verdict == HOLDS


class _Unsat(Exception):
    """The collected equational constraints cannot be satisfied."""


class _NotYet(Exception):
    """A term still mentions unsolved variables."""


def _is_val(x):
    return isinstance(x, (Fraction, int, float))


class Evaluator:
    def __init__(self, model: Model, seed: int = 0, budget: int = 10_000, hooks=None):
        self.model = model
        self.seed = seed
        self.rng = random.Random(seed)
        self.budget = budget
        self.used = 0
        self.hooks = dict(hooks or {})
        self.roster: Dict[str, Body] = dict(model.bodies)
        self.synthesized: List[Body] = []
        self._synth_n = 0
        self.inner_forall_samples = max(6, min(24, budget // 500))
        self.exists_tries = 10
        self._adversarial = self._adversarial_pool()

    # ------------------------------------------------------------ roster

    def bodies(self, rel: Optional[str] = None) -> List[Body]:
        out = list(self.roster.values())
        if rel is None:
            return out
        if rel == "IOb":
            return [b for b in out if b.is_observer]
        if rel == "Ph":
            return [b for b in out if b.is_photon]
        if rel == "E":
            return [b for b in out if b.ether]
        if rel == "Ether":
            return [b for b in out if self.model.isotropic_observer(b)]
        raise s.LogicError(f"unknown relation {rel}")

    def add_synth(self, body: Body) -> Body:
        self._synth_n += 1
        body = Body(
            name=f"_synth{self._synth_n}_{body.name}",
            kind=body.kind,
            placement=body.placement,
            line=body.line,
            ether=body.ether,
            synthesized=True,
        )
        self.roster[body.name] = body
        self.synthesized.append(body)
        return body

    def synth_photon(self, p0, v) -> Optional[Body]:
        if norm_sq3(v) != self.model.c**2:
            return None
        return self.add_synth(Body(name="ph", kind="photon", line=(tuple(p0), tuple(v))))

    def synth_observer(self, placement: AffineMap4) -> Optional[Body]:
        from ..transforms import classify

        cls = classify(placement, self.model.c)
        ok = cls.poincare if not self.model.is_classical else cls.galilean
        if not ok:
            return None
        ether = self.model.is_classical and cls.trivial
        return self.add_synth(Body(name="k", kind="observer", placement=placement, ether=ether))

    # ----------------------------------------------------------- helpers

    def _adversarial_pool(self):
        c = self.model.c
        pool = [Fraction(0), Fraction(1), Fraction(-1), c, -c, c / 2, Fraction(2), Fraction(-1, 2)]
        for b in list(self.model.bodies.values())[:4]:
            if b.is_observer:
                pool.extend(b.placement.translation[:2])
        seen, out = set(), []
        for v in pool:
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def _sample_value(self):
        r = self.rng
        num = r.randrange(-8, 9)
        den = r.choice((1, 1, 2, 3, 4))
        return Fraction(num, den)

    def _charge(self, n=1) -> bool:
        if self.budget <= 0:
            return False
        self.used += n
        return True

    def _fill_value(self, i, pos, nvars):
        """Adversarial schedule first (origin, axis points, pool), then random."""
        pool = self._adversarial
        if i == 0:
            return Fraction(0)
        if 1 <= i <= nvars:
            return Fraction(1) if pos == i - 1 else Fraction(0)
        if i <= nvars + len(pool):
            return pool[(i + pos) % len(pool)]
        return self._sample_value()

    def term(self, t, env):
        if isinstance(t, s.Var):
            try:
                v = env[t]
            except KeyError:
                raise _NotYet(t.name) from None
            if isinstance(v, Body):
                raise s.SortMismatch(f"{t.name} is a body in a quantity term")
            return v
        if isinstance(t, s.Lit):
            return self.model.field.of(t.value)
        if isinstance(t, s.Add):
            return self.term(t.a, env) + self.term(t.b, env)
        if isinstance(t, s.Sub):
            return self.term(t.a, env) - self.term(t.b, env)
        if isinstance(t, s.Mul):
            return self.term(t.a, env) * self.term(t.b, env)
        if isinstance(t, s.Neg):
            return -self.term(t.a, env)
        raise s.LogicError(f"not a term: {t!r}")

    def _body(self, var, env) -> Body:
        v = env.get(var)
        if not isinstance(v, Body):
            raise _NotYet(var.name)
        return v

    def _points(self, ts, env):
        return tuple(self.term(t, env) for t in ts)

    def _map_for(self, kind, vel, c):
        if kind == "rad":
            return radarization(vel, c, self.model.field)
        if kind == "x":
            return x_map(vel, c, self.model.field)
        if kind == "y":
            return y_map(vel, c, self.model.field)
        raise s.LogicError(f"unknown map kind {kind}")

    # -------------------------------------------------------------- atoms

    def _atom(self, f, env):
        m = self.model
        if isinstance(f, s.W):
            k, b = self._body(f.obs, env), self._body(f.body, env)
            return m.sees(k, b, self._points(f.coords, env))
        if isinstance(f, s.IOb):
            return self._body(f.body, env).is_observer
        if isinstance(f, s.Ph):
            return self._body(f.body, env).is_photon
        if isinstance(f, s.E):
            return self._body(f.body, env).ether
        if isinstance(f, s.BodyEq):
            return self._body(f.a, env).name == self._body(f.b, env).name
        if isinstance(f, s.Eq):
            return self.term(f.a, env) == self.term(f.b, env)
        if isinstance(f, s.Le):
            return self.term(f.a, env) <= self.term(f.b, env)
        if isinstance(f, s.Lt):
            return self.term(f.a, env) < self.term(f.b, env)
        if isinstance(f, s.EField):
            return True
        if isinstance(f, s.EtherAtom):
            return m.isotropic_observer(self._body(f.e, env))
        if isinstance(f, s.ObAtom):
            return self._body(f.k, env).is_observer
        if isinstance(f, s.StlAtom):
            k, e = self._body(f.k, env), self._body(f.e, env)
            if not m.isotropic_observer(e) or not k.is_observer:
                return False
            vel = m.velocity_of(e, k)
            return vel is not None and norm_sq3(vel) < m.c * m.c
        if isinstance(f, s.SpeedEq):
            k, b = self._body(f.k, env), self._body(f.b, env)
            if not k.is_observer:
                return False
            vel = m.velocity_of(k, b)
            if vel is None:
                return False
            val = self.term(f.val, env)
            return val >= 0 and val * val == norm_sq3(vel)
        if isinstance(f, s.VelEq):
            k, b = self._body(f.k, env), self._body(f.b, env)
            if not k.is_observer:
                return False
            vel = m.velocity_of(k, b)
            if vel is None:
                return False
            return all(self.term(f.vel[i], env) == vel[i] for i in range(3))
        if isinstance(f, s.EvEq):
            k, h = self._body(f.k, env), self._body(f.h, env)
            if k.is_observer and h.is_observer:
                return m.frame_event(k, self._points(f.x, env)) == m.frame_event(
                    h, self._points(f.y, env)
                )
            # the potential-body sorts put an event at every coordinate point
            # of an observer, so a mixed pair can never agree
            return (not k.is_observer) and (not h.is_observer)
        if isinstance(f, s.LightSpeedAtom):
            c = self.term(f.c, env)
            if not m.is_classical:
                return c == m.c
            if all(m.isotropic_observer(b) for b in self.bodies("IOb")):
                return c == m.c
            return False
        if isinstance(f, s.EtherSpeedAtom):
            e = self._body(f.e, env)
            return m.isotropic_observer(e) and self.term(f.c, env) == m.c
        if isinstance(f, s.TrivRelated):
            from ..transforms import classify

            k, h = self._body(f.k, env), self._body(f.h, env)
            if not (k.is_observer and h.is_observer):
                return False
            return classify(m.worldview_transform(k, h), m.c).trivial
        if isinstance(f, s.MapEq):
            try:
                c = self.term(f.c, env)
                vel = self._points(f.vel, env)
                src = self._points(f.src, env)
                dst = self._points(f.dst, env)
            except _NotYet:
                raise
            try:
                mp = self._map_for(f.kind, vel, c)
            except SpeedNotSTL:
                return False
            except NotPerfectSquare:
                return UNKNOWN
            return mp.apply(src) == dst
        if isinstance(f, s.MapApp):
            k, e = self._body(f.k, env), self._body(f.e, env)
            if not m.isotropic_observer(e) or not k.is_observer:
                return False
            vel = m.velocity_of(k, e)
            if vel is None:
                return False
            try:
                mp = self._map_for(f.kind, vel, m.c)
            except SpeedNotSTL:
                return False
            except NotPerfectSquare:
                return UNKNOWN
            return mp.apply(self._points(f.src, env)) == self._points(f.dst, env)
        raise s.LogicError(f"no atom rule for {type(f).__name__}")

    # ------------------------------------------------------------ formulas

    def eval(self, f, env):
        if isinstance(f, s.Not):
            v = self.eval(f.f, env)
            return UNKNOWN if v is UNKNOWN else (not v)
        if isinstance(f, s.And):
            unknown = False
            for a in f.args:
                v = self.eval(a, env)
                if v is False:
                    return False
                if v is UNKNOWN:
                    unknown = True
            return UNKNOWN if unknown else True
        if isinstance(f, s.Or):
            unknown = False
            for a in f.args:
                v = self.eval(a, env)
                if v is True:
                    return True
                if v is UNKNOWN:
                    unknown = True
            return UNKNOWN if unknown else False
        if isinstance(f, s.Implies):
            va = self.eval(f.a, env)
            if va is False:
                return True
            vb = self.eval(f.b, env)
            if vb is True:
                return True
            if va is UNKNOWN or vb is UNKNOWN:
                return UNKNOWN
            return vb
        if isinstance(f, s.Iff):
            va, vb = self.eval(f.a, env), self.eval(f.b, env)
            if va is UNKNOWN or vb is UNKNOWN:
                return UNKNOWN
            return va == vb
        if isinstance(f, (s.Forall, s.ForallIn)):
            if f.var.sort == s.B:
                return self._forall_b(f, env)
            return self._forall_q(f, env)
        if isinstance(f, (s.Exists, s.ExistsIn)):
            if f.var.sort == s.B:
                return self._exists_b(f, env)
            return self._exists_q(f, env)
        try:
            return self._atom(f, env)
        except _NotYet as missing:
            raise s.LogicError(f"unbound variable {missing} in closed evaluation") from None

    # body-sort quantifiers ------------------------------------------------

    def _domain(self, f) -> List[Body]:
        rel = f.rel if isinstance(f, (s.ForallIn, s.ExistsIn)) else None
        return self.bodies(rel)

    def _forall_b(self, f, env):
        unknown = False
        for b in self._domain(f):
            v = self.eval(f.body, {**env, f.var: b})
            if v is False:
                return False
            if v is UNKNOWN:
                unknown = True
        return UNKNOWN if unknown else True

    def _exists_b(self, f, env):
        rel = f.rel if isinstance(f, s.ExistsIn) else None
        # synthesized witnesses first: they are cheap to verify and usually
        # exactly the demanded body, while roster scans re-evaluate the whole
        # body per member
        if rel == "IOb":
            for hook in self.hooks.get("observer_witness", ()):
                for body in hook(self, f, env) or ():
                    v = self.eval(f.body, {**env, f.var: body})
                    if v is True:
                        return True
        for b in self._domain(f):
            v = self.eval(f.body, {**env, f.var: b})
            if v is True:
                return True
        if rel == "Ph" or rel is None:
            v = self._photon_witness(f, env)
            if v is not None:
                return v
        return UNKNOWN

    def _photon_witness(self, f, env):
        """Decisive witness for a photon existential constraining its worldline.

        Gathers the W(k, p, pt) conjuncts, solves the point chains, and maps
        them to frame events; a photon through them exists exactly when they
        lie on one light line (one event extends in any light direction).
        """
        var = f.var
        conjuncts, aux = self._flatten(f.body, probe=False)
        atoms = [a for a in conjuncts if not isinstance(a, tuple)]
        watoms = [a for a in atoms if isinstance(a, s.W) and a.body == var]
        if not watoms or any(
            not isinstance(a, (s.W, s.Ph)) and var in s.free_vars(a) for a in atoms
        ):
            return None
        try:
            solved = self._solve(conjuncts, set(aux), env, skip_bodies={var})
        except _Unsat:
            return False
        envx = {**env, **solved}
        events = []
        for a in watoms:
            try:
                k = self._body(a.obs, envx)
                pt = self._points(a.coords, envx)
            except _NotYet:
                return None
            if not k.is_observer:
                return False
            events.append(self.model.frame_event(k, pt))
        base = events[0]
        distinct = [e for e in events if e != base]
        c = self.model.c
        if not distinct:
            cand = self.synth_photon(base, (c, Fraction(0), Fraction(0)))
        else:
            other = distinct[0]
            dt = other[0] - base[0]
            dx = tuple(other[i + 1] - base[i + 1] for i in range(3))
            if dt == 0 or norm_sq3(dx) != c * c * dt * dt:
                return False
            v = tuple(comp / dt for comp in dx)
            for evn in distinct[1:]:
                ddt = evn[0] - base[0]
                if tuple(evn[i + 1] - base[i + 1] for i in range(3)) != tuple(x * ddt for x in v):
                    return False
            cand = self.synth_photon(base, v)
        if cand is None:
            return None
        return self.eval(f.body, {**env, var: cand})

    # quantity-sort quantifiers -------------------------------------------

    def _q_block(self, f, kinds):
        vs = []
        node = f
        while isinstance(node, kinds) and node.var.sort == s.Q:
            vs.append(node.var)
            node = node.body
        return vs, node

    def _forall_q(self, f, env, samples=None):
        vs, body = self._q_block(f, s.Forall)
        n = samples if samples is not None else self.inner_forall_samples
        unknown = False
        count = 0
        for assign in self._instantiate(vs, body, env, n):
            count += 1
            v = self.eval(body, {**env, **assign})
            if v is False:
                return False
            if v is UNKNOWN:
                unknown = True
        if count == 0:
            return UNKNOWN
        return UNKNOWN if unknown else True

    def _exists_q(self, f, env):
        vs, body = self._q_block(f, s.Exists)
        conjuncts, aux = self._flatten(body, probe=False)
        unknowns = set(vs) | set(aux)
        try:
            solved = self._solve(conjuncts, unknowns, env)
        except _Unsat:
            return False
        if self.budget <= 0:
            return UNKNOWN
        base = {v: solved[v] for v in vs if v in solved}
        candidates = [base] if len(base) == len(vs) else []
        if len(base) < len(vs):
            remaining = [v for v in vs if v not in base]
            for i in range(self.exists_tries):
                extra = dict(base)
                for v in remaining:
                    pool = self._adversarial
                    extra[v] = pool[(i + len(extra)) % len(pool)] if i < len(pool) else self._sample_value()
                try:
                    re = self._solve(conjuncts, unknowns, env, seeded=extra, w_index=i)
                except _Unsat:
                    continue
                cand = {v: re.get(v, extra.get(v)) for v in vs}
                if all(v in cand and cand[v] is not None for v in vs):
                    candidates.append(cand)
        for cand in candidates:
            self.used += 1
            v = self.eval(body, {**env, **cand})
            if v is True:
                return True
        return UNKNOWN

    # ------------------------------------------------- constraint handling

    def _flatten(self, f, probe: bool, out=None, aux=None, depth=0):
        """Conjunctively-required atoms, descending through And / Exists /
        Forall (universally bound variables join the unknowns: any choice is
        implied).  With probe=True, implication antecedents, biconditional
        sides and the first member of bounded universals are also collected
        for counterexample-guided instantiation (verified afterwards)."""
        if out is None:
            out, aux = [], []
        if depth > 12:
            return out, aux
        if isinstance(f, s.And):
            for a in f.args:
                self._flatten(a, probe, out, aux, depth + 1)
        elif isinstance(f, s.Exists) and f.var.sort == s.Q:
            aux.append(f.var)
            self._flatten(f.body, probe, out, aux, depth + 1)
        elif isinstance(f, s.Forall) and f.var.sort == s.Q:
            aux.append(f.var)
            self._flatten(f.body, probe, out, aux, depth + 1)
        elif isinstance(f, s.ForallIn):
            dom = self.bodies(f.rel)
            if dom:
                out.append(("bind", f.var, dom[0]))
                self._flatten(f.body, probe, out, aux, depth + 1)
        elif probe and isinstance(f, (s.Implies, s.Iff)):
            self._flatten(f.a, probe, out, aux, depth + 1)
            self._flatten(f.b, probe, out, aux, depth + 1)
        elif isinstance(f, s.ATOM_TYPES):
            out.append(f)
        return out, aux

    def _solve(self, conjuncts, unknowns, env, seeded=None, skip_bodies=(), w_index=0, strict=True):
        """Propagate forced values for the unknowns.

        In strict mode inconsistent forced equations raise _Unsat, which is
        a decisive refutation (the conjuncts are all required).  In probe
        mode (universal-block instantiation) inconsistencies only mean the
        probed branch is not the satisfying one, so the offending atom is
        skipped and derivation continues.  Returns a partial assignment."""
        assign: dict = dict(seeded or {})
        work_env = dict(env)

        def fail():
            if strict:
                raise _Unsat
            raise _NotYet("probe-inconsistency")

        def lookup(var):
            if var in assign:
                return assign[var]
            return work_env.get(var)

        def try_term(t):
            if isinstance(t, s.Var):
                v = lookup(t)
                if v is None or isinstance(v, Body) and t.sort == s.Q:
                    raise _NotYet(t.name)
                return v
            if isinstance(t, s.Lit):
                return self.model.field.of(t.value)
            if isinstance(t, s.Neg):
                return -try_term(t.a)
            a = try_term(t.a)
            b = try_term(t.b)
            if isinstance(t, s.Add):
                return a + b
            if isinstance(t, s.Sub):
                return a - b
            return a * b

        def linearize(t):
            """term -> (coeffs, const) linear over unknown q-vars, or None."""
            if isinstance(t, s.Var):
                v = lookup(t)
                if v is not None and not isinstance(v, Body):
                    return {}, v
                if t in unknowns:
                    return {t: Fraction(1)}, Fraction(0)
                return None
            if isinstance(t, s.Lit):
                return {}, self.model.field.of(t.value)
            if isinstance(t, s.Neg):
                r = linearize(t.a)
                if r is None:
                    return None
                return {k: -v for k, v in r[0].items()}, -r[1]
            ra, rb = linearize(t.a), linearize(t.b)
            if ra is None or rb is None:
                return None
            if isinstance(t, s.Add):
                coeffs = dict(ra[0])
                for k, v in rb[0].items():
                    coeffs[k] = coeffs.get(k, Fraction(0)) + v
                return coeffs, ra[1] + rb[1]
            if isinstance(t, s.Sub):
                coeffs = dict(ra[0])
                for k, v in rb[0].items():
                    coeffs[k] = coeffs.get(k, Fraction(0)) - v
                return coeffs, ra[1] - rb[1]
            if not ra[0]:
                return {k: ra[1] * v for k, v in rb[0].items()}, ra[1] * rb[1]
            if not rb[0]:
                return {k: rb[1] * v for k, v in ra[0].items()}, rb[1] * ra[1]
            return None

        def set_value(var, value):
            if var in assign:
                if assign[var] != value:
                    fail()
                return False
            assign[var] = value
            return True

        def bind_point(point_terms, values):
            progress = False
            for t, val in zip(point_terms, values):
                if isinstance(t, s.Var) and t in unknowns:
                    progress |= set_value(t, val)
                    continue
                try:
                    if try_term(t) != val:
                        fail()
                    continue
                except _NotYet:
                    pass
                lin = linearize(t)
                if lin is None:
                    continue
                coeffs = {k: v for k, v in lin[0].items() if v != 0}
                if len(coeffs) == 1:
                    ((var, cf),) = coeffs.items()
                    progress |= set_value(var, (val - lin[1]) / cf)
            return progress

        w_tick = [0]
        for round_no in range(5):
            progress = False
            for item in conjuncts:
                if isinstance(item, tuple) and item[0] == "bind":
                    work_env[item[1]] = item[2]
                    continue
                a = item
                try:
                    if isinstance(a, s.Eq):
                        la, lb = linearize(a.a), linearize(a.b)
                        if la and lb:
                            coeffs = dict(la[0])
                            for k, v in lb[0].items():
                                coeffs[k] = coeffs.get(k, Fraction(0)) - v
                            const = la[1] - lb[1]
                            coeffs = {k: v for k, v in coeffs.items() if v != 0}
                            if not coeffs:
                                if const != 0:
                                    fail()
                            elif len(coeffs) == 1:
                                ((var, cf),) = coeffs.items()
                                progress |= set_value(var, -const / cf)
                    elif isinstance(a, s.VelEq):
                        k = lookup(a.k)
                        b = lookup(a.b)
                        if isinstance(k, Body) and isinstance(b, Body):
                            if not k.is_observer:
                                fail()
                            vel = self.model.velocity_of(k, b)
                            if vel is None:
                                fail()
                            progress |= bind_point(a.vel, vel)
                    elif isinstance(a, s.SpeedEq):
                        k = lookup(a.k)
                        b = lookup(a.b)
                        if isinstance(k, Body) and isinstance(b, Body) and isinstance(a.val, s.Var):
                            if not k.is_observer:
                                fail()
                            vel = self.model.velocity_of(k, b)
                            if vel is None:
                                fail()
                            try:
                                sp = self.model.field.sqrt(norm_sq3(vel))
                            except NotPerfectSquare:
                                continue
                            if a.val in unknowns:
                                progress |= set_value(a.val, sp)
                    elif isinstance(a, s.EtherSpeedAtom):
                        e = lookup(a.e)
                        if isinstance(e, Body):
                            if not self.model.isotropic_observer(e):
                                fail()
                            if isinstance(a.c, s.Var) and a.c in unknowns:
                                progress |= set_value(a.c, self.model.c)
                    elif isinstance(a, s.LightSpeedAtom):
                        v = self._atom_lightspeed_pin(a)
                        if v is False:
                            fail()
                        if isinstance(a.c, s.Var) and a.c in unknowns:
                            progress |= set_value(a.c, self.model.c)
                    elif isinstance(a, s.EvEq):
                        k = lookup(a.k)
                        h = lookup(a.h)
                        if isinstance(k, Body) and isinstance(h, Body):
                            if k.is_observer != h.is_observer:
                                fail()
                            if not k.is_observer:
                                continue
                            wm = self.model.worldview_transform(k, h)
                            try:
                                xs = tuple(try_term(t) for t in a.x)
                                progress |= bind_point(a.y, wm.apply(xs))
                            except _NotYet:
                                try:
                                    ys = tuple(try_term(t) for t in a.y)
                                    progress |= bind_point(a.x, wm.inverse().apply(ys))
                                except _NotYet:
                                    pass
                    elif isinstance(a, s.MapApp):
                        k = lookup(a.k)
                        e = lookup(a.e)
                        if isinstance(k, Body) and isinstance(e, Body):
                            if not self.model.isotropic_observer(e) or not k.is_observer:
                                fail()
                            vel = self.model.velocity_of(k, e)
                            if vel is None:
                                fail()
                            try:
                                mp = self._map_for(a.kind, vel, self.model.c)
                            except SpeedNotSTL:
                                fail()
                            except NotPerfectSquare:
                                continue
                            try:
                                src = tuple(try_term(t) for t in a.src)
                                progress |= bind_point(a.dst, mp.apply(src))
                            except _NotYet:
                                try:
                                    dst = tuple(try_term(t) for t in a.dst)
                                    progress |= bind_point(a.src, mp.inverse().apply(dst))
                                except _NotYet:
                                    pass
                    elif isinstance(a, s.MapEq):
                        try:
                            c = try_term(a.c)
                            vel = tuple(try_term(t) for t in a.vel)
                        except _NotYet:
                            continue
                        try:
                            mp = self._map_for(a.kind, vel, c)
                        except SpeedNotSTL:
                            fail()
                        except NotPerfectSquare:
                            continue
                        try:
                            src = tuple(try_term(t) for t in a.src)
                            progress |= bind_point(a.dst, mp.apply(src))
                        except _NotYet:
                            try:
                                dst = tuple(try_term(t) for t in a.dst)
                                progress |= bind_point(a.src, mp.inverse().apply(dst))
                            except _NotYet:
                                pass
                    elif isinstance(a, s.W):
                        k = lookup(a.obs)
                        b = lookup(a.body)
                        if a.body in skip_bodies or not isinstance(k, Body) or not isinstance(b, Body):
                            continue
                        vars_here = [t for t in a.coords if isinstance(t, s.Var) and t in unknowns and t not in assign]
                        if len(vars_here) != 4:
                            continue
                        if not k.is_observer:
                            fail()
                        t_par = Fraction(w_tick[0] + w_index)
                        w_tick[0] += 1
                        if b.is_observer:
                            pt = k.placement.inverse().apply(b.placement.apply((t_par, 0, 0, 0)))
                        else:
                            p0, v = b.line
                            ev = (p0[0] + t_par, *(p0[i + 1] + v[i] * t_par for i in range(3)))
                            pt = k.placement.inverse().apply(ev)
                        progress |= bind_point(a.coords, pt)
                except _NotYet:
                    continue
            if not progress:
                break
        return assign

    def _atom_lightspeed_pin(self, a):
        m = self.model
        if not m.is_classical:
            return True
        return all(m.isotropic_observer(b) for b in self.bodies("IOb"))

    # -------------------------------------------------------- instantiation

    def _instantiate(self, vs, body, env, n):
        """Yield up to n assignments for a universal block.

        Registered block samplers and adversarial values come first, then
        seeded random values; variables forced by the probe constraints
        (implication antecedents, biconditional sides, map chains) are
        solved rather than sampled, except on every third draw, which stays
        purely random so the vacuous branches are exercised too."""
        if n <= 0 or self.budget <= 0:
            return
        conjuncts, aux = self._flatten(body, probe=True)
        unknowns = set(vs) | set(aux)
        sampler = None
        for cand in self.hooks.get("block_sampler", ()):
            if cand.matches(vs, env):
                sampler = cand.generate(self, vs, env)
                break
        nvars = len(vs)
        for i in range(n):
            self.used += 1
            assign = {}
            if sampler is not None:
                try:
                    assign = dict(next(sampler))
                except StopIteration:
                    sampler = None
            use_solver = bool(assign) or i % 3 != 2
            solved = dict(assign)
            if use_solver:
                try:
                    solved.update(self._solve(conjuncts, unknowns, env, seeded=assign, w_index=i, strict=False))
                except _Unsat:
                    solved = dict(assign)
            for pos, v in enumerate(vs):
                if v in solved:
                    continue
                solved[v] = self._fill_value(i, pos, nvars)
                # coordinates come in 4-tuples, so forced values can only
                # appear once a tuple is complete; re-solving elsewhere is
                # wasted work
                at_boundary = (pos + 1) % 4 == 0 or pos == nvars - 1
                if use_solver and at_boundary and any(u not in solved for u in vs):
                    try:
                        solved.update(self._solve(conjuncts, unknowns, env, seeded=solved, w_index=i, strict=False))
                    except _Unsat:
                        pass
            yield {v: solved[v] for v in vs}

    # --------------------------------------------------------------- driver

    def check(self, f, axiom_name=None, root_samples=None) -> EvalResult:
        self.used = 0
        for refuter in self.hooks.get("refuter", ()):
            res = refuter(self, f, axiom_name)
            if res is not None:
                return res
        state = {"cx": None, "core": None, "unknown": False}
        verdict_true = self._drive(f, {}, [], state, root_samples, weight=1)
        if verdict_true is False:
            cx, core = state["cx"], state["core"]
            return EvalResult(
                verdict=FAILS,
                counterexample=cx,
                samples_used=self.used,
                core=print_formula(core) if core is not None else None,
                core_formula=core,
                synthesized=[_serialize_body(b) for b in self.synthesized],
            )
        if verdict_true is UNKNOWN or state["unknown"]:
            return EvalResult(verdict=UNDECIDED, samples_used=self.used)
        return EvalResult(verdict=HOLDS, samples_used=self.used)

    def _drive(self, f, env, trail, state, root_samples, weight=1):
        if isinstance(f, (s.Forall, s.ForallIn)) and f.var.sort == s.B:
            domain = self._domain(f)
            unknown = False
            for b in domain:
                v = self._drive(
                    f.body,
                    {**env, f.var: b},
                    trail + [(f.var, b)],
                    state,
                    root_samples,
                    weight * max(1, len(domain)),
                )
                if v is False:
                    return False
                if v is UNKNOWN:
                    unknown = True
            return UNKNOWN if unknown else True
        if isinstance(f, s.Forall) and f.var.sort == s.Q:
            vs, body = self._q_block(f, s.Forall)
            if root_samples is not None:
                n = root_samples
            else:
                n = max(2, min(64, self.budget // max(1, 8 * weight)))
            unknown = False
            count = 0
            for assign in self._instantiate(vs, body, env, n):
                count += 1
                v = self._drive(
                    body,
                    {**env, **assign},
                    trail + list(assign.items()),
                    state,
                    root_samples,
                    weight * n,
                )
                if v is False:
                    return False
                if v is UNKNOWN:
                    unknown = True
            if count == 0:
                return UNKNOWN
            return UNKNOWN if unknown else True
        if isinstance(f, s.And):
            unknown = False
            for a in f.args:
                v = self._drive(a, env, trail, state, root_samples, weight)
                if v is False:
                    return False
                if v is UNKNOWN:
                    unknown = True
            return UNKNOWN if unknown else True
        v = self.eval(f, env)
        if v is False and state["cx"] is None:
            state["cx"] = {var.name: _serialize_value(val) for var, val in trail}
            state["core"] = f
            state["env"] = {var.name: val for var, val in trail}
        return v


def _serialize_value(v):
    if isinstance(v, Body):
        return v.name
    return format_scalar(v)


def _serialize_body(b: Body) -> dict:
    out = {"name": b.name, "kind": b.kind}
    if b.line is not None:
        out["line"] = {
            "point": [format_scalar(x) for x in b.line[0]],
            "velocity": [format_scalar(x) for x in b.line[1]],
        }
    if b.placement is not None:
        lin, tr = b.placement.to_lists()
        out["placement"] = {
            "linear": [[format_scalar(x) for x in row] for row in lin],
            "translation": [format_scalar(x) for x in tr],
        }
    return out


def recheck(model: Model, result: EvalResult) -> bool:
    """Independently re-evaluate a counterexample: substitute the recorded
    assignment into the matrix and confirm it evaluates to False."""
    if result.verdict != FAILS or result.core_formula is None:
        return False
    ev = Evaluator(model, seed=1, budget=4000)
    for sb in result.synthesized:
        if sb["kind"] == "photon":
            p0 = tuple(parse_scalar(x) for x in sb["line"]["point"])
            v = tuple(parse_scalar(x) for x in sb["line"]["velocity"])
            ev.roster[sb["name"]] = Body(name=sb["name"], kind="photon", line=(p0, v), synthesized=True)
        else:
            lin = tuple(tuple(parse_scalar(x) for x in row) for row in sb["placement"]["linear"])
            tr = tuple(parse_scalar(x) for x in sb["placement"]["translation"])
            ev.roster[sb["name"]] = Body(
                name=sb["name"], kind="observer", placement=AffineMap4(lin, tr), synthesized=True
            )
    env = {}
    for var in s.free_vars(result.core_formula):
        raw = result.counterexample.get(var.name)
        if raw is None:
            return False
        env[var] = ev.roster[raw] if var.sort == s.B else model.field.of(parse_scalar(raw))
    return ev.eval(result.core_formula, env) is False

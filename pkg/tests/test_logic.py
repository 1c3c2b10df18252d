from fractions import Fraction

import pytest

import kinlog.logic.syntax as S
from kinlog.logic import (
    THEORIES,
    UnknownAxiom,
    alpha_equal,
    axiom,
    axiom_names,
    expand_macros,
    parse,
    print_formula,
    substitute,
)
from kinlog.logic.macros import expand_map_eq
from kinlog.logic.sexpr import ParseError


def test_parse_trivial_examples():
    f = parse("(forall ((x Q)) (= x x))")
    assert isinstance(f, S.Forall)
    assert f.body == S.Eq(f.var, f.var)
    with pytest.raises(ParseError):
        parse("(= x x)")  # unbound
    f = parse("(= x x)", free={"x": "Q"})
    assert isinstance(f, S.Eq)


def test_parse_sort_errors():
    with pytest.raises(ParseError):
        parse("(forall ((k Q)) (W k k 0 0 0 0))")
    with pytest.raises(ParseError):
        parse("(forall ((k B) (x Q)) (= k x))")
    with pytest.raises(ParseError):
        parse("(forall ((k B)) (+ k 1))")


def test_print_parse_roundtrip_catalog():
    for name in axiom_names():
        f = axiom(name)
        text = print_formula(f)
        again = parse(text)
        assert alpha_equal(f, again)
        # printing is a normal form: print(parse(print(f))) == print(f)
        assert print_formula(again) == text


def test_axiom_self_shape():
    f = axiom("AxSelf")
    assert isinstance(f, S.ForallIn) and f.rel == "IOb"
    with pytest.raises(UnknownAxiom):
        axiom("AxNope")


def test_axiom_noacc_reading():
    f = axiom("AxNoAcc")
    assert isinstance(f, S.Forall)
    assert isinstance(f.body, S.Implies)
    assert isinstance(f.body.a, S.ObAtom)
    assert isinstance(f.body.b, S.IOb)


def test_theory_sets_memberships():
    assert set(THEORIES["Kin_Full"]) == {
        "AxEField",
        "AxEv",
        "AxSelf",
        "AxSymD",
        "AxLine",
        "AxTriv",
        "AxNoAcc",
    }
    assert set(THEORIES["ClassicalKin_Full"]) == set(THEORIES["Kin_Full"]) | {
        "AxAbsTime",
        "AxThExp+",
        "AxEther",
    }
    assert set(THEORIES["ClassicalKin_STL_Full"]) == (
        set(THEORIES["ClassicalKin_Full"]) - {"AxThExp+"}
    ) | {"AxNoFTL", "AxThExpSTL"}
    assert set(THEORIES["SpecRel_Full"]) == set(THEORIES["Kin_Full"]) | {"AxPh_c", "AxThExp"}
    assert set(THEORIES["SpecRel_e_Full"]) == set(THEORIES["SpecRel_Full"]) | {
        "AxPrimitiveEther"
    }


def test_free_vars_and_substitute():
    x, y = S.qvar("x"), S.qvar("y")
    f = S.Eq(x, y)
    assert S.free_vars(f) == frozenset({x, y})
    b, e = S.bvar("b"), S.bvar("e")
    g = S.IOb(b)
    assert substitute(g, b, e) == S.IOb(e)
    h = S.Exists(b, S.IOb(b))
    assert substitute(h, b, e) == h  # bound occurrence untouched
    with pytest.raises(S.SortMismatch):
        substitute(g, b, x)


def test_substitute_capture_avoiding():
    b, e = S.bvar("b"), S.bvar("e")
    # exists e (b = e); substituting b -> e must rename the binder
    f = S.Exists(e, S.BodyEq(b, e))
    g = substitute(f, b, e)
    assert isinstance(g, S.Exists)
    assert g.var != e
    assert g.body == S.BodyEq(e, g.var)


def test_alpha_equal():
    x, y = S.qvar("x"), S.qvar("y")
    f = S.Forall(x, S.Eq(x, x))
    g = S.Forall(y, S.Eq(y, y))
    assert alpha_equal(f, g)
    assert not alpha_equal(f, S.Forall(y, S.Eq(y, S.lit(0))))


def test_expand_macros_idempotent_and_core():
    for name in axiom_names():
        f = expand_macros(axiom(name))
        assert expand_macros(f) == f
        for node in S.walk(f):
            assert not isinstance(node, S.DEFINED_ATOM_TYPES), (name, type(node))
            if isinstance(node, (S.ForallIn, S.ExistsIn)):
                assert node.rel in ("IOb", "Ph", "E")


def test_expand_wl_and_ether_examples():
    # x in wl_k(b) is literally the W atom
    k, b = S.bvar("k"), S.bvar("b")
    coords = tuple(S.lit(i) for i in range(4))
    f = S.W(k, b, coords)
    assert expand_macros(f) == f
    # Ether(e) expands to inertial observer + positive isotropic light speed
    g = expand_macros(S.EtherAtom(S.bvar("e")))
    assert isinstance(g, S.And)
    assert isinstance(g.args[0], S.IOb)
    assert isinstance(g.args[1], S.Exists)
    # speed_k(b) = v carries the nonnegativity guard
    sp = expand_macros(S.SpeedEq(k, b, S.qvar("v")))
    assert isinstance(sp.args[0], S.Le)


def test_expanded_catalog_still_prints_and_parses():
    for name in ("AxPh_c", "AxTriv", "AxPrimitiveEther", "AxNoFTL"):
        f = expand_macros(axiom(name))
        text = print_formula(f)
        assert alpha_equal(parse(text), f)


def test_full_map_expansion_has_no_map_atoms():
    f = axiom("AxSelf")
    from kinlog.translate import tr

    g = expand_macros(tr(f), expand_maps=True)
    for node in S.walk(g):
        assert not isinstance(node, (S.MapEq, S.MapApp))

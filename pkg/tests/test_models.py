from fractions import Fraction

import pytest

from kinlog.logic import axiom
import kinlog.logic.syntax as S
from kinlog.models import (
    FTLObserverPresent,
    InvalidSpec,
    Evaluator,
    build_model,
    eval_axiom,
    recheck,
    standard_spec,
    transform_model,
)
from kinlog.transforms import classify


def minimal_ck_spec():
    return {
        "theory": "CK",
        "c": "1",
        "bodies": [
            {"kind": "observer", "name": "e0", "velocity": ["0", "0", "0"], "ether": True},
            {"kind": "photon", "name": "ph_x", "velocity": ["1", "0", "0"]},
            {"kind": "photon", "name": "ph_y", "velocity": ["0", "1", "0"]},
        ],
    }


def test_build_minimal_ck():
    m = build_model(minimal_ck_spec())
    assert m.theory == "CK"
    assert [b.name for b in m.ether_members()] == ["e0"]
    assert len(m.photons()) == 2


def test_build_rejects_ftl_in_stl():
    spec = {
        "theory": "CK-STL",
        "c": "1",
        "bodies": [
            {"kind": "observer", "name": "fast", "velocity": ["2", "0", "0"]},
        ],
    }
    with pytest.raises(InvalidSpec):
        build_model(spec)


def test_build_rejects_bad_ether_declaration():
    spec = {
        "theory": "SR-e",
        "c": "1",
        "bodies": [
            {"kind": "observer", "name": "em", "velocity": ["3/5", "0", "0"], "ether": True},
        ],
    }
    with pytest.raises(InvalidSpec):
        build_model(spec)


def test_build_rejects_offspeed_photon():
    spec = minimal_ck_spec()
    spec["bodies"].append({"kind": "photon", "velocity": ["1", "1", "0"]})
    with pytest.raises(InvalidSpec):
        build_model(spec)


def test_worldview_transforms_classify():
    ck = build_model(standard_spec("CK"))
    obs = ck.observers()
    assert len(obs) >= 7
    for k in obs[:5]:
        for h in obs[:5]:
            w = ck.worldview_transform(k, h)
            assert classify(w, ck.c).galilean
    sr = build_model(standard_spec("SR"))
    for k in sr.observers()[:5]:
        for h in sr.observers()[:5]:
            w = sr.worldview_transform(k, h)
            assert classify(w, sr.c).poincare
    assert sr.worldview_transform(obs[0].name, obs[0].name) == type(w).identity()


def test_transform_model_matches_direct_build():
    ck = build_model(standard_spec("CK-STL"))
    sr = transform_model(ck)
    assert sr.theory == "SR-e"
    direct = build_model({**standard_spec("CK-STL"), "theory": "SR-e"})
    for b in sr.observers():
        assert b.placement == direct.bodies[b.name].placement
    ck_full = build_model(standard_spec("CK"))
    with pytest.raises(FTLObserverPresent):
        transform_model(ck_full)


def test_ether_members_mutually_stationary():
    ck = build_model(standard_spec("CK"))
    ethers = ck.ether_members()
    assert len(ethers) >= 2
    for e in ethers:
        for e2 in ethers:
            v = ck.velocity_of(e, e2)
            assert v == (0, 0, 0)
    # ether velocity is the same whatever ether member measures it
    for k in ck.observers():
        vels = {ck.velocity_of(k, e) for e in ethers}
        assert len(vels) == 1
    # speed of an observer is shared by all ether observers
    from kinlog.geometry import norm_sq3

    for k in ck.observers():
        speeds = {norm_sq3(ck.velocity_of(e, k)) for e in ethers}
        assert len(speeds) == 1


def test_sees_and_velocity():
    ck = build_model(standard_spec("CK"))
    k = ck.bodies["k1"]
    assert ck.sees(k, k, (5, 0, 0, 0))
    assert not ck.sees(k, k, (5, 1, 0, 0))
    ph = ck.bodies["ph1"]
    p0, v = ph.line
    assert ck.sees("e0", ph, (p0[0] + 2, p0[1] + 2 * v[0], p0[2] + 2 * v[1], p0[3] + 2 * v[2]))
    drift = ck.velocity_of(k, "e0")
    assert drift is not None and drift != (0, 0, 0)


def test_eval_trivial_formula():
    ck = build_model(minimal_ck_spec())
    x = S.qvar("x")
    res = Evaluator(ck, seed=1, budget=200).check(S.Forall(x, S.Eq(x, x)))
    assert res.verdict == "holds-on-samples"
    res = Evaluator(ck, seed=1, budget=0).check(S.Forall(x, S.Eq(x, x)))
    assert res.verdict == "unknown"


def test_simple_axioms_hold_on_ck():
    ck = build_model(standard_spec("CK"))
    for name in ("AxEField", "AxSelf", "AxAbsTime", "AxEther", "AxSymD", "AxLine", "AxNoAcc"):
        res = eval_axiom(ck, name, "orig", seed=2, budget=3000)
        assert res.verdict == "holds-on-samples", (name, res.verdict, res.counterexample)


def test_thexp_and_triv_hold_on_ck():
    ck = build_model(standard_spec("CK"))
    for name in ("AxThExp+", "AxTriv", "AxEv"):
        res = eval_axiom(ck, name, "orig", seed=2, budget=2500)
        assert res.verdict == "holds-on-samples", (name, res.verdict, res.counterexample)


def test_sr_axioms_hold_on_sr():
    sr = build_model(standard_spec("SR"))
    for name in ("AxSelf", "AxPh_c", "AxEv", "AxSymD", "AxThExp"):
        res = eval_axiom(sr, name, "orig", seed=2, budget=3000)
        assert res.verdict == "holds-on-samples", (name, res.verdict, res.counterexample)


def test_negative_control_abstime_fails_on_sr():
    sr = build_model(standard_spec("SR"))
    res = eval_axiom(sr, "AxAbsTime", "orig", seed=2, budget=4000)
    assert res.verdict == "fails"
    assert res.counterexample
    assert recheck(sr, res)


def test_negative_control_lightspeed_fails_on_ck():
    ck = build_model(standard_spec("CK"))
    res = eval_axiom(ck, "AxPh_c", "orig", seed=2, budget=4000)
    assert res.verdict == "fails"
    assert recheck(ck, res)


def test_noftl_holds_on_stl_fails_with_ftl():
    stl = build_model(standard_spec("CK-STL"))
    res = eval_axiom(stl, "AxNoFTL", "orig", seed=2, budget=2000)
    assert res.verdict == "holds-on-samples"
    ck = build_model(standard_spec("CK"))
    res = eval_axiom(ck, "AxNoFTL", "orig", seed=2, budget=2000)
    assert res.verdict == "fails"
    assert recheck(ck, res)


def test_primitive_ether_holds_on_sre():
    sre = build_model(standard_spec("SR-e"))
    res = eval_axiom(sre, "AxPrimitiveEther", "orig", seed=2, budget=2500)
    assert res.verdict == "holds-on-samples", (res.verdict, res.counterexample)

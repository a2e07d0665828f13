import json

import pytest

import alambda


def test_canon():
    assert alambda.canon("λx.0") == "0"
    assert alambda.canon("2.x + 3.x") == "5.x"
    assert alambda.canon("x") == "x"
    assert alambda.canon("(λx.(x)x)(y+z)") == "(λx.(x)x)(y + z)"


def test_canon_semirings():
    assert alambda.canon("1/2.x + 1/2.x", semiring="rat+") == "x"
    assert alambda.canon("x + x", semiring="bool") == "x"
    assert alambda.canon("x + -1.x", semiring="int") == "0"


def test_parse_error():
    with pytest.raises(ValueError):
        alambda.canon("(x")
    with pytest.raises(ValueError):
        alambda.canon("1/2.x", semiring="nat")


def test_support_and_extraction():
    assert alambda.support("(λx.(x)x)(y+z)") == ["(λx.(x)x)(y + z)"]
    assert alambda.lambda_support("(λx.(x)x)(y+z)") == ["(λx.(x)x)y", "(λx.(x)x)z"]
    assert alambda.as_pure("y + z") is None
    assert alambda.as_pure("(λx.x)y") == "(λx.x)y"


def test_beta_reducts():
    assert alambda.beta_reducts("(λx.x)y") == ["y"]
    assert alambda.beta_reducts("λx.x") == []


def test_reduce_trace_record():
    rec = json.loads(alambda.reduce("(λx.(x)x)(y+z)", steps=1))
    assert rec["v"] == 1
    assert rec["kind"] == "alg-trace"
    assert rec["ring"] == "nat"
    assert len(rec["steps"]) == 1
    assert rec["steps"][0]["rendering"] == "(y)(y + z) + (z)(y + z)"


def test_prove_check_roundtrip():
    derivation = alambda.prove("(λx.(x)x)y", "(y)y", fuel=100)
    assert derivation is not None
    res = alambda.check(derivation)
    assert res["valid"]
    assert res["conclusion"] == "(λx.(x)x)y ||- (y)y"


def test_check_rejects_tampering():
    derivation = alambda.prove("(λx.x)y", "y", fuel=100)
    rec = json.loads(derivation)
    rec["subject"] = {"k": "v", "n": "z"}
    res = alambda.check(json.dumps(rec))
    assert not res["valid"]
    assert res["reason"]


def test_conserve():
    trace = alambda.reduce("(λx.(x)x)((λy.y)z)", steps=3)
    cert = alambda.conserve(trace)
    assert cert["source"] == "(λx.(x)x)(λx.x)z"
    assert cert["target"] == "(z)z"
    assert cert["replays"]


def test_equiv():
    ev = alambda.equiv("(λx.x)y", "y")
    assert ev is not None
    assert ev["parallel_target"] == "y"
    assert alambda.equiv("y", "z", fuel=50) is None


def test_demos():
    for name in ("claim21", "subars", "inconsistency"):
        report = alambda.demo(name)
        assert report["ok"], report["text"]
    claim = alambda.demo("claim21")
    assert "(λx.(x)x)y" in claim["text"]
    assert "(λx.(x)x)z" in claim["text"]

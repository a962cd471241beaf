import pytest

from expertaudit.errors import InvalidModel
from expertaudit.scm import enumerate_joint, m1, m2
from expertaudit.scm.spec_file import dump_model, eval_arith, load_bundled, load_model, parse_model


def _same_joint(a, b):
    ja, jb = enumerate_joint(a).table, enumerate_joint(b).table
    return ja.keys() == jb.keys() and all(abs(ja[k] - jb[k]) < 1e-15 for k in ja)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.7])
def test_bundled_match_factories(p):
    assert _same_joint(load_bundled("m1", {"p": p}), m1(p))
    assert _same_joint(load_bundled("M2", {"p": p}), m2(p))


@pytest.mark.parametrize("name", ["m1", "m2", "expert", "null"])
def test_dump_roundtrip(name):
    model = load_bundled(name)
    again = parse_model(dump_model(model))
    assert again.variables == model.variables
    assert dict(again.parents) == dict(model.parents)
    assert _same_joint(again, model)


def test_declared_parents_survive_roundtrip(tmp_path):
    text = """[model]
variables = A, Y
[noise]
N_A = 0.5
N_Y = 0.25
[parents]
Y = A
[equations]
A = N_A
Y = N_Y
"""
    path = tmp_path / "unused.scm"
    path.write_text(text)
    model = load_model(path)
    assert model.parents["Y"] == ("A",)
    assert parse_model(dump_model(model)).parents["Y"] == ("A",)


def test_eval_arith():
    assert eval_arith("(p**2 - p - 1) / (p - 2)", {"p": 0.5}) == pytest.approx(5 / 6)
    assert eval_arith("-p + 1", {"p": 0.25}) == 0.75
    with pytest.raises(InvalidModel):
        eval_arith("__import__('os')", {})
    with pytest.raises(InvalidModel):
        eval_arith("q", {"p": 1})
    with pytest.raises(InvalidModel):
        eval_arith("1 / (p - p)", {"p": 1})


@pytest.mark.parametrize("text,fragment", [
    ("[model]\nvariables = A\n", "equations"),
    ("[model]\nvariables = A\n[equations]\nA = N_A\n[noise]\nN_A = 1.5\n", "noise"),
    ("[model]\nvariables = A\n[bogus]\n[equations]\nA = 0\n", "unknown section"),
    ("[model]\ncolour = red\n[equations]\nA = 0\n", "unknown key"),
    ("[model]\nvariables = A\n[equations]\nA = min(B)\n", None),
    ("not an ini file", "malformed"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(InvalidModel, match=fragment):
        parse_model(text)


def test_undeclared_param_override():
    with pytest.raises(InvalidModel, match="not declared"):
        load_bundled("m1", {"q": 0.3})


def test_unknown_bundled():
    with pytest.raises(InvalidModel):
        load_bundled("nope")

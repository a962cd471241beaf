import pytest

from expertaudit.errors import InvalidModel, UnknownVariable
from expertaudit.scm import (Const, DoAssignment, Max, Min, Noise, Not, Ref, ScmSpec, Table,
                             enumerate_joint, intervene, m1, parse_expr, to_text)


def test_parse_expression_forms():
    assert parse_expr("min(A, max(U, N_Y))") == Min((Ref("A"), Max((Ref("U"), Noise("Y")))))
    assert parse_expr("1 - A") == Not(Ref("A"))
    assert parse_expr("not(A)") == Not(Ref("A"))
    assert parse_expr("0") == Const(0)
    t = parse_expr("table(A, N_B: 0110)")
    assert t == Table((Ref("A"), Noise("B")), (0, 1, 1, 0))


@pytest.mark.parametrize("text", ["min(A", "max()", "A B", "table(A: 010)", "2", "min(A,)"])
def test_parse_rejects_malformed(text):
    with pytest.raises(InvalidModel):
        parse_expr(text)


def test_roundtrip_text():
    for s in ["min(A, max(U, N_Y))", "1 - max(A, N_B)", "table(A, N_B: 0110)"]:
        e = parse_expr(s)
        assert parse_expr(to_text(e)) == e


def test_cycle_rejected():
    with pytest.raises(InvalidModel, match="cycl"):
        ScmSpec(("A", "B"), {"A": Ref("B"), "B": Ref("A")})


def test_foreign_noise_rejected():
    with pytest.raises(InvalidModel):
        ScmSpec(("A", "B"), {"A": Noise("B"), "B": Noise("B")}, {"B": 0.5})


def test_noise_bounds():
    with pytest.raises(InvalidModel):
        ScmSpec(("A",), {"A": Noise("A")}, {"A": 1.0})
    with pytest.raises(InvalidModel):
        ScmSpec(("A",), {"A": Noise("A")}, {})


def test_undeclared_reference():
    with pytest.raises((InvalidModel, UnknownVariable)):
        ScmSpec(("A",), {"A": Ref("Z")})


def test_declared_unused_parent_is_kept():
    m = ScmSpec(("A", "Y"), {"A": Noise("A"), "Y": Noise("Y")}, {"A": 0.5, "Y": 0.5}, {"Y": ("A",)})
    assert m.parents["Y"] == ("A",)
    assert ("A", "Y") in m.edges()


def test_intervene_mutilates():
    m = intervene(m1(0.5), {"A": 1})
    assert m.parents["A"] == ()
    assert "A" not in m.noise
    assert m.equations["A"] == Const(1)
    assert enumerate_joint(m).probability({"Y": 1}) == pytest.approx(0.75, abs=1e-12)


def test_intervene_unknown_variable():
    with pytest.raises(UnknownVariable):
        intervene(m1(), {"Q": 1})


def test_do_assignment_duplicates_and_values():
    with pytest.raises(InvalidModel):
        DoAssignment.from_pairs([("A", 1), ("A", 0)])
    with pytest.raises(InvalidModel):
        DoAssignment({"A": 2})


def test_models_are_immutable():
    m = m1()
    with pytest.raises(TypeError):
        m.equations["A"] = Const(0)

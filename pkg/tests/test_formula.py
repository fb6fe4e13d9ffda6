import pytest
from hypothesis import given, settings, strategies as st

from qsetlab import formula as fm
from qsetlab.quniverse import hf


def test_parse_basic():
    f = fm.parse("x1 sub x2 <-> !(E x in x1 . !(x in x2))")
    assert isinstance(f, fm.Iff)
    assert isinstance(f.left, fm.Subseteq)
    assert fm.constants_of(f) == {"x1", "x2"}
    assert isinstance(f.right.body, fm.ExistsIn)
    assert isinstance(f.right.body.body.body.left, fm.Var)


def test_precedence_and_assoc():
    f = fm.parse("a in b -> c in d -> e in f")
    assert isinstance(f, fm.Imp) and isinstance(f.right, fm.Imp)
    g = fm.parse("a in b | c in d & e in f")
    assert isinstance(g, fm.Or) and isinstance(g.right, fm.And)
    assert fm.to_text(fm.parse("(a in b -> c in d) -> e in f")) == "(a in b -> c in d) -> e in f"


@pytest.mark.parametrize("text", [
    "x1 = x1",
    "!(x1 in x2 & !(x1 in x2))",
    "A y in x1 . E z in x1 . z = y",
    "(x1 sub x2 & x2 sub x3) -> x1 sub x3",
    "x1 in x2 <-> !!(x1 in x2)",
    "A y . y in x1",
])
def test_roundtrip(text):
    f = fm.parse(text)
    assert fm.parse(fm.to_text(f)) == f


def test_errors_have_positions():
    with pytest.raises(fm.FormulaSyntaxError) as e:
        fm.parse("x1 in\n  & x2")
    assert (e.value.line, e.value.col) == (2, 3)
    with pytest.raises(fm.FormulaSyntaxError):
        fm.parse("A x in u . A x in u . x = x")
    with pytest.raises(fm.UnboundVariableError):
        fm.parse("x in u", constants={"u"})
    with pytest.raises(fm.FormulaSyntaxError):
        fm.parse("x # y")


def test_delta0():
    assert fm.is_delta0(fm.parse("A y in x1 . y sub x1"))
    assert not fm.is_delta0(fm.parse("E y . y in x1"))


def test_desugar_fresh_names():
    f = fm.desugar(fm.parse("_z0 sub x1"))
    assert isinstance(f, fm.ForallIn) and f.var != "_z0"
    g = fm.desugar(fm.parse("x1 in x2 | E y in x1 . y = x2"), primitive_basis=True)
    assert not any(isinstance(n, (fm.Or, fm.ExistsIn)) for n in fm.walk(g))


def test_classical_satisfaction():
    env = {"x1": hf(1), "x2": hf(2)}
    assert fm.classical_satisfaction(fm.parse("x1 in x2 & x1 sub x2"), env)
    assert not fm.classical_satisfaction(fm.parse("x2 in x1"), env)
    assert fm.classical_satisfaction(fm.parse("x1 in x2 <-> !!(x1 in x2)"), env)


names = st.sampled_from(["a", "b", "c"])


def _formulas():
    atom = st.builds(lambda op, l, r: f"{l} {op} {r}", st.sampled_from(["=", "in", "sub"]),
                     names, names)
    return st.recursive(atom, lambda sub: st.one_of(
        st.builds(lambda x: f"!({x})", sub),
        st.builds(lambda x, op, y: f"({x}) {op} ({y})", sub,
                  st.sampled_from(["&", "|", "->", "<->"]), sub)), max_leaves=6)


@settings(max_examples=100, deadline=None)
@given(_formulas())
def test_roundtrip_property(text):
    f = fm.parse(text)
    assert fm.parse(fm.to_text(f)) == f
    assert fm.is_delta0(f)

import pytest

from stt.checker import Definition, Import, Postulate, ShapeDef
from stt.diagnostics import CheckError
from stt.lexer import tokenize
from stt.parser import parse_expr, parse_module, parse_sequent, parse_tope
from stt.syntax import (
    And, App, BOT, CPair, CVar, Const, Eq, ExtType, Fst, INTERVAL, Lam, Leq, ONE, Or, PairE,
    Pi, Prod, Proj1, Proj2, Sigma, Snd, TOP, Universe, Var, ZERO,
)


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)[:-1]]


def test_tokens_and_spans():
    toks = tokenize("def id-arr :=\n  \\t -> x -- trailing comment", "f.stt")
    assert [t.text for t in toks] == ["def", "id-arr", ":=", "\\", "t", "->", "x", ""]
    lam = toks[3]
    assert (lam.span.file, lam.span.line, lam.span.col) == ("f.stt", 2, 3)
    assert toks[-1].kind == "eof"


def test_hyphenated_names_and_arrows():
    assert kinds("a-b -> c") == [("ident", "a-b"), ("sym", "->"), ("ident", "c")]
    assert kinds("x->y") == [("ident", "x"), ("sym", "->"), ("ident", "y")]


def test_unicode_aliases():
    assert kinds("t ≤ s ∧ s ≡ 1 ∨ ⊥") == kinds("t <= s /\\ s === 1 \\/ BOT")
    assert kinds("λx → x") == kinds("\\x -> x")
    assert kinds("{t : 𝟚 × 𝟚}") == kinds("{t : 2 * 2}")


def test_lexer_errors():
    with pytest.raises(CheckError) as err:
        tokenize('import "open')
    assert err.value.code == "E0001"
    with pytest.raises(CheckError):
        tokenize("a ? b")


def test_application_and_arrows():
    e = parse_expr("f a b", ["f", "a", "b"])
    assert e == App(App(Var(2), Var(1)), Var(0))
    e = parse_expr("A -> A -> A", ["A"])
    assert isinstance(e, Pi) and isinstance(e.cod, Pi)
    e = parse_expr("(x : A) * x = x", ["A"])
    assert isinstance(e, Sigma)
    assert parse_expr("U") == Universe()
    assert parse_expr("later", []) == Const("later")


def test_lambda_patterns_bind_one_variable():
    e = parse_expr("\\(t, s) -> h (t, s)", ["h"])
    assert isinstance(e, Lam) and e.pat == ("t", "s")
    body = e.body
    assert body.fn == Var(1)
    assert body.arg == PairE(Fst(Var(0)), Snd(Var(0)))


def test_topes_and_precedence():
    t = parse_tope("t <= s /\\ s === 1 \\/ t === 0", ["t", "s"])
    assert t == Or(And(Leq(CVar(1), CVar(0)), Eq(CVar(0), ONE)), Eq(CVar(1), ZERO))
    assert parse_tope("TOP") == TOP and parse_tope("BOT") == BOT


def test_chained_inequalities():
    t = parse_tope("t3 <= t2 <= t1", ["t1", "t2", "t3"])
    assert t == And(Leq(CVar(0), CVar(1)), Leq(CVar(1), CVar(2)))


def test_shape_macros_expand():
    shapes = {}
    mod = parse_module("def D2 := {(t1, t2) : 2*2 | t2 <= t1}\n"
                       "postulate P : (A : U) -> ({(t1, t2) : D2} -> A) -> U", shapes=shapes)
    assert not mod.diagnostics
    assert isinstance(mod.decls[0], ShapeDef)
    ty = mod.decls[1].type
    inner = ty.cod.dom
    assert isinstance(inner, ExtType)
    assert inner.cube == Prod(INTERVAL, INTERVAL)
    assert inner.shape == Leq(Proj2(CVar(0)), Proj1(CVar(0)))


def test_shape_as_tope_atom():
    shapes = {}
    parse_module("def B := {t : 2 | t === 0 \\/ t === 1}", shapes=shapes)
    t = parse_tope("B s", ["s"], shapes)
    assert t == Or(Eq(CVar(0), ZERO), Eq(CVar(0), ONE))


def test_declarations():
    mod = parse_module('import "x.stt"\n'
                       "postulate A0 : U\n"
                       "def idU (A : U) : A -> A := \\x -> x\n",
                       on_import=lambda rel, span: {})
    assert [type(d) for d in mod.decls] == [Import, Postulate, Definition]
    assert mod.imports == ["x.stt"]
    d = mod.decls[2]
    assert d.name == "idU" and isinstance(d.type, Pi) and isinstance(d.body, Lam)


def test_syntax_errors_are_diagnostics():
    mod = parse_module("def bad (A : U) : U := {t : 2 -> A", "bad.stt")
    [d] = mod.diagnostics
    assert d.code == "E0001" and d.span.line == 1 and "expected '}'" in d.message


def test_unbound_name_in_tope():
    with pytest.raises(CheckError) as err:
        parse_tope("t <= q", ["t"])
    assert err.value.code == "E0002"


def test_sequents():
    ctx, hyps, goal = parse_sequent("x:2, y:2 | x<=y, y<=x |- x===y")
    assert ctx == [("x", INTERVAL), ("y", INTERVAL)]
    assert hyps == [Leq(CVar(1), CVar(0)), Leq(CVar(0), CVar(1))]
    assert goal == Eq(CVar(1), CVar(0))
    ctx, hyps, goal = parse_sequent("p : 2*2 |- p === (0, 1)")
    assert hyps == [] and goal == Eq(CVar(0), CPair(ZERO, ONE))
    assert parse_sequent("|- 0 <= 1") == ([], [], Leq(ZERO, ONE))
    with pytest.raises(CheckError):
        parse_sequent("x:2 | x <= 1")

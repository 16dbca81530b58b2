import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stt.loader import Workspace
from stt.parser import parse_expr, parse_module, parse_tope
from stt.printer import Printer, print_module, show_cube, show_shape
from stt.shapes import simplex
from stt.syntax import INTERVAL, Prod, UNIT, alpha_equal

from conftest import corpus_files, reparse_printed
from termgen import CONTEXT, CUBE_VARS, function, term, variant

NAMES = ["A", "B", "a", "b", "f", "g", "h", "x", "y"]


def show(text, names=NAMES):
    return Printer(names).expr(parse_expr(text, names))


def test_degenerate_extension_prints_without_brackets():
    # an empty boundary is not printed, and neither is a full shape
    assert show("<{t : 2} -> A [BOT |-> recBOT]>") == "{t : 2} -> A"
    assert show("<{t : 2 | TOP} -> A [t === 0 |-> a]>") == "<{t : 2} -> A [t === 0 |-> a]>"
    assert show("{(t, s) : 2*2 | s <= t} -> A") == "{(t, s) : 2*2 | s <= t} -> A"
    assert parse_expr("{t : 2} -> A", NAMES) == parse_expr("<{t : 2 | TOP} -> A [BOT |-> recBOT]>", NAMES)


def test_precedence():
    for text in ["A -> A -> A", "(A -> A) -> A", "f (g a) = b", "x =_{A} y", "f a b",
                 "A * A -> A", "(A -> A) * A", "(z : A) -> f z = a", "\\z -> f (f z)",
                 "fst (snd x)", "J(A, a, \\y' q -> A, refl, b, x)"]:
        assert show(text) == text


def test_boundary_clauses():
    text = "<{t : 2} -> A [t === 0 |-> a, t === 1 |-> b]>"
    assert show(text) == text


def test_recor():
    text = "\\(t, s) -> recOR(t <= s |-> h s, s <= t |-> h t)"
    assert show(text) == text


def test_shadowed_names_are_renamed():
    assert show("(x : A) * B x") == "(x1 : A) * B x1"
    assert show("\\z -> \\z -> z") == "\\z z1 -> z1"


def test_cubes_and_shapes():
    assert show_cube(Prod(INTERVAL, Prod(INTERVAL, INTERVAL))) == "2*2*2"
    assert show_cube(Prod(Prod(INTERVAL, INTERVAL), INTERVAL)) == "(2*2)*2"
    assert show_cube(UNIT) == "1"
    assert show_shape(simplex(3)) == "{(t1, t2, t3) : 2*2*2 | t3 <= t2 /\\ t2 <= t1}"


def test_topes():
    names = ["t", "s"]
    for text in ["t <= s /\\ s === 1 \\/ t === 0", "(t <= s \\/ s === 1) /\\ t === 0", "TOP", "BOT"]:
        assert Printer(names).tope(parse_tope(text, names)) == text


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.split("corpus/")[-1])
def test_corpus_round_trip(path):
    ws = Workspace()
    loaded = ws.load(path)
    again = reparse_printed(ws, loaded)
    assert not again.diagnostics
    assert again.decls == loaded.module.decls


def test_printing_is_stable():
    ws = Workspace()
    loaded = ws.load(corpus_files()[0])
    once = print_module(loaded.module)
    twice = print_module(reparse_printed(ws, loaded))
    assert once == twice


# -- generated terms ------------------------------------------------------------

GEN_NAMES = [n for n, _ in CONTEXT] + CUBE_VARS


@given(st.randoms(use_true_random=False))
def test_generated_terms_round_trip(rng):
    for text in (term(rng), variant(rng, term(rng, 1)), function(rng)):
        e = parse_expr(text, GEN_NAMES)
        printed = Printer(GEN_NAMES).expr(e)
        assert alpha_equal(parse_expr(printed, GEN_NAMES), e)


@given(st.randoms(use_true_random=False))
def test_generated_modules_round_trip(rng):
    lines = ["postulate A : U", "postulate a : A"]
    for i in range(rng.randint(1, 4)):
        lines.append(f"def d{i} (f : A -> A) (x : A) : A := {_closed(rng)}")
    mod = parse_module("\n".join(lines))
    assert not mod.diagnostics
    again = parse_module(print_module(mod))
    assert again.decls == mod.decls


def _closed(rng):
    atoms = ["a", "x", "f x", "f (f a)"]
    e = rng.choice(atoms)
    for _ in range(rng.randint(0, 3)):
        e = rng.choice([f"f ({e})", f"(\\z -> f z) ({e})", f"fst ({e}, {rng.choice(atoms)})"])
    return e


def test_random_module_generator_varies():
    assert len({_closed(random.Random(i)) for i in range(20)}) > 5

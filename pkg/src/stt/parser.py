"""Recursive-descent parser producing pre-core syntax.

Names are resolved while parsing: bound names become de Bruijn variables
(projections of the binder when it was bound by a tuple pattern), other
names become constants, and shape names are expanded in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .checker import Definition, Import, Postulate, ShapeDef
from .diagnostics import CheckError
from .lexer import Token, tokenize
from .syntax import (
    And, App, BOT, CPair, CVar, Const, Eq, ExtType, Fst, Id, INTERVAL, J, Lam, Leq, ONE,
    Or, PairE, Pi, Prod, Proj1, Proj2, Refl, RecBot, RecOr, Shape, Sigma, Snd, STAR,
    TOP, UNIT, Universe, Var, ZERO, map_vars, nest_pattern, pattern_label, shift,
)

DECL_KEYWORDS = ("def", "postulate", "import")


@dataclass
class SourceModule:
    path: str
    decls: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def imports(self) -> list:
        return [d.path for d in self.decls if isinstance(d, Import)]


def _find(pat, name, path=()):
    if isinstance(pat, tuple):
        return _find(pat[0], name, path + (1,)) or _find(pat[1], name, path + (2,))
    return path if pat == name else None


def expand_shape(shape: Shape, point):
    """The tope of ``shape`` at ``point`` (a cube term in the current scope)."""

    def fn(v, depth):
        if v.index == depth:
            return shift(point, depth)
        return v

    return map_vars(shape.tope, fn)


class Parser:
    def __init__(self, text: str, file: str = "<input>", shapes: Optional[dict] = None,
                 on_import: Optional[Callable] = None):
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0
        self.scope: list = []
        self.shapes = shapes if shapes is not None else {}
        self.on_import = on_import

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str, kind: Optional[str] = None) -> bool:
        t = self.tok
        return t.text == text and t.kind != "string" and (kind is None or t.kind == kind)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected '{text}'")
        return self.advance()

    def error(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else f"'{t.text}'"
        raise CheckError("SyntaxError", f"{message}, found {found}", t.span)

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error("expected a name")
        return self.advance()

    # -- scope -------------------------------------------------------------

    def bind(self, pat):
        self.scope.append(pat)

    def unbind(self, k: int = 1):
        del self.scope[len(self.scope) - k:]

    def lookup(self, name: str):
        for i, pat in enumerate(reversed(self.scope)):
            path = _find(pat, name)
            if path is not None:
                return i, path
        return None

    def resolve(self, tok: Token, cube: bool):
        found = self.lookup(tok.text)
        if found is None:
            if cube:
                raise CheckError("UnboundVariable", f"unbound cube variable {tok.text}", tok.span)
            return Const(tok.text, tok.span)
        index, path = found
        label = self.scope[-1 - index]
        if cube:
            term = CVar(index, pattern_label(label))
            for step in path:
                term = Proj1(term) if step == 1 else Proj2(term)
            return term
        term = Var(index, pattern_label(label), tok.span)
        for step in path:
            term = Fst(term, tok.span) if step == 1 else Snd(term, tok.span)
        return term

    # -- modules -----------------------------------------------------------

    def module(self) -> SourceModule:
        mod = SourceModule(self.file)
        while self.tok.kind != "eof":
            start = self.pos
            try:
                mod.decls.append(self.declaration())
            except CheckError as err:
                mod.diagnostics.append(err.diagnostic())
                self.scope.clear()
                self.resync(start)
        return mod

    def resync(self, start: int):
        self.pos = max(self.pos, start + 1)
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "keyword" and t.text in DECL_KEYWORDS and t.span.col == 1:
                return
            self.advance()

    def declaration(self):
        t = self.tok
        if self.accept("import"):
            if self.tok.kind != "string":
                self.error("expected a quoted path")
            path = self.advance().text
            if self.on_import is not None:
                self.shapes.update(self.on_import(path, t.span) or {})
            return Import(path, t.span)
        if self.accept("postulate"):
            name = self.ident()
            ty = self.postulate_type()
            return Postulate(name.text, ty, name.span)
        if self.accept("def"):
            name = self.ident()
            if self.accept(":="):
                shape = self.shape_literal()
                if name.text in self.shapes:
                    raise CheckError("DuplicateName", f"{name.text} is already defined", name.span)
                self.shapes[name.text] = shape
                return ShapeDef(name.text, shape, name.span)
            ty, body = self.definition_rest()
            return Definition(name.text, ty, body, name.span)
        self.error("expected a declaration")

    def telescope_groups(self):
        """Parse (x y : A) groups, binding as we go; returns [(name, type, span)]."""
        out = []
        while self.at("(") and self._is_telescope():
            self.advance()
            names = []
            while self.tok.kind == "ident":
                names.append(self.advance())
            self.expect(":")
            ty = self.expr()
            self.expect(")")
            for k, n in enumerate(names):
                out.append((n.text, shift(ty, k), n.span))
                self.bind(n.text)
        return out

    def _is_telescope(self) -> bool:
        k = 1
        while self.peek(k).kind == "ident":
            k += 1
        return k > 1 and self.peek(k).text == ":" and self.peek(k).kind == "sym"

    def postulate_type(self):
        groups = self.telescope_groups()
        self.expect(":")
        ty = self.expr()
        self.unbind(len(groups))
        for name, dom, span in reversed(groups):
            ty = Pi(dom, ty, name, span)
        return ty

    def definition_rest(self):
        groups = self.telescope_groups()
        self.expect(":")
        ty = self.expr()
        self.expect(":=")
        body = self.expr()
        self.unbind(len(groups))
        for name, dom, span in reversed(groups):
            ty = Pi(dom, ty, name, span)
            body = Lam(body, name, span)
        return ty, body

    # -- shapes and cubes --------------------------------------------------

    def pattern(self):
        if self.at("("):
            self.advance()
            parts = [self.pattern()]
            while self.accept(","):
                parts.append(self.pattern())
            self.expect(")")
            if len(parts) == 1:
                return parts[0]
            return nest_pattern(parts)
        return self.ident().text

    def cube(self):
        left = self.cube_atom()
        if self.accept("*"):
            return Prod(left, self.cube())
        return left

    def cube_atom(self):
        t = self.tok
        if t.kind == "num" and t.text in ("1", "2"):
            self.advance()
            return UNIT if t.text == "1" else INTERVAL
        if self.accept("("):
            c = self.cube()
            self.expect(")")
            return c
        self.error("expected a cube")

    def shape_binder(self):
        """{pat : cube | tope} or {pat : ShapeName | tope}; leaves pat bound."""
        self.expect("{")
        pat = self.pattern()
        self.expect(":")
        self.bind(pat)
        if self.tok.kind == "ident" and self.tok.text in self.shapes:
            shape = self.shapes[self.advance().text]
            cube, tope = shape.cube, shape.tope
            if self.accept("|"):
                tope = And(tope, self.tope())
        else:
            cube = self.cube()
            tope = self.tope() if self.accept("|") else TOP
        self.expect("}")
        return pat, cube, tope

    def shape_literal(self) -> Shape:
        pat, cube, tope = self.shape_binder()
        self.unbind()
        return Shape(cube, tope, pat)

    # -- topes -------------------------------------------------------------

    def tope(self):
        left = self.tope_and()
        if self.accept("\\/"):
            return Or(left, self.tope())
        return left

    def tope_and(self):
        left = self.tope_atom()
        if self.accept("/\\"):
            return And(left, self.tope_and())
        return left

    def tope_atom(self):
        if self.accept("TOP"):
            return TOP
        if self.accept("BOT"):
            return BOT
        if self.at("("):
            save = self.pos
            try:
                self.advance()
                inner = self.tope()
                self.expect(")")
                if not self.at("<=") and not self.at("==="):
                    return inner
            except CheckError:
                pass
            self.pos = save
        t = self.tok
        if t.kind == "ident" and t.text in self.shapes and self.lookup(t.text) is None:
            self.advance()
            return expand_shape(self.shapes[t.text], self.cube_term_atom())
        return self.comparison()

    def comparison(self):
        terms = [self.cube_term()]
        ops = []
        while self.at("<=") or self.at("==="):
            ops.append(self.advance().text)
            terms.append(self.cube_term())
        if not ops:
            self.error("expected '<=' or '==='")
        parts = [Leq(a, b) if op == "<=" else Eq(a, b) for a, op, b in zip(terms, ops, terms[1:])]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = And(p, out)
        return out

    def cube_term(self):
        if self.accept("fst"):
            return Proj1(self.cube_term_atom())
        if self.accept("snd"):
            return Proj2(self.cube_term_atom())
        return self.cube_term_atom()

    def cube_term_atom(self):
        t = self.tok
        if t.kind == "num" and t.text in ("0", "1"):
            self.advance()
            return ZERO if t.text == "0" else ONE
        if self.accept("star"):
            return STAR
        if t.kind == "ident":
            self.advance()
            return self.resolve(t, cube=True)
        if self.accept("("):
            parts = [self.cube_term()]
            while self.accept(","):
                parts.append(self.cube_term())
            self.expect(")")
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = CPair(p, out)
            return out
        self.error("expected a cube term")

    def clauses(self):
        """tope |-> expr (, tope |-> expr)* as nested (tope, term) pairs."""
        items = []
        while True:
            phi = self.tope()
            self.expect("|->")
            items.append((phi, self.expr()))
            if not self.accept(","):
                return items

    @staticmethod
    def fold_clauses(items, span=None):
        """Boundary tope and section of a clause list."""
        if len(items) == 1:
            return items[0]
        rest_tope, rest_term = Parser.fold_clauses(items[1:], span)
        phi, a = items[0]
        return Or(phi, rest_tope), RecOr(phi, rest_tope, a, rest_term, span)

    # -- expressions -------------------------------------------------------

    def expr(self):
        t = self.tok
        if self.accept("\\"):
            pats = []
            while not self.at("->"):
                pats.append(self.pattern())
                self.bind(pats[-1])
            if not pats:
                self.error("expected a binder")
            self.expect("->")
            body = self.expr()
            self.unbind(len(pats))
            for pat in reversed(pats):
                body = Lam(body, pat, t.span)
            return body
        if self.at("{"):
            pat, cube, shape = self.shape_binder()
            self.expect("->")
            family = self.expr()
            self.unbind()
            return ExtType(cube, shape, BOT, family, RecBot(), pat, t.span)
        if self.at("(") and self._is_telescope():
            groups = self.telescope_groups()
            if self.accept("->"):
                former = Pi
            elif self.accept("*"):
                former = Sigma
            else:
                self.error("expected '->' or '*' after a telescope")
            body = self.expr()
            self.unbind(len(groups))
            for name, dom, span in reversed(groups):
                body = former(dom, body, name, span)
            return body
        left = self.product()
        if self.accept("->"):
            right = self.expr()
            return Pi(left, shift(right, 1), "_", t.span)
        return left

    def product(self):
        t = self.tok
        left = self.equation()
        if self.accept("*"):
            right = self.product()
            return Sigma(left, shift(right, 1), "_", t.span)
        return left

    def equation(self):
        t = self.tok
        left = self.application()
        if self.accept("="):
            return Id(None, left, self.application(), t.span)
        if self.accept("=_{"):
            ty = self.expr()
            self.expect("}")
            return Id(ty, left, self.application(), t.span)
        return left

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("ident", "num"):
            return True
        if t.kind == "keyword":
            return t.text in ("U", "refl", "J", "recOR", "recBOT", "star")
        return t.kind == "sym" and t.text in ("(", "<")

    def application(self):
        t = self.tok
        if self.accept("fst"):
            head = Fst(self.atom(), t.span)
        elif self.accept("snd"):
            head = Snd(self.atom(), t.span)
        else:
            head = self.atom()
        while self.starts_atom():
            head = App(head, self.atom(), t.span)
        return head

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return self.resolve(t, cube=False)
        if t.kind == "num":
            if t.text not in ("0", "1"):
                self.error("only 0 and 1 are terms")
            self.advance()
            return ZERO if t.text == "0" else ONE
        if self.accept("U"):
            return Universe(t.span)
        if self.accept("refl"):
            return Refl(t.span)
        if self.accept("recBOT"):
            return RecBot(t.span)
        if self.accept("star"):
            return STAR
        if self.accept("J"):
            self.expect("(")
            args = [self.expr()]
            for _ in range(5):
                self.expect(",")
                args.append(self.expr())
            self.expect(")")
            return J(*args, span=t.span)
        if self.accept("recOR"):
            self.expect("(")
            items = self.clauses()
            self.expect(")")
            if len(items) < 2:
                raise CheckError("SyntaxError", "recOR needs at least two cases", t.span)
            return self.fold_clauses(items, t.span)[1]
        if self.accept("<"):
            pat, cube, shape = self.shape_binder()
            self.expect("->")
            family = self.expr()
            if self.accept("["):
                boundary, section = self.fold_clauses(self.clauses(), t.span)
                self.expect("]")
            else:
                boundary, section = BOT, RecBot()
            self.unbind()
            self.expect(">")
            return ExtType(cube, shape, boundary, family, section, pat, t.span)
        if self.accept("("):
            parts = [self.expr()]
            while self.accept(","):
                parts.append(self.expr())
            self.expect(")")
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = PairE(p, out, t.span)
            return out
        self.error("expected a term")


def parse_module(text: str, file: str = "<input>", shapes: Optional[dict] = None,
                 on_import: Optional[Callable] = None) -> SourceModule:
    try:
        parser = Parser(text, file, shapes, on_import)
    except CheckError as err:
        return SourceModule(file, [], [err.diagnostic()])
    return parser.module()


def parse_expr(text: str, names=(), shapes: Optional[dict] = None):
    """Parse a standalone expression with the given names in scope (outermost first)."""
    p = Parser(text, "<expr>", shapes)
    for n in names:
        p.bind(n)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error("unexpected input after the expression")
    return e


def parse_tope(text: str, names=(), shapes: Optional[dict] = None):
    p = Parser(text, "<tope>", shapes)
    for n in names:
        p.bind(n)
    t = p.tope()
    if p.tok.kind != "eof":
        p.error("unexpected input after the tope")
    return t


def parse_sequent(text: str, shapes: Optional[dict] = None):
    """Parse ``x:2, y:2 | x<=y, y<=x |- x===y`` into (cube context, hyps, goal).

    The context is a list of (pattern, cube) pairs, outermost first; hypotheses
    and goal use de Bruijn indices over it.
    """
    p = Parser(text, "<sequent>", shapes)
    ctx = []
    while p.tok.text not in ("|", "|-") and p.tok.kind != "eof":
        pat = p.pattern()
        p.expect(":")
        ctx.append((pat, p.cube()))
        p.bind(pat)
        if not p.accept(","):
            break
    hyps = []
    if p.accept("|"):
        while not p.at("|-") and p.tok.kind != "eof":
            hyps.append(p.tope())
            if not p.accept(","):
                break
    p.expect("|-")
    goal = p.tope()
    if p.tok.kind != "eof":
        p.error("unexpected input after the goal")
    return ctx, hyps, goal

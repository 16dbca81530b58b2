"""Bidirectional type checking with elaboration.

The parser cannot tell ordinary application from application to a cube
point, so it emits generic ``App`` and ``Lam`` nodes.  Checking resolves
them against the type: applying an element of an extension type becomes
``ExtApp`` and a lambda checked against an extension type becomes
``ExtLam``.  Every function returns the elaborated core term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import solver
from .conversion import Conversion, Entry, _motive_type
from .diagnostics import CheckError
from .syntax import (
    And, App, BOT, CPair, CVar, Const, Expr, ExtApp, ExtLam,
    ExtType, Fst, Id, IllFormedCubeTerm, IllFormedTope, J, Lam, Or, PairE, Pi,
    Proj1, Proj2, Refl, RecBot, RecOr, Shape, Sigma, Snd, SortMismatch, Span, Star,
    TriContext, TypeBinder, CubeBinder, Universe, Var, infer_cube, instantiate,
    TOP, conj, span_of, One, Zero,
)


@dataclass(frozen=True)
class Definition:
    name: str
    type: Expr
    body: Expr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Postulate:
    name: str
    type: Expr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ShapeDef:
    """A named shape; uses are expanded when parsing."""

    name: str
    shape: Shape
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Import:
    path: str
    span: Optional[Span] = field(default=None, compare=False)


Declaration = Definition | Postulate | ShapeDef | Import


class Printer:
    """Late-bound pretty printer hook so messages can show terms."""

    show_tope = staticmethod(lambda ctx, t: repr(t))
    show_expr = staticmethod(lambda ctx, e: repr(e))


def _guard(method):
    """Convert syntax-level exceptions to diagnostics and attach spans."""

    def wrapper(self, ctx, e, *args):
        try:
            return method(self, ctx, e, *args)
        except CheckError as err:
            raise err.with_span(span_of(e))
        except SortMismatch as err:
            raise CheckError("SortMismatch", str(err), span_of(e)) from None
        except IllFormedCubeTerm as err:
            raise CheckError("IllFormedCubeTerm", str(err), span_of(e)) from None
        except IllFormedTope as err:
            raise CheckError("IllFormedTope", str(err), span_of(e)) from None

    wrapper.__name__ = method.__name__
    wrapper.__doc__ = method.__doc__
    return wrapper


class Checker(Conversion):
    printer = Printer

    # -- helpers -----------------------------------------------------------

    def show(self, ctx, e) -> str:
        return self.printer.show_expr(ctx, e)

    def show_tope(self, ctx, t) -> str:
        return self.printer.show_tope(ctx, t)

    def sequent(self, ctx, goal) -> str:
        hyps = ", ".join(self.show_tope(ctx, h) for h in ctx.topes() if h != TOP)
        return f"{hyps} ⊢ {self.show_tope(ctx, goal)}" if hyps else f"⊢ {self.show_tope(ctx, goal)}"

    def require(self, ctx, goal, what: str, span=None):
        if not self.entails(ctx, goal):
            raise CheckError("TopeSideConditionFailed", what, span, entailment=self.sequent(ctx, goal))

    def check_tope(self, ctx, tope):
        """Well-formedness: every variable is a cube variable of the right cube."""
        cubes, tr, _ = ctx.cube_view()
        solver.normalize_tope(cubes, tr(tope))
        return tope

    def as_cube(self, ctx, e):
        """Read a pre-core expression as a cube term."""
        match e:
            case CVar() | Zero() | One() | Star():
                return e
            case Var(i, name):
                entry = ctx.entry(i)
                if entry is None:
                    raise CheckError("UnboundVariable", f"unbound variable {name}", e.span)
                if not isinstance(entry, CubeBinder):
                    raise CheckError("SortMismatch", f"{name} is a term, but a cube point is expected",
                                     e.span)
                return CVar(i, name)
            case PairE(a, b):
                return CPair(self.as_cube(ctx, a), self.as_cube(ctx, b))
            case Fst(a):
                return Proj1(self.as_cube(ctx, a))
            case Snd(a):
                return Proj2(self.as_cube(ctx, a))
            case Proj1(a):
                return Proj1(self.as_cube(ctx, a))
            case Proj2(a):
                return Proj2(self.as_cube(ctx, a))
            case CPair(a, b):
                return CPair(self.as_cube(ctx, a), self.as_cube(ctx, b))
        raise CheckError("SortMismatch", f"expected a cube point, got {self.show(ctx, e)}", span_of(e))

    # -- types -------------------------------------------------------------

    @_guard
    def check_type(self, ctx: TriContext, e) -> Expr:
        """Elaborate ``e`` as a type; large types such as U are allowed."""
        match e:
            case Universe():
                return e
            case Pi(dom, cod):
                d = self.check_type(ctx, dom)
                return Pi(d, self.check_type(ctx.bind_type(e.name, d), cod), e.name, e.span)
            case Sigma(a, b):
                d = self.check_type(ctx, a)
                return Sigma(d, self.check_type(ctx.bind_type(e.name, d), b), e.name, e.span)
            case Id(None, lhs, rhs):
                lhs, ty = self.infer(ctx, lhs)
                return Id(ty, lhs, self.check(ctx, rhs, ty), e.span)
            case Id(ty, lhs, rhs):
                ty = self.check_type(ctx, ty)
                return Id(ty, self.check(ctx, lhs, ty), self.check(ctx, rhs, ty), e.span)
            case ExtType():
                return self.ext_formation(ctx, e, large=True)
        core, ty = self.infer(ctx, e)
        if not isinstance(self.whnf(ctx, ty), Universe):
            raise CheckError("NotAType", f"{self.show(ctx, core)} is not a type", span_of(e))
        return core

    def ext_formation(self, ctx, e: ExtType, large: bool) -> ExtType:
        inner = ctx.bind_cube(e.pat, e.cube)
        self.check_tope(inner, e.shape)
        self.check_tope(inner, e.boundary)
        if not self.entails(inner.assume(e.boundary), e.shape):
            raise CheckError("NotASubshape", "the boundary is not contained in the shape", e.span,
                             entailment=self.sequent(inner.assume(e.boundary), e.shape))
        on_shape = inner.assume(e.shape)
        if large:
            family = self.check_type(on_shape, e.family)
        else:
            family = self.check(on_shape, e.family, Universe())
        section = self.check(on_shape.assume(e.boundary), e.section, family)
        return ExtType(e.cube, e.shape, e.boundary, family, section, e.pat, e.span)

    # -- checking ----------------------------------------------------------

    @_guard
    def check(self, ctx: TriContext, e, ty) -> Expr:
        t = self.whnf(ctx, ty)
        match e:
            case Lam(body, pat):
                if isinstance(t, Pi):
                    inner = ctx.bind_type(pat, t.dom)
                    return Lam(self.check(inner, body, t.cod), pat, e.span)
                if isinstance(t, ExtType):
                    return self.check_ext_lam(ctx, body, pat, t, e.span)
                raise CheckError("TypeMismatch",
                                 f"a function was given where {self.show(ctx, t)} was expected", e.span)
            case ExtLam(body, pat) if isinstance(t, ExtType):
                return self.check_ext_lam(ctx, body, pat, t, e.span)
            case PairE(a, b):
                if not isinstance(t, Sigma):
                    raise CheckError("TypeMismatch",
                                     f"a pair was given where {self.show(ctx, t)} was expected", e.span)
                a = self.check(ctx, a, t.fst)
                return PairE(a, self.check(ctx, b, instantiate(t.snd, a)), e.span)
            case Refl():
                if not isinstance(t, Id):
                    raise CheckError("TypeMismatch",
                                     f"refl was given where {self.show(ctx, t)} was expected", e.span)
                if not self.def_equal(ctx, t.lhs, t.rhs, t.ty):
                    raise CheckError("TypeMismatch",
                                     f"refl: {self.show(ctx, t.lhs)} and {self.show(ctx, t.rhs)} "
                                     "are not definitionally equal", e.span)
                return e
            case RecBot():
                self.require(ctx, BOT, "recBOT outside an inconsistent tope context", e.span)
                return e
            case RecOr():
                return self.check_recor(ctx, e, t)
            case Universe() if isinstance(t, Universe):
                raise CheckError("UniverseError", "U is not an element of U", e.span)
        core, inferred = self.infer(ctx, e)
        if not self.conv_type(ctx, inferred, t):
            raise CheckError("TypeMismatch",
                             f"{self.show(ctx, core)} has type {self.show(ctx, inferred)} "
                             f"but {self.show(ctx, t)} was expected", span_of(e))
        return core

    def check_ext_lam(self, ctx, body, pat, t: ExtType, span):
        inner = ctx.bind_cube(pat, t.cube).assume(t.shape)
        body = self.check(inner, body, t.family)
        if t.boundary != BOT:
            on_boundary = inner.assume(t.boundary)
            if not self.def_equal(on_boundary, body, t.section, t.family):
                raise self.boundary_error(inner, body, t, span)
        return ExtLam(body, pat, span)

    def boundary_error(self, inner, body, t, span):
        cubes, tr, back = inner.cube_view()
        normal = solver.normalize_tope(cubes, tr(t.boundary))
        face, sub = t.boundary, inner.assume(t.boundary)
        for case in solver.dnf(normal):
            trial = inner
            for lit in case:
                trial = trial.assume(back(lit))
            if not self.def_equal(trial, body, t.section, t.family):
                face, sub = (back(conj(case)) if case else face), trial
                break
        try:
            lhs = self.normalize(sub, body, t.family)
            rhs = self.normalize(sub, t.section, t.family)
        except CheckError:
            lhs, rhs = body, t.section
        hyps = self.sequent(sub, TOP).rsplit("⊢", 1)[0]
        return CheckError("BoundaryMismatch",
                          f"the body does not agree with the boundary on {self.show_tope(inner, face)}",
                          span, entailment=f"{hyps}⊢ {self.show(inner, lhs)} ≡ {self.show(inner, rhs)}")

    def check_recor(self, ctx, e: RecOr, t):
        lt, rt = self.check_tope(ctx, e.left_tope), self.check_tope(ctx, e.right_tope)
        self.require(ctx, Or(lt, rt), "the cases of recOR do not cover the tope context", e.span)
        left = self.check(ctx.assume(lt), e.left, t)
        right = self.check(ctx.assume(rt), e.right, t)
        both = ctx.assume(lt).assume(rt)
        if not self.def_equal(both, left, right, t):
            raise CheckError("BranchDisagreement",
                             "the branches of recOR disagree on the overlap "
                             f"{self.show_tope(ctx, And(lt, rt))}", e.span)
        return RecOr(lt, rt, left, right, e.span)

    # -- inference ---------------------------------------------------------

    @_guard
    def infer(self, ctx: TriContext, e):
        """Elaborate ``e`` and return it with its type."""
        match e:
            case Var(i, name):
                entry = ctx.entry(i)
                if entry is None:
                    raise CheckError("UnboundVariable", f"unbound variable {name}", e.span)
                if not isinstance(entry, TypeBinder):
                    raise CheckError("SortMismatch",
                                     f"{name} is a cube variable and cannot be used as a term", e.span)
                return e, ctx.type_of(i)
            case Const(name):
                entry = self.env.get(name)
                if entry is None:
                    raise CheckError("UnboundVariable", f"unknown name {name}", e.span)
                return e, entry.type
            case Universe():
                raise CheckError("UniverseError", "U is not an element of any universe", e.span)
            case Pi(dom, cod):
                d = self.check(ctx, dom, Universe())
                c = self.check(ctx.bind_type(e.name, d), cod, Universe())
                return Pi(d, c, e.name, e.span), Universe()
            case Sigma(a, b):
                d = self.check(ctx, a, Universe())
                c = self.check(ctx.bind_type(e.name, d), b, Universe())
                return Sigma(d, c, e.name, e.span), Universe()
            case Id(ty, lhs, rhs):
                if ty is None:
                    lhs, ty = self.infer(ctx, lhs)
                    self.check(ctx, ty, Universe())
                else:
                    ty = self.check(ctx, ty, Universe())
                    lhs = self.check(ctx, lhs, ty)
                return Id(ty, lhs, self.check(ctx, rhs, ty), e.span), Universe()
            case ExtType():
                return self.ext_formation(ctx, e, large=False), Universe()
            case App(fn, arg):
                return self.infer_app(ctx, e, fn, arg)
            case ExtApp(fn, pt):
                return self.infer_app(ctx, e, fn, pt)
            case Fst(arg):
                p, t = self.infer(ctx, arg)
                t = self.whnf(ctx, t)
                if not isinstance(t, Sigma):
                    raise CheckError("TypeMismatch", f"fst of a non-pair of type {self.show(ctx, t)}",
                                     e.span)
                return Fst(p, e.span), t.fst
            case Snd(arg):
                p, t = self.infer(ctx, arg)
                t = self.whnf(ctx, t)
                if not isinstance(t, Sigma):
                    raise CheckError("TypeMismatch", f"snd of a non-pair of type {self.show(ctx, t)}",
                                     e.span)
                return Snd(p, e.span), instantiate(t.snd, Fst(p))
            case J():
                return self.infer_j(ctx, e)
            case RecOr(lt, _, left, _):
                self.check_tope(ctx, lt)
                _, ty = self.infer(ctx.assume(lt), left)
                return self.check_recor(ctx, e, ty), ty
            case Zero() | One() | Star() | CVar() | CPair() | Proj1() | Proj2():
                raise CheckError("SortMismatch", "a cube point cannot be used as a term", span_of(e))
            case Lam() | ExtLam() | PairE() | Refl() | RecBot():
                raise CheckError("CannotInfer",
                                 f"cannot infer a type for {self.show(ctx, e)}; add an annotation",
                                 span_of(e))
        raise CheckError("Internal", f"unexpected syntax {e!r}", span_of(e))

    def infer_app(self, ctx, e, fn, arg):
        f, t = self.infer(ctx, fn)
        t = self.whnf(ctx, t)
        if isinstance(t, Pi):
            a = self.check(ctx, arg, t.dom)
            return App(f, a, e.span), instantiate(t.cod, a)
        if isinstance(t, ExtType):
            pt = self.as_cube(ctx, arg)
            cube = infer_cube(ctx, pt)
            if cube != t.cube:
                raise CheckError("IllFormedCubeTerm",
                                 f"the argument is a point of {_show_cube(cube)} "
                                 f"but the shape lives in {_show_cube(t.cube)}", span_of(arg))
            self.require(ctx, instantiate(t.shape, pt), "the point does not lie in the shape",
                         span_of(arg) or e.span)
            return ExtApp(f, pt, e.span), instantiate(t.family, pt)
        raise CheckError("NotAFunction", f"{self.show(ctx, f)} of type {self.show(ctx, t)} "
                         "cannot be applied", e.span)

    def infer_j(self, ctx, e: J):
        ty = self.check_type(ctx, e.ty)
        base = self.check(ctx, e.base, ty)
        motive = self.check(ctx, e.motive, _motive_type(ty, base))
        refl_case = self.check(ctx, e.refl_case, App(App(motive, base), Refl()))
        target = self.check(ctx, e.target, ty)
        path = self.check(ctx, e.path, Id(ty, base, target))
        core = J(ty, base, motive, refl_case, target, path, e.span)
        return core, App(App(motive, target), path)

    # -- declarations ------------------------------------------------------

    def check_declaration(self, decl) -> None:
        """Check ``decl`` and extend the environment."""
        if isinstance(decl, (ShapeDef, Import)):
            return
        if decl.name in self.env:
            raise CheckError("DuplicateName", f"{decl.name} is already defined", decl.span)
        empty = TriContext()
        try:
            ty = self.check_type(empty, decl.type)
        except CheckError as err:
            raise err.with_span(decl.span)
        if isinstance(decl, Postulate):
            self.env[decl.name] = Entry(decl.name, ty, None, decl.span, postulate=True)
            return
        try:
            body = self.check(empty, decl.body, ty)
        except CheckError as err:
            self.env[decl.name] = Entry(decl.name, ty, None, decl.span, postulate=True)
            raise err.with_span(decl.span)
        self.env[decl.name] = Entry(decl.name, ty, body, decl.span)


def _show_cube(cube) -> str:
    from .printer import show_cube
    return show_cube(cube)


def check_declaration(env: dict, decl) -> dict:
    """Functional form: a new environment extended by ``decl``."""
    checker = Checker(dict(env))
    checker.check_declaration(decl)
    return checker.env

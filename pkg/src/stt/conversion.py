"""Weak-head reduction, definitional equality and normal forms.

Equality is type directed: functions, pairs and extension-type elements are
compared after eta expansion, neutrals are compared spine by spine, and cube
points are compared by asking the tope solver whether they are provably
equal in the current tope context.  A stuck rec∨ splits the context into its
two cases; an inconsistent tope context makes every pair of terms equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import solver
from .syntax import (
    App, BOT, CVar, Const, Eq, Expr, ExtApp, ExtLam, ExtType, Fst, Id, J, Lam, Or,
    PairE, Pi, Refl, RecBot, RecOr, Sigma, Snd, Span, TriContext, Universe, Var,
    beta_tope, instantiate, normalize_cube, shift,
)


@dataclass
class Entry:
    name: str
    type: Expr
    body: Optional[Expr] = None
    span: Optional[Span] = None
    postulate: bool = False


def _spine_head(e):
    while True:
        match e:
            case App(fn, _) | ExtApp(fn, _):
                e = fn
            case Fst(arg) | Snd(arg):
                e = arg
            case J():
                e = e.path
            case _:
                return e


_TYPE_FORMERS = (Pi, Sigma, Id, ExtType, Universe)


class Conversion:
    def __init__(self, env=None):
        self.env: dict = env if env is not None else {}

    # -- tope queries ------------------------------------------------------

    def entails(self, ctx: TriContext, goal) -> bool:
        cubes, tr, _ = ctx.cube_view()
        hyps = tuple(tr(h) for h in ctx.topes())
        return solver.entails(cubes, hyps, tr(goal))

    def inconsistent(self, ctx: TriContext) -> bool:
        if not ctx.topes():
            return False
        return self.entails(ctx, BOT)

    def points_equal(self, ctx, s, r) -> bool:
        return s == r or self.entails(ctx, Eq(s, r))

    # -- reduction ---------------------------------------------------------

    @staticmethod
    def apply(f, x):
        return instantiate(f.body, x) if isinstance(f, Lam) else App(f, x)

    @staticmethod
    def ext_apply(f, s):
        return instantiate(f.body, s) if isinstance(f, ExtLam) else ExtApp(f, s)

    @staticmethod
    def first(p):
        return p.fst if isinstance(p, PairE) else Fst(p)

    @staticmethod
    def second(p):
        return p.snd if isinstance(p, PairE) else Snd(p)

    def whnf(self, ctx: TriContext, e):
        while True:
            match e:
                case App(fn, arg):
                    f = self.whnf(ctx, fn)
                    if isinstance(f, Lam):
                        e = instantiate(f.body, arg)
                        continue
                    return e if f is fn else App(f, arg, e.span)
                case ExtApp(fn, pt):
                    f = self.whnf(ctx, fn)
                    if isinstance(f, ExtLam):
                        e = instantiate(f.body, pt)
                        continue
                    red = self.boundary_reduct(ctx, f, pt)
                    if red is not None:
                        e = red
                        continue
                    return e if f is fn else ExtApp(f, pt, e.span)
                case Fst(arg):
                    p = self.whnf(ctx, arg)
                    if isinstance(p, PairE):
                        e = p.fst
                        continue
                    return e if p is arg else Fst(p, e.span)
                case Snd(arg):
                    p = self.whnf(ctx, arg)
                    if isinstance(p, PairE):
                        e = p.snd
                        continue
                    return e if p is arg else Snd(p, e.span)
                case J():
                    p = self.whnf(ctx, e.path)
                    if isinstance(p, Refl):
                        e = e.refl_case
                        continue
                    if p is e.path:
                        return e
                    return J(e.ty, e.base, e.motive, e.refl_case, e.target, p, e.span)
                case Const(name):
                    entry = self.env.get(name)
                    if entry is not None and entry.body is not None:
                        e = entry.body
                        continue
                    return e
                case RecOr(lt, rt, left, right):
                    if self.entails(ctx, lt):
                        e = left
                        continue
                    if self.entails(ctx, rt):
                        e = right
                        continue
                    return e
                case _:
                    return e

    def boundary_reduct(self, ctx, f, pt):
        """The boundary section at ``pt`` when ``pt`` lies in the boundary."""
        ty = self.type_of_neutral(ctx, f)
        if ty is None:
            return None
        ty = self.whnf(ctx, ty)
        if not isinstance(ty, ExtType) or ty.boundary == BOT:
            return None
        if self.entails(ctx, instantiate(ty.boundary, pt)):
            return instantiate(ty.section, pt)
        return None

    def type_of_neutral(self, ctx, e):
        match e:
            case Var(i):
                return ctx.type_of(i)
            case Const(name):
                entry = self.env.get(name)
                return entry.type if entry else None
            case App(fn, arg):
                t = self.type_of_neutral(ctx, fn)
                t = self.whnf(ctx, t) if t is not None else None
                return instantiate(t.cod, arg) if isinstance(t, Pi) else None
            case ExtApp(fn, pt):
                t = self.type_of_neutral(ctx, fn)
                t = self.whnf(ctx, t) if t is not None else None
                return instantiate(t.family, pt) if isinstance(t, ExtType) else None
            case Fst(arg):
                t = self.type_of_neutral(ctx, arg)
                t = self.whnf(ctx, t) if t is not None else None
                return t.fst if isinstance(t, Sigma) else None
            case Snd(arg):
                t = self.type_of_neutral(ctx, arg)
                t = self.whnf(ctx, t) if t is not None else None
                return instantiate(t.snd, Fst(arg)) if isinstance(t, Sigma) else None
            case J():
                return App(App(e.motive, e.target), e.path)
            case RecOr(lt, _, left, _):
                return self.type_of_neutral(ctx.assume(lt), left)
        return None

    # -- splitting ---------------------------------------------------------

    def stuck_recor(self, ctx, *terms):
        for t in terms:
            head = _spine_head(t)
            if isinstance(head, RecOr) and self.entails(ctx, Or(head.left_tope, head.right_tope)):
                return head
        return None

    def split_context(self, ctx, k) -> bool:
        """Case split on the disjuncts of the tope context; False if there is
        nothing to split."""
        topes = ctx.topes()
        if not topes:
            return False
        cubes, tr, back = ctx.cube_view()
        normal = solver.TOP
        for h in topes:
            normal = solver._and(normal, solver.normalize_tope(cubes, tr(h)))
        cases = [c for c in solver.dnf(normal) if solver.consistent(cubes, c)]
        if len(cases) < 2:
            return False
        for case in cases:
            sub = ctx
            for lit in case:
                sub = sub.assume(back(lit))
            if not k(sub):
                return False
        return True

    # -- equality ----------------------------------------------------------

    def def_equal(self, ctx: TriContext, a, b, ty, split: bool = True) -> bool:
        if a == b or self.inconsistent(ctx):
            return True
        t = self.whnf(ctx, ty)
        match t:
            case Pi(dom, cod):
                inner = ctx.bind_type(_binder_name(a, b, t.name), dom)
                x = Var(0)
                return self.def_equal(inner, self.apply(shift(a, 1), x), self.apply(shift(b, 1), x), cod)
            case Sigma(fst_ty, snd_ty):
                fa, fb = self.first(a), self.first(b)
                return (self.def_equal(ctx, fa, fb, fst_ty)
                        and self.def_equal(ctx, self.second(a), self.second(b), instantiate(snd_ty, fa)))
            case ExtType():
                inner = ctx.bind_cube(_binder_name(a, b, t.pat), t.cube).assume(t.shape)
                x = CVar(0)
                return self.def_equal(inner, self.ext_apply(shift(a, 1), x),
                                      self.ext_apply(shift(b, 1), x), t.family)
            case Universe():
                return self.conv_type(ctx, a, b, split)
        wa, wb = self.whnf(ctx, a), self.whnf(ctx, b)
        if wa == wb:
            return True
        r = self.stuck_recor(ctx, wa, wb)
        if r is not None:
            return all(self.def_equal(ctx.assume(tope), wa, wb, t, split)
                       for tope in (r.left_tope, r.right_tope))
        if self.neutral_equal(ctx, wa, wb) is not None:
            return True
        return split and self.split_context(ctx, lambda c: self.def_equal(c, wa, wb, t, False))

    def neutral_equal(self, ctx, a, b):
        """Compare two weak-head normal neutrals; the common type, or None."""
        match a, b:
            case Var(i), Var(j) if i == j:
                return ctx.type_of(i)
            case Const(m), Const(n) if m == n:
                entry = self.env.get(m)
                return entry.type if entry else Universe()
            case App(f, x), App(g, y):
                t = self.neutral_equal(ctx, f, g)
                if t is None:
                    return None
                t = self.whnf(ctx, t)
                if isinstance(t, Pi) and self.def_equal(ctx, x, y, t.dom):
                    return instantiate(t.cod, x)
                return None
            case ExtApp(f, s), ExtApp(g, r):
                t = self.neutral_equal(ctx, f, g)
                if t is None:
                    return None
                t = self.whnf(ctx, t)
                if isinstance(t, ExtType) and self.points_equal(ctx, s, r):
                    return instantiate(t.family, s)
                return None
            case Fst(p), Fst(q):
                t = self.neutral_equal(ctx, p, q)
                t = self.whnf(ctx, t) if t is not None else None
                return t.fst if isinstance(t, Sigma) else None
            case Snd(p), Snd(q):
                t = self.neutral_equal(ctx, p, q)
                t = self.whnf(ctx, t) if t is not None else None
                return instantiate(t.snd, Fst(p)) if isinstance(t, Sigma) else None
            case J(), J():
                ok = (self.conv_type(ctx, a.ty, b.ty)
                      and self.def_equal(ctx, a.base, b.base, a.ty)
                      and self.def_equal(ctx, a.motive, b.motive, _motive_type(a.ty, a.base))
                      and self.def_equal(ctx, a.refl_case, b.refl_case,
                                         App(App(a.motive, a.base), Refl()))
                      and self.def_equal(ctx, a.target, b.target, a.ty)
                      and self.neutral_equal(ctx, a.path, b.path) is not None)
                return App(App(a.motive, a.target), a.path) if ok else None
            case RecBot(), RecBot():
                return Universe()
            case RecOr(), RecOr() if a.left_tope == b.left_tope and a.right_tope == b.right_tope:
                ty = self.type_of_neutral(ctx, a)
                if ty is None:
                    return None
                if (self.def_equal(ctx.assume(a.left_tope), a.left, b.left, ty)
                        and self.def_equal(ctx.assume(a.right_tope), a.right, b.right, ty)):
                    return ty
                return None
        if isinstance(a, _TYPE_FORMERS) and isinstance(b, _TYPE_FORMERS):
            return Universe() if self.conv_type(ctx, a, b) else None
        return None

    def conv_type(self, ctx: TriContext, a, b, split: bool = True) -> bool:
        if a == b or self.inconsistent(ctx):
            return True
        wa, wb = self.whnf(ctx, a), self.whnf(ctx, b)
        if wa == wb:
            return True
        match wa, wb:
            case Universe(), Universe():
                return True
            case Pi(), Pi():
                return (self.conv_type(ctx, wa.dom, wb.dom)
                        and self.conv_type(ctx.bind_type(wa.name, wa.dom), wa.cod, wb.cod))
            case Sigma(), Sigma():
                return (self.conv_type(ctx, wa.fst, wb.fst)
                        and self.conv_type(ctx.bind_type(wa.name, wa.fst), wa.snd, wb.snd))
            case Id(), Id():
                return (self.conv_type(ctx, wa.ty, wb.ty)
                        and self.def_equal(ctx, wa.lhs, wb.lhs, wa.ty)
                        and self.def_equal(ctx, wa.rhs, wb.rhs, wa.ty))
            case ExtType(), ExtType():
                return self.ext_types_equal(ctx, wa, wb)
        if isinstance(wa, _TYPE_FORMERS) and isinstance(wb, _TYPE_FORMERS):
            return False
        r = self.stuck_recor(ctx, wa, wb)
        if r is not None:
            return all(self.conv_type(ctx.assume(tope), wa, wb, split)
                       for tope in (r.left_tope, r.right_tope))
        if self.neutral_equal(ctx, wa, wb) is not None:
            return True
        return split and self.split_context(ctx, lambda c: self.conv_type(c, wa, wb, False))

    def ext_types_equal(self, ctx, a: ExtType, b: ExtType) -> bool:
        if a.cube != b.cube:
            return False
        inner = ctx.bind_cube(a.pat, a.cube)
        if not (self.entails(inner.assume(a.shape), b.shape)
                and self.entails(inner.assume(b.shape), a.shape)):
            return False
        on_shape = inner.assume(a.shape)
        if not (self.entails(on_shape.assume(a.boundary), b.boundary)
                and self.entails(on_shape.assume(b.boundary), a.boundary)):
            return False
        return (self.conv_type(on_shape, a.family, b.family)
                and self.def_equal(on_shape.assume(a.boundary), a.section, b.section, a.family))

    # -- normal forms ------------------------------------------------------

    def normalize(self, ctx: TriContext, e, ty):
        """Beta-normal, eta-long form of ``e`` at type ``ty``."""
        if self.inconsistent(ctx):
            return RecBot()
        t = self.whnf(ctx, ty)
        match t:
            case Pi(dom, cod):
                name = e.pat if isinstance(e, Lam) else t.name
                inner = ctx.bind_type(name, dom)
                return Lam(self.normalize(inner, self.apply(shift(e, 1), Var(0)), cod), name)
            case Sigma(fst_ty, snd_ty):
                a = self.first(e)
                return PairE(self.normalize(ctx, a, fst_ty),
                             self.normalize(ctx, self.second(e), instantiate(snd_ty, a)))
            case ExtType():
                name = e.pat if isinstance(e, ExtLam) else t.pat
                inner = ctx.bind_cube(name, t.cube).assume(t.shape)
                return ExtLam(self.normalize(inner, self.ext_apply(shift(e, 1), CVar(0)), t.family),
                              name)
            case Universe():
                return self.normalize_type(ctx, e)
        w = self.whnf(ctx, e)
        r = self.stuck_recor(ctx, w)
        if r is not None:
            return RecOr(beta_tope(r.left_tope), beta_tope(r.right_tope),
                         self.normalize(ctx.assume(r.left_tope), w, t),
                         self.normalize(ctx.assume(r.right_tope), w, t))
        if isinstance(w, Refl):
            return w
        return self.normalize_neutral(ctx, w)[0]

    def normalize_neutral(self, ctx, e):
        """Normal form of a weak-head neutral together with its type."""
        match e:
            case Var(i):
                return e, ctx.type_of(i)
            case Const(name):
                entry = self.env.get(name)
                return e, (entry.type if entry else None)
            case App(fn, arg):
                f, t = self.normalize_neutral(ctx, fn)
                t = self.whnf(ctx, t)
                return App(f, self.normalize(ctx, arg, t.dom)), instantiate(t.cod, arg)
            case ExtApp(fn, pt):
                f, t = self.normalize_neutral(ctx, fn)
                t = self.whnf(ctx, t)
                return ExtApp(f, normalize_cube(ctx, pt)), instantiate(t.family, pt)
            case Fst(arg):
                p, t = self.normalize_neutral(ctx, arg)
                t = self.whnf(ctx, t)
                return Fst(p), t.fst
            case Snd(arg):
                p, t = self.normalize_neutral(ctx, arg)
                t = self.whnf(ctx, t)
                return Snd(p), instantiate(t.snd, Fst(arg))
            case J():
                path, _ = self.normalize_neutral(ctx, e.path)
                ty = self.normalize_type(ctx, e.ty)
                base = self.normalize(ctx, e.base, e.ty)
                motive = self.normalize(ctx, e.motive, _motive_type(e.ty, e.base))
                refl_case = self.normalize(ctx, e.refl_case, App(App(e.motive, e.base), Refl()))
                target = self.normalize(ctx, e.target, e.ty)
                return J(ty, base, motive, refl_case, target, path), App(App(e.motive, e.target), e.path)
        if isinstance(e, _TYPE_FORMERS):
            return self.normalize_type(ctx, e), Universe()
        return e, self.type_of_neutral(ctx, e)

    def normalize_type(self, ctx, ty):
        t = self.whnf(ctx, ty)
        match t:
            case Universe():
                return t
            case Pi(dom, cod):
                return Pi(self.normalize_type(ctx, dom),
                          self.normalize_type(ctx.bind_type(t.name, dom), cod), t.name)
            case Sigma(fst_ty, snd_ty):
                return Sigma(self.normalize_type(ctx, fst_ty),
                             self.normalize_type(ctx.bind_type(t.name, fst_ty), snd_ty), t.name)
            case Id(a, lhs, rhs):
                return Id(self.normalize_type(ctx, a), self.normalize(ctx, lhs, a),
                          self.normalize(ctx, rhs, a))
            case ExtType():
                inner = ctx.bind_cube(t.pat, t.cube).assume(t.shape)
                family = self.normalize_type(inner, t.family)
                section = self.normalize(inner.assume(t.boundary), t.section, t.family)
                return ExtType(t.cube, t.shape, t.boundary, family, section, t.pat)
        r = self.stuck_recor(ctx, t)
        if r is not None:
            return RecOr(beta_tope(r.left_tope), beta_tope(r.right_tope),
                         self.normalize_type(ctx.assume(r.left_tope), t),
                         self.normalize_type(ctx.assume(r.right_tope), t))
        return self.normalize_neutral(ctx, t)[0]


def _motive_type(ty, base):
    """(x : A) -> (base = x) -> U"""
    return Pi(ty, Pi(Id(shift(ty, 1), shift(base, 1), Var(0)), Universe(), "p"), "x")


def _binder_name(a, b, default):
    for e in (a, b):
        if isinstance(e, (Lam, ExtLam)):
            return e.pat
    return default

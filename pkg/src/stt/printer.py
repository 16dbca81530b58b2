"""Pretty printer for the surface syntax.

Output reparses to an alpha-equal tree.  Binder names are freshened when
they would shadow a visible name or a constant used underneath.
"""

from __future__ import annotations

from .checker import Definition, Import, Postulate, ShapeDef
from .syntax import (
    And, App, Bot, CPair, CVar, Const, Eq, ExtApp, ExtLam, ExtType, Fst, Id, Interval,
    J, Lam, Leq, One, Or, PairE, Pi, Prod, Proj1, Proj2, Refl, RecBot, RecOr, Sigma,
    Snd, Star, Top, UnitCube, Universe, Var, Zero, beta_cube, instantiate, occurs,
)

# expression levels, loosest first
BINDER, PRODUCT, EQUATION, APPLICATION, ATOM = range(5)
# tope levels
T_OR, T_AND, T_ATOM = range(3)


def show_cube(cube) -> str:
    match cube:
        case UnitCube():
            return "1"
        case Interval():
            return "2"
        case Prod(l, r):
            left = show_cube(l)
            return f"({left})*{show_cube(r)}" if isinstance(l, Prod) else f"{left}*{show_cube(r)}"
    return repr(cube)


def _constants(node) -> set:
    out = set()

    def walk(n):
        if isinstance(n, Const):
            out.add(n.name)
        if hasattr(n, "__dataclass_fields__"):
            for f in n.__dataclass_fields__:
                v = getattr(n, f)
                if hasattr(v, "__dataclass_fields__"):
                    walk(v)

    walk(node)
    return out


class Printer:
    def __init__(self, names=(), tidy=False):
        # innermost last; each entry is a pattern (str or nested pair)
        self.scope = list(names)
        # tidy output simplifies cube terms for messages; it does not round-trip
        self.tidy = tidy

    # -- names -------------------------------------------------------------

    def visible(self) -> set:
        out = set()

        def add(p):
            if isinstance(p, tuple):
                add(p[0])
                add(p[1])
            else:
                out.add(p)

        for p in self.scope:
            add(p)
        return out

    def fresh(self, pat, body=None):
        taken = self.visible() | (_constants(body) if body is not None else set())
        used = set()

        def go(p):
            if isinstance(p, tuple):
                return (go(p[0]), go(p[1]))
            name = p if p and p != "_" else "x"
            base = name
            k = 1
            while name in taken or name in used:
                name = f"{base}{k}"
                k += 1
            used.add(name)
            return name

        return go(pat)

    def with_binder(self, pat, fn):
        self.scope.append(pat)
        try:
            return fn()
        finally:
            self.scope.pop()

    def var_name(self, index: int, path=()):
        if index >= len(self.scope):
            return None
        pat = self.scope[-1 - index]
        for step in path:
            if not isinstance(pat, tuple):
                return None
            pat = pat[0] if step == 1 else pat[1]
        return pat

    # -- cube terms --------------------------------------------------------

    def cube_term(self, t, level=ATOM) -> str:
        path = []
        base = t
        while isinstance(base, (Proj1, Proj2, Fst, Snd)):
            path.append(1 if isinstance(base, (Proj1, Fst)) else 2)
            base = base.arg
        if isinstance(base, (CVar, Var)):
            pat = self.var_name(base.index, tuple(reversed(path)))
            if pat is not None:
                return self.pattern_text(pat)
            if not path:
                return f"#{base.index}"
        match t:
            case Zero():
                return "0"
            case One():
                return "1"
            case Star():
                return "star"
            case CPair():
                return "(" + ", ".join(self.cube_term(x, BINDER) for x in _cube_tuple(t)) + ")"
            case Proj1(a) | Proj2(a):
                kw = "fst" if isinstance(t, Proj1) else "snd"
                s = f"{kw} {self.cube_term(a, ATOM)}"
                return f"({s})" if level >= ATOM else s
        return repr(t)

    @staticmethod
    def pattern_text(pat) -> str:
        if isinstance(pat, tuple):
            return "(" + ", ".join(Printer.pattern_text(p) for p in _pattern_tuple(pat)) + ")"
        return pat

    # -- topes -------------------------------------------------------------

    def tope(self, t, level=T_OR) -> str:
        if self.tidy:
            t = _reduce_tope(t)
        match t:
            case Top():
                return "TOP"
            case Bot():
                return "BOT"
            case Or(l, r):
                s = f"{self.tope(l, T_AND)} \\/ {self.tope(r, T_OR)}"
                return f"({s})" if level > T_OR else s
            case And(l, r):
                s = f"{self.tope(l, T_ATOM)} /\\ {self.tope(r, T_AND)}"
                return f"({s})" if level > T_AND else s
            case Eq(a, b):
                return f"{self.cube_term(a, APPLICATION)} === {self.cube_term(b, APPLICATION)}"
            case Leq(a, b):
                return f"{self.cube_term(a, APPLICATION)} <= {self.cube_term(b, APPLICATION)}"
        return repr(t)

    # -- expressions -------------------------------------------------------

    def expr(self, e, level=BINDER) -> str:
        s, own = self._expr(e)
        return f"({s})" if own < level else s

    def _expr(self, e):
        match e:
            case Var() | Fst() | Snd() if self._is_pattern_path(e):
                return self.cube_term(e), ATOM
            case Var(i):
                return self.var_name(i) or f"#{i}", ATOM
            case Const(name):
                return name, ATOM
            case Universe():
                return "U", ATOM
            case Zero() | One() | Star() | CVar() | CPair() | Proj1() | Proj2():
                return self.cube_term(e), ATOM
            case Refl():
                return "refl", ATOM
            case RecBot():
                return "recBOT", ATOM
            case Lam() | ExtLam():
                return self.lam(e), BINDER
            case Pi():
                return self.pi_like(e, Pi, "->"), BINDER
            case Sigma():
                return self.pi_like(e, Sigma, "*"), (BINDER if occurs(e.snd, 0) else PRODUCT)
            case Id(ty, lhs, rhs):
                op = "=" if ty is None else f"=_{{{self.expr(ty)}}}"
                return f"{self.expr(lhs, APPLICATION)} {op} {self.expr(rhs, APPLICATION)}", EQUATION
            case App(fn, arg):
                return f"{self.expr(fn, APPLICATION)} {self.expr(arg, ATOM)}", APPLICATION
            case ExtApp(fn, pt):
                return f"{self.expr(fn, APPLICATION)} {self.cube_term(pt, ATOM)}", APPLICATION
            case Fst(arg):
                return f"fst {self.expr(arg, ATOM)}", APPLICATION
            case Snd(arg):
                return f"snd {self.expr(arg, ATOM)}", APPLICATION
            case PairE():
                items = _pair_tuple(e)
                return "(" + ", ".join(self.expr(x) for x in items) + ")", ATOM
            case J():
                args = [e.ty, e.base, e.motive, e.refl_case, e.target, e.path]
                return "J(" + ", ".join(self.expr(a) for a in args) + ")", ATOM
            case RecOr():
                clauses = _recor_clauses(e)
                return "recOR(" + ", ".join(f"{self.tope(p)} |-> {self.expr(a)}"
                                             for p, a in clauses) + ")", ATOM
            case ExtType():
                return self.ext_type(e)
        return repr(e), ATOM

    def _is_pattern_path(self, e) -> bool:
        path = []
        base = e
        while isinstance(base, (Fst, Snd)):
            path.append(1 if isinstance(base, Fst) else 2)
            base = base.arg
        if not isinstance(base, Var):
            return False
        pat = self.var_name(base.index)
        if not isinstance(pat, tuple):
            return False
        return self.var_name(base.index, tuple(reversed(path))) is not None

    def lam(self, e) -> str:
        pats = []
        pushed = 0
        while isinstance(e, (Lam, ExtLam)):
            pat = self.fresh(e.pat, e.body)
            pats.append(pat)
            self.scope.append(pat)
            pushed += 1
            e = e.body
        try:
            body = self.expr(e, BINDER)
        finally:
            del self.scope[len(self.scope) - pushed:]
        return "\\" + " ".join(self.pattern_text(p) for p in pats) + " -> " + body

    def pi_like(self, e, former, arrow) -> str:
        field_dom = "dom" if former is Pi else "fst"
        field_cod = "cod" if former is Pi else "snd"
        dom, cod = getattr(e, field_dom), getattr(e, field_cod)
        if not occurs(cod, 0):
            rest = instantiate(cod, Universe())
            if former is Pi:
                return f"{self.expr(dom, PRODUCT)} -> {self.expr(rest, BINDER)}"
            return f"{self.expr(dom, EQUATION)} * {self.expr(rest, PRODUCT)}"
        groups = []
        pushed = 0
        while isinstance(e, former) and occurs(getattr(e, field_cod), 0):
            dom, cod = getattr(e, field_dom), getattr(e, field_cod)
            name = self.fresh(e.name, cod)
            groups.append(f"({name} : {self.expr(dom)})")
            self.scope.append(name)
            pushed += 1
            e = cod
        try:
            body = self.expr(e, BINDER)
        finally:
            del self.scope[len(self.scope) - pushed:]
        return " ".join(groups) + f" {arrow} " + body

    def shape_binder(self, pat, cube, shape) -> str:
        text = f"{{{self.pattern_text(pat)} : {show_cube(cube)}"
        if not isinstance(shape, Top):
            text += f" | {self.with_binder(pat, lambda: self.tope(shape))}"
        return text + "}"

    def ext_type(self, e: ExtType):
        pat = self.fresh(e.pat, e.family)
        binder = self.shape_binder(pat, e.cube, e.shape)
        family = self.with_binder(pat, lambda: self.expr(e.family))
        if isinstance(e.boundary, Bot) and isinstance(e.section, RecBot):
            return f"{binder} -> {family}", BINDER
        clauses = _boundary_clauses(e.boundary, e.section)
        body = self.with_binder(pat, lambda: ", ".join(
            f"{self.tope(p)} |-> {self.expr(a)}" for p, a in clauses))
        return f"<{binder} -> {family} [{body}]>", ATOM


def _reduce_tope(t):
    match t:
        case Eq(a, b):
            a, b = beta_cube(a), beta_cube(b)
            # read "t === 0" rather than "0 === t"
            return Eq(b, a) if isinstance(a, (Zero, One)) and not isinstance(b, (Zero, One)) else Eq(a, b)
        case Leq(a, b):
            return Leq(beta_cube(a), beta_cube(b))
    return t


def _cube_tuple(t):
    out = []
    while isinstance(t, CPair):
        out.append(t.left)
        t = t.right
    return out + [t]


def _pair_tuple(e):
    out = []
    while isinstance(e, PairE):
        out.append(e.fst)
        e = e.snd
    return out + [e]


def _pattern_tuple(pat):
    out = []
    while isinstance(pat, tuple):
        out.append(pat[0])
        pat = pat[1]
    return out + [pat]


def _recor_clauses(e: RecOr):
    out = [(e.left_tope, e.left)]
    r = e.right
    if isinstance(r, RecOr) and e.right_tope == Or(r.left_tope, r.right_tope):
        return out + _recor_clauses(r)
    return out + [(e.right_tope, r)]


def _boundary_clauses(phi, section):
    if isinstance(section, RecOr) and isinstance(phi, Or) \
            and section.left_tope == phi.left and section.right_tope == phi.right:
        return [(phi.left, section.left)] + _boundary_clauses(phi.right, section.right)
    return [(phi, section)]


# ---------------------------------------------------------------------------
# entry points


def show_expr(ctx, e) -> str:
    names = ctx.names() if ctx is not None else []
    return Printer(names, tidy=True).expr(e)


def show_tope(ctx, t) -> str:
    names = ctx.names() if ctx is not None else []
    return Printer(names, tidy=True).tope(t)


def show_shape(shape) -> str:
    return Printer().shape_binder(shape.pat, shape.cube, shape.tope)


def print_declaration(d) -> str:
    p = Printer()
    match d:
        case Import(path):
            return f'import "{path}"'
        case ShapeDef(name, shape):
            return f"def {name} := {show_shape(shape)}"
        case Postulate(name, ty):
            return f"postulate {name} : {p.expr(ty)}"
        case Definition(name, ty, body):
            return f"def {name} : {p.expr(ty)}\n  := {p.expr(body)}"
    raise TypeError(f"not a declaration: {d!r}")


def print_module(mod) -> str:
    return "\n\n".join(print_declaration(d) for d in mod.decls) + "\n"


def install():
    """Route kernel messages through this printer."""
    from . import checker
    checker.Printer.show_expr = staticmethod(show_expr)
    checker.Printer.show_tope = staticmethod(show_tope)

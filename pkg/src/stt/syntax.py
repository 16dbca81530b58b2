"""Abstract syntax for cubes, topes and terms.

All three layers share one de Bruijn index space: a variable counts the
binders (cube or type) between its occurrence and its binding site, so a
name can be resolved before its sort is known.  Name hints and source spans
are excluded from comparison, which makes ``==`` alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union


class SortMismatch(Exception):
    """A cube term was used where a type-layer term was expected, or vice versa."""


class IllFormedCubeTerm(Exception):
    pass


class IllFormedTope(Exception):
    pass


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    length: int = 1

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


def _span():
    return field(default=None, compare=False, repr=False)


def _name(default=""):
    return field(default=default, compare=False)


# ---------------------------------------------------------------------------
# cubes


@dataclass(frozen=True)
class UnitCube:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Interval:
    def __str__(self):
        return "2"


@dataclass(frozen=True)
class Prod:
    left: "Cube"
    right: "Cube"


Cube = Union[UnitCube, Interval, Prod]
UNIT = UnitCube()
INTERVAL = Interval()


def cube_power(n: int) -> Cube:
    """The cube 2^n as a right-nested product (2^0 is the unit cube)."""
    if n == 0:
        return UNIT
    cube: Cube = INTERVAL
    for _ in range(n - 1):
        cube = Prod(INTERVAL, cube)
    return cube


def cube_arity(cube: Cube) -> int:
    """Number of interval leaves of a right-nested power of 2, else -1."""
    match cube:
        case UnitCube():
            return 0
        case Interval():
            return 1
        case Prod(Interval(), rest):
            n = cube_arity(rest)
            return n + 1 if n > 0 else -1
    return -1


# ---------------------------------------------------------------------------
# cube terms


@dataclass(frozen=True)
class CVar:
    index: int
    name: str = _name()


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class CPair:
    left: "CubeTerm"
    right: "CubeTerm"


@dataclass(frozen=True)
class Proj1:
    arg: "CubeTerm"


@dataclass(frozen=True)
class Proj2:
    arg: "CubeTerm"


CubeTerm = Union[CVar, Star, Zero, One, CPair, Proj1, Proj2]
CUBE_TERM_TYPES = (CVar, Star, Zero, One, CPair, Proj1, Proj2)
ZERO = Zero()
ONE = One()
STAR = Star()


def cube_tuple(items: list) -> CubeTerm:
    """Right-nested tuple of cube terms; the empty tuple is the unit point."""
    if not items:
        return STAR
    term = items[-1]
    for item in reversed(items[:-1]):
        term = CPair(item, term)
    return term


def coordinates(base: CubeTerm, n: int) -> list:
    """Projections picking out the n interval coordinates of a point of 2^n."""
    if n == 0:
        return []
    coords = []
    cur = base
    for _ in range(n - 1):
        coords.append(Proj1(cur))
        cur = Proj2(cur)
    coords.append(cur)
    return coords


# ---------------------------------------------------------------------------
# topes


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True)
class Or:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True)
class Eq:
    left: CubeTerm
    right: CubeTerm


@dataclass(frozen=True)
class Leq:
    left: CubeTerm
    right: CubeTerm


Tope = Union[Top, Bot, And, Or, Eq, Leq]
TOP = Top()
BOT = Bot()


def conj(topes) -> Tope:
    topes = list(topes)
    if not topes:
        return TOP
    out = topes[-1]
    for t in reversed(topes[:-1]):
        out = And(t, out)
    return out


def disj(topes) -> Tope:
    topes = list(topes)
    if not topes:
        return BOT
    out = topes[-1]
    for t in reversed(topes[:-1]):
        out = Or(t, out)
    return out


@dataclass(frozen=True)
class Shape:
    """A cube with a tope over a single bound point of that cube (index 0)."""

    cube: Cube
    tope: Tope
    pat: object = _name("t")


# ---------------------------------------------------------------------------
# type-layer terms
#
# A binder pattern is either a name or a pair of patterns; it only guides
# printing.  Every binder binds exactly one variable.


@dataclass(frozen=True)
class Var:
    index: int
    name: str = _name()
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Const:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Universe:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pi:
    dom: "Expr"
    cod: "Expr"
    name: str = _name("x")
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sigma:
    fst: "Expr"
    snd: "Expr"
    name: str = _name("x")
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Id:
    ty: Optional["Expr"]
    lhs: "Expr"
    rhs: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lam:
    body: "Expr"
    pat: object = _name("x")
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PairE:
    fst: "Expr"
    snd: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Fst:
    arg: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Snd:
    arg: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Refl:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class J:
    """Based path induction: J(A, a, C, d, b, p) : C b p."""

    ty: "Expr"
    base: "Expr"
    motive: "Expr"
    refl_case: "Expr"
    target: "Expr"
    path: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ExtType:
    """<{t : cube | shape} -> family [boundary |-> section]>; t is bound in the last four."""

    cube: Cube
    shape: Tope
    boundary: Tope
    family: "Expr"
    section: "Expr"
    pat: object = _name("t")
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ExtLam:
    body: "Expr"
    pat: object = _name("t")
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ExtApp:
    fn: "Expr"
    point: CubeTerm
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class RecBot:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class RecOr:
    left_tope: Tope
    right_tope: Tope
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span()


Expr = Union[
    Var, Const, Universe, Pi, Sigma, Id, Lam, App, PairE, Fst, Snd, Refl, J,
    ExtType, ExtLam, ExtApp, RecBot, RecOr, Zero, One, Star,
]


def span_of(node) -> Optional[Span]:
    return getattr(node, "span", None)


# ---------------------------------------------------------------------------
# variable traversal


def map_vars(node, fn: Callable, depth: int = 0):
    """Rebuild ``node`` with every variable ``v`` under ``d`` local binders
    replaced by ``fn(v, d)``."""
    m = map_vars
    match node:
        case CVar() | Var():
            return fn(node, depth)
        case Star() | Zero() | One() | Top() | Bot() | Universe() | Const() | Refl() | RecBot():
            return node
        case CPair(l, r):
            return CPair(m(l, fn, depth), m(r, fn, depth))
        case Proj1(a):
            return Proj1(m(a, fn, depth))
        case Proj2(a):
            return Proj2(m(a, fn, depth))
        case And(l, r):
            return And(m(l, fn, depth), m(r, fn, depth))
        case Or(l, r):
            return Or(m(l, fn, depth), m(r, fn, depth))
        case Eq(l, r):
            return Eq(m(l, fn, depth), m(r, fn, depth))
        case Leq(l, r):
            return Leq(m(l, fn, depth), m(r, fn, depth))
        case Pi():
            return Pi(m(node.dom, fn, depth), m(node.cod, fn, depth + 1), node.name, node.span)
        case Sigma():
            return Sigma(m(node.fst, fn, depth), m(node.snd, fn, depth + 1), node.name, node.span)
        case Id():
            ty = None if node.ty is None else m(node.ty, fn, depth)
            return Id(ty, m(node.lhs, fn, depth), m(node.rhs, fn, depth), node.span)
        case Lam():
            return Lam(m(node.body, fn, depth + 1), node.pat, node.span)
        case App():
            return App(m(node.fn, fn, depth), m(node.arg, fn, depth), node.span)
        case PairE():
            return PairE(m(node.fst, fn, depth), m(node.snd, fn, depth), node.span)
        case Fst():
            return Fst(m(node.arg, fn, depth), node.span)
        case Snd():
            return Snd(m(node.arg, fn, depth), node.span)
        case J():
            return J(*(m(getattr(node, f), fn, depth) for f in
                       ("ty", "base", "motive", "refl_case", "target", "path")), span=node.span)
        case ExtType():
            d = depth + 1
            return ExtType(node.cube, m(node.shape, fn, d), m(node.boundary, fn, d),
                           m(node.family, fn, d), m(node.section, fn, d), node.pat, node.span)
        case ExtLam():
            return ExtLam(m(node.body, fn, depth + 1), node.pat, node.span)
        case ExtApp():
            return ExtApp(m(node.fn, fn, depth), m(node.point, fn, depth), node.span)
        case RecOr():
            return RecOr(m(node.left_tope, fn, depth), m(node.right_tope, fn, depth),
                         m(node.left, fn, depth), m(node.right, fn, depth), node.span)
    raise TypeError(f"not a syntax node: {node!r}")


def _reindex(v, index):
    if isinstance(v, CVar):
        return CVar(index, v.name)
    return Var(index, v.name, v.span)


def shift(node, amount: int, cutoff: int = 0):
    if amount == 0:
        return node

    def fn(v, depth):
        if v.index >= cutoff + depth:
            return _reindex(v, v.index + amount)
        return v

    return map_vars(node, fn)


def substitute(node, binder: int, replacement):
    """Replace variable ``binder`` by ``replacement`` and remove that binder.

    ``replacement`` lives in the context without the binder; the sort of the
    replacement must match every occurrence (cube term for cube variables).
    """
    is_cube = isinstance(replacement, CUBE_TERM_TYPES)

    def fn(v, depth):
        k = v.index - depth
        if k == binder:
            if isinstance(v, CVar) and not is_cube:
                raise SortMismatch(f"cube variable {v.name or k} replaced by a term")
            if isinstance(v, Var) and isinstance(replacement, (CVar, CPair, Proj1, Proj2)):
                raise SortMismatch(f"variable {v.name or k} replaced by a cube term")
            return shift(replacement, depth)
        if k > binder:
            return _reindex(v, v.index - 1)
        return v

    return map_vars(node, fn)


def instantiate(body, replacement):
    """Substitute for the innermost binder of ``body``."""
    return substitute(body, 0, replacement)


def occurs(node, index: int) -> bool:
    found = []

    def fn(v, depth):
        if v.index - depth == index:
            found.append(v)
        return v

    map_vars(node, fn)
    return bool(found)


def free_indices(node) -> set:
    out = set()

    def fn(v, depth):
        if v.index >= depth:
            out.add(v.index - depth)
        return v

    map_vars(node, fn)
    return out


def alpha_equal(a, b) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class CubeBinder:
    name: str
    cube: Cube


@dataclass(frozen=True)
class TopeAssumption:
    tope: Tope


@dataclass(frozen=True)
class TypeBinder:
    name: str
    type: Expr


class TriContext:
    """Ordered telescope of cube binders, tope assumptions and typed variables.

    Each entry is stored together with the number of binders preceding it,
    so its syntax is shifted on lookup.
    """

    __slots__ = ("entries", "binders", "_cube_cache", "_topes_cache")

    def __init__(self, entries=(), binders=()):
        self.entries = entries
        self.binders = binders
        self._cube_cache = None
        self._topes_cache = None

    @classmethod
    def of_cubes(cls, items) -> "TriContext":
        ctx = cls()
        for name, cube in items:
            ctx = ctx.bind_cube(name, cube)
        return ctx

    @property
    def depth(self) -> int:
        return len(self.binders)

    def _push(self, entry, binds: bool) -> "TriContext":
        item = (entry, len(self.binders))
        binders = self.binders + (item,) if binds else self.binders
        return TriContext(self.entries + (item,), binders)

    def bind_cube(self, name, cube: Cube) -> "TriContext":
        return self._push(CubeBinder(name, cube), True)

    def bind_type(self, name, ty) -> "TriContext":
        return self._push(TypeBinder(name, ty), True)

    def assume(self, tope: Tope) -> "TriContext":
        return self._push(TopeAssumption(tope), False)

    def entry(self, index: int):
        if index < 0 or index >= len(self.binders):
            return None
        return self.binders[-1 - index][0]

    def name_of(self, index: int) -> str:
        e = self.entry(index)
        return pattern_label(e.name) if e is not None else f"#{index}"

    def cube_of(self, index: int) -> Cube:
        e = self.entry(index)
        if e is None:
            raise IllFormedCubeTerm(f"unbound cube variable #{index}")
        if not isinstance(e, CubeBinder):
            raise SortMismatch(f"{pattern_label(e.name)} is not a cube variable")
        return e.cube

    def type_of(self, index: int):
        e = self.entry(index)
        if e is None:
            return None
        if not isinstance(e, TypeBinder):
            raise SortMismatch(f"{pattern_label(e.name)} is a cube variable, not a term")
        return shift(e.type, index + 1)

    def topes(self) -> tuple:
        """Tope assumptions shifted to the current depth."""
        if self._topes_cache is None:
            d = len(self.binders)
            self._topes_cache = tuple(shift(e.tope, d - at) for e, at in self.entries
                                      if isinstance(e, TopeAssumption))
        return self._topes_cache

    def names(self) -> list:
        """Binder names, outermost first."""
        return [e.name for e, _ in self.binders]

    def cube_view(self):
        """Project onto the cube binders.

        Returns the cube-only context as (name, cube) pairs, a translator
        from this context's indices into it, and the inverse translator.
        """
        if self._cube_cache is None:
            d = len(self.binders)
            positions = {}
            levels = []
            cubes = []
            for level, (e, _) in enumerate(self.binders):
                if isinstance(e, CubeBinder):
                    positions[level] = len(cubes)
                    levels.append(level)
                    cubes.append((pattern_label(e.name), e.cube))
            n = len(cubes)

            def translate(node):
                def fn(v, depth):
                    k = v.index - depth
                    if k < 0:
                        return v
                    level = d - 1 - k
                    if level not in positions:
                        if level < 0:
                            raise IllFormedCubeTerm(f"unbound variable #{k}")
                        raise SortMismatch(f"{self.name_of(k)} is not a cube variable")
                    return CVar(n - 1 - positions[level] + depth, v.name)

                return map_vars(node, fn)

            def untranslate(node):
                def fn(v, depth):
                    k = v.index - depth
                    if k < 0:
                        return v
                    level = levels[n - 1 - k]
                    return CVar(d - 1 - level + depth, v.name)

                return map_vars(node, fn)

            self._cube_cache = (tuple(cubes), translate, untranslate)
        return self._cube_cache


def pattern_label(pat) -> str:
    if isinstance(pat, tuple):
        return "(" + ",".join(pattern_label(p) for p in pat) + ")"
    return pat


def nest_pattern(names):
    """Right-nested binary pattern from a flat list of names."""
    names = list(names)
    if len(names) == 1:
        return names[0]
    return (names[0], nest_pattern(names[1:]))


def flatten_pattern(pat) -> list:
    if isinstance(pat, tuple):
        return [pat[0]] + flatten_pattern(pat[1]) if isinstance(pat[1], tuple) else [pat[0], pat[1]]
    return [pat]


# ---------------------------------------------------------------------------
# cube layer judgments


def infer_cube(ctx, t: CubeTerm) -> Cube:
    """The cube of a cube term; ``ctx`` needs only ``cube_of``."""
    match t:
        case CVar(i):
            return ctx.cube_of(i)
        case Star():
            return UNIT
        case Zero() | One():
            return INTERVAL
        case CPair(l, r):
            return Prod(infer_cube(ctx, l), infer_cube(ctx, r))
        case Proj1(a) | Proj2(a):
            c = infer_cube(ctx, a)
            if not isinstance(c, Prod):
                raise IllFormedCubeTerm("projection from a non-product cube")
            return c.left if isinstance(t, Proj1) else c.right
    raise IllFormedCubeTerm(f"not a cube term: {t!r}")


def _beta(t: CubeTerm) -> CubeTerm:
    match t:
        case Proj1(a):
            a = _beta(a)
            return a.left if isinstance(a, CPair) else Proj1(a)
        case Proj2(a):
            a = _beta(a)
            return a.right if isinstance(a, CPair) else Proj2(a)
        case CPair(l, r):
            return CPair(_beta(l), _beta(r))
    return t


def _eta(t: CubeTerm, cube: Cube) -> CubeTerm:
    match cube:
        case UnitCube():
            return STAR
        case Interval():
            return t
        case Prod(left, right):
            if isinstance(t, CPair):
                return CPair(_eta(t.left, left), _eta(t.right, right))
            return CPair(_eta(Proj1(t), left), _eta(Proj2(t), right))
    raise IllFormedCubeTerm(f"not a cube: {cube!r}")


def normalize_cube(ctx, t: CubeTerm) -> CubeTerm:
    """Beta-eta normal form: no projection of a pair, eta-long at products,
    the unit point at the unit cube."""
    cube = infer_cube(ctx, t)
    return _eta(_beta(t), cube)


def normalize_cube_at(t: CubeTerm, cube: Cube) -> CubeTerm:
    return _eta(_beta(t), cube)


def beta_cube(t: CubeTerm) -> CubeTerm:
    """Contract projections of pairs."""
    return _beta(t)


def beta_tope(tope: Tope) -> Tope:
    match tope:
        case And(l, r):
            return And(beta_tope(l), beta_tope(r))
        case Or(l, r):
            return Or(beta_tope(l), beta_tope(r))
        case Eq(a, b):
            return Eq(_beta(a), _beta(b))
        case Leq(a, b):
            return Leq(_beta(a), _beta(b))
    return tope

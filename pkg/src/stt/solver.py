"""Decision procedure for tope entailment over a strict interval.

Every model of the theory is a finite total preorder on the interval terms
a query mentions, with 0 strictly below 1 and all terms between them.  The
procedure closes the hypotheses under transitivity, then case splits on
undecided comparisons until the goal is decided in every branch.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .syntax import (
    And, Bot, CPair, CVar, Cube, Eq, IllFormedCubeTerm, IllFormedTope, Interval,
    Leq, One, Or, Prod, Proj1, Proj2, SortMismatch, Top, UnitCube, Zero, BOT, ONE,
    TOP, ZERO, infer_cube, normalize_cube_at,
)


class AtomOutOfUniverse(Exception):
    pass


class CubeContext:
    """Cube variables, outermost first; index 0 is the last entry."""

    __slots__ = ("items",)

    def __init__(self, items=()):
        self.items = tuple(items)

    def cube_of(self, index: int) -> Cube:
        if not 0 <= index < len(self.items):
            raise IllFormedCubeTerm(f"unbound cube variable #{index}")
        return self.items[-1 - index][1]

    def name_of(self, index: int) -> str:
        return self.items[-1 - index][0]

    def __len__(self):
        return len(self.items)

    def __eq__(self, other):
        return isinstance(other, CubeContext) and self.items == other.items

    def __hash__(self):
        return hash(self.items)


def as_cube_context(ctx) -> CubeContext:
    if isinstance(ctx, CubeContext):
        return ctx
    return CubeContext(ctx)


# ---------------------------------------------------------------------------
# normal topes


def _split_eq(a, b, cube):
    match cube:
        case UnitCube():
            return TOP
        case Interval():
            return _literal(Eq, a, b)
        case Prod(left, right):
            return _and(_split_eq(a.left, b.left, left), _split_eq(a.right, b.right, right))
    raise IllFormedTope(f"not a cube: {cube!r}")


def _literal(kind, a, b):
    if a == b:
        return TOP
    if kind is Leq and (isinstance(a, Zero) or isinstance(b, One)):
        return TOP
    if kind is Eq and isinstance(b, (Zero, One)) and not isinstance(a, (Zero, One)):
        a, b = b, a
    if isinstance(a, (Zero, One)) and isinstance(b, (Zero, One)):
        # 0 = 1 and 1 <= 0 are refuted by the endpoint axioms
        return BOT
    return kind(a, b)


def _and(a, b):
    if isinstance(a, Bot) or isinstance(b, Bot):
        return BOT
    if isinstance(a, Top):
        return b
    if isinstance(b, Top):
        return a
    return And(a, b)


def _or(a, b):
    if isinstance(a, Top) or isinstance(b, Top):
        return TOP
    if isinstance(a, Bot):
        return b
    if isinstance(b, Bot):
        return a
    return Or(a, b)


def _cube(ctx, t):
    try:
        return infer_cube(ctx, t)
    except (IllFormedCubeTerm, SortMismatch) as exc:
        raise IllFormedTope(str(exc)) from exc


def normalize_tope(ctx, tope):
    """Rewrite to a tope whose comparisons are between interval atoms.

    Atoms are 0, 1 and projection paths of variables.  Equalities at
    product cubes split componentwise and trivial literals fold away.
    """
    ctx = as_cube_context(ctx)
    match tope:
        case Top() | Bot():
            return tope
        case And(l, r):
            return _and(normalize_tope(ctx, l), normalize_tope(ctx, r))
        case Or(l, r):
            return _or(normalize_tope(ctx, l), normalize_tope(ctx, r))
        case Eq(a, b):
            ca, cb = _cube(ctx, a), _cube(ctx, b)
            if ca != cb:
                raise IllFormedTope("equality between points of different cubes")
            return _split_eq(normalize_cube_at(a, ca), normalize_cube_at(b, cb), ca)
        case Leq(a, b):
            if not (isinstance(_cube(ctx, a), Interval) and isinstance(_cube(ctx, b), Interval)):
                raise IllFormedTope("inequality between points outside the interval")
            return _literal(Leq, normalize_cube_at(a, INTERVAL_), normalize_cube_at(b, INTERVAL_))
    raise IllFormedTope(f"not a tope: {tope!r}")


INTERVAL_ = Interval()


def atoms_of(tope, out=None) -> list:
    """Interval atoms of a normal tope in first-occurrence order."""
    if out is None:
        out = []
    match tope:
        case And(l, r) | Or(l, r):
            atoms_of(l, out)
            atoms_of(r, out)
        case Eq(a, b) | Leq(a, b):
            for x in (a, b):
                if x not in out:
                    out.append(x)
    return out


def dnf(tope) -> list:
    """Disjunctive normal form of a normal tope as a list of literal tuples."""
    match tope:
        case Top():
            return [()]
        case Bot():
            return []
        case Or(l, r):
            return dnf(l) + dnf(r)
        case And(l, r):
            return [a + b for a in dnf(l) for b in dnf(r)]
    return [(tope,)]


def atom_key(ctx: CubeContext, t):
    """Total term order used to pick class representatives: 0, 1, then
    variables by binding level (outermost first), then projection path."""
    match t:
        case Zero():
            return (0,)
        case One():
            return (1,)
    path = []
    while isinstance(t, (Proj1, Proj2)):
        path.append(1 if isinstance(t, Proj1) else 2)
        t = t.arg
    if not isinstance(t, CVar):
        raise AtomOutOfUniverse(f"not an interval atom: {t!r}")
    return (2, len(ctx) - 1 - t.index, tuple(reversed(path)))


# ---------------------------------------------------------------------------
# theory interface

NONE, LE, LT = 0, 1, 2


class StrictInterval:
    """The strict interval: a total order with distinct endpoints."""

    name = "strict-interval"

    @staticmethod
    def axioms(index: dict):
        """Initial constraints for a universe: 0 < 1 and 0 <= x <= 1."""
        z, o = index[ZERO], index[ONE]
        yield z, o, LT
        for i in index.values():
            if i not in (z, o):
                yield z, i, LE
                yield i, o, LE

    @staticmethod
    def literal_constraints(lit, index):
        a, b = index[lit.left], index[lit.right]
        if isinstance(lit, Leq):
            return [(a, b, LE)]
        return [(a, b, LE), (b, a, LE)]

    @staticmethod
    def split(lit, index):
        """Exhaustive refinements of an undecided literal."""
        a, b = index[lit.left], index[lit.right]
        if isinstance(lit, Leq):
            return [[(a, b, LE)], [(b, a, LT)]]
        return [[(a, b, LE), (b, a, LE)], [(a, b, LT)], [(b, a, LT)]]


THEORY = StrictInterval()


class State:
    """Closed strictness matrix over an atom universe.

    ``rel[i][j]`` is LE when i <= j is known and LT when i < j is known.
    """

    __slots__ = ("atoms", "index", "rel", "consistent")

    def __init__(self, atoms, index, rel, consistent=True):
        self.atoms = atoms
        self.index = index
        self.rel = rel
        self.consistent = consistent

    @classmethod
    def initial(cls, atoms, theory=THEORY):
        atoms = [ZERO, ONE] + [a for a in atoms if not isinstance(a, (Zero, One))]
        index = {a: i for i, a in enumerate(atoms)}
        n = len(atoms)
        rel = [[LE if i == j else NONE for j in range(n)] for i in range(n)]
        state = cls(atoms, index, rel)
        for a, b, s in theory.axioms(index):
            state.add(a, b, s)
        return state

    def copy(self):
        return State(self.atoms, self.index, [row[:] for row in self.rel], self.consistent)

    def extend(self, atoms, theory=THEORY):
        new = [a for a in atoms if a not in self.index]
        if not new:
            return self
        atoms = self.atoms + new
        index = dict(self.index)
        n0 = len(self.atoms)
        for k, a in enumerate(new):
            index[a] = n0 + k
        n = len(atoms)
        rel = [row + [NONE] * len(new) for row in self.rel]
        rel += [[NONE] * n for _ in new]
        for k in range(n0, n):
            rel[k][k] = LE
        state = State(atoms, index, rel, self.consistent)
        z, o = index[ZERO], index[ONE]
        for k in range(n0, n):
            state.add(z, k, LE)
            state.add(k, o, LE)
        return state

    def add(self, a, b, strength):
        if not self.consistent:
            return
        rel = self.rel
        if rel[a][b] >= strength:
            return
        n = len(rel)
        below = [i for i in range(n) if rel[i][a]]
        above = [j for j in range(n) if rel[b][j]]
        for i in below:
            ri = rel[i]
            sa = max(ri[a], strength)
            for j in above:
                s = max(sa, rel[b][j])
                if ri[j] < s:
                    ri[j] = s
        for i in range(n):
            if rel[i][i] == LT:
                self.consistent = False
                return

    def le(self, a, b):
        return self.rel[self.index[a]][self.index[b]] > NONE

    def lt(self, a, b):
        return self.rel[self.index[a]][self.index[b]] == LT

    def decided(self, i, j):
        r, s = self.rel[i][j], self.rel[j][i]
        return r == LT or s == LT or (r and s)


def apply(state: State, constraints) -> State:
    out = state.copy()
    for a, b, s in constraints:
        out.add(a, b, s)
    return out


def evaluate(state: State, tope):
    """Kleene evaluation: True, False, or None when undecided."""
    match tope:
        case Top():
            return True
        case Bot():
            return False
        case And(l, r):
            x = evaluate(state, l)
            if x is False:
                return False
            y = evaluate(state, r)
            if y is False:
                return False
            return True if x and y else None
        case Or(l, r):
            x = evaluate(state, l)
            if x is True:
                return True
            y = evaluate(state, r)
            if y is True:
                return True
            return False if x is False and y is False else None
        case Leq(a, b):
            i, j = state.index[a], state.index[b]
            if state.rel[i][j]:
                return True
            if state.rel[j][i] == LT:
                return False
            return None
        case Eq(a, b):
            i, j = state.index[a], state.index[b]
            r, s = state.rel[i][j], state.rel[j][i]
            if r and s:
                return True
            if r == LT or s == LT:
                return False
            return None
    raise IllFormedTope(f"not a normal tope: {tope!r}")


def _undecided_literal(state, tope):
    match tope:
        case And(l, r) | Or(l, r):
            return _undecided_literal(state, l) or _undecided_literal(state, r)
        case Eq() | Leq():
            return tope if evaluate(state, tope) is None else None
    return None


def _search(state, goal, theory=THEORY):
    """Find a consistent refinement of ``state`` falsifying ``goal``."""
    value = evaluate(state, goal)
    if value is True:
        return None
    if value is False:
        return state
    lit = _undecided_literal(state, goal)
    for refinement in theory.split(lit, state.index):
        sub = apply(state, refinement)
        if not sub.consistent:
            continue
        found = _search(sub, goal, theory)
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# hypothesis preparation (memoized)


@functools.lru_cache(maxsize=4096)
def _prepare(ctx: CubeContext, hyps: tuple):
    normal = TOP
    for h in hyps:
        normal = _and(normal, normalize_tope(ctx, h))
    states = []
    atoms = atoms_of(normal)
    for conjunct in dnf(normal):
        state = State.initial(atoms)
        for lit in conjunct:
            for a, b, s in THEORY.literal_constraints(lit, state.index):
                state.add(a, b, s)
        if state.consistent:
            states.append(state)
    return tuple(states)


@functools.lru_cache(maxsize=65536)
def _entails(ctx: CubeContext, hyps: tuple, goal):
    g = normalize_tope(ctx, goal)
    atoms = atoms_of(g)
    for state in _prepare(ctx, hyps):
        if _search(state.extend(atoms), g) is not None:
            return False
    return True


def entails(ctx, hyps, goal) -> bool:
    """Whether ``hyps`` entail ``goal`` over the cube context ``ctx``."""
    return _entails(as_cube_context(ctx), tuple(hyps), goal)


def consistent(ctx, hyps) -> bool:
    return bool(_prepare(as_cube_context(ctx), tuple(hyps)))


def countermodel(ctx, hyps, goal):
    """A total branch satisfying ``hyps`` and refuting ``goal`` with the
    fewest classes, or None when the entailment holds."""
    ctx = as_cube_context(ctx)
    g = normalize_tope(ctx, goal)
    best = None
    for branch in saturate_branches(ctx, list(hyps) + [], extra_atoms=atoms_of(g)):
        state = branch.state
        if evaluate(state, g) is False:
            if best is None or len(branch.classes) < len(best.classes):
                best = branch
    return best


# ---------------------------------------------------------------------------
# branches


@dataclass(frozen=True)
class Branch:
    """A total preorder: equivalence classes listed from 0 upwards."""

    classes: tuple
    ctx: CubeContext
    consistent: bool = True

    @property
    def state(self) -> State:
        atoms = [a for cls in self.classes for a in cls]
        state = State.initial(atoms)
        pos = {a: k for k, cls in enumerate(self.classes) for a in cls}
        for a in atoms:
            for b in atoms:
                if pos[a] < pos[b]:
                    state.add(state.index[a], state.index[b], LT)
                elif pos[a] == pos[b]:
                    state.add(state.index[a], state.index[b], LE)
        return state

    def class_of(self, t):
        for k, cls in enumerate(self.classes):
            if t in cls:
                return k
        raise AtomOutOfUniverse(f"term not in the branch universe: {t!r}")

    def holds(self, tope) -> bool:
        value = evaluate(self.state.extend(atoms_of(tope)), normalize_tope(self.ctx, tope))
        if value is None:
            raise AtomOutOfUniverse("tope mentions atoms outside the branch")
        return value


def _total(state: State, key) -> tuple:
    n = len(state.atoms)
    seen = set()
    classes = []
    for i in range(n):
        if i in seen:
            continue
        cls = [j for j in range(n) if state.rel[i][j] and state.rel[j][i]]
        seen.update(cls)
        classes.append(cls)
    classes.sort(key=lambda cls: sum(1 for j in range(n) if state.rel[j][cls[0]] == LT))
    return tuple(tuple(sorted((state.atoms[j] for j in cls), key=key)) for cls in classes)


def _refine(state: State):
    n = len(state.atoms)
    for i in range(n):
        for j in range(i + 1, n):
            if not state.decided(i, j):
                if state.rel[i][j]:
                    options = [[(i, j, LT)], [(j, i, LE)]]
                elif state.rel[j][i]:
                    options = [[(j, i, LT)], [(i, j, LE)]]
                else:
                    options = [[(i, j, LE), (j, i, LE)], [(i, j, LT)], [(j, i, LT)]]
                for option in options:
                    sub = apply(state, option)
                    if sub.consistent:
                        yield from _refine(sub)
                return
    yield state


def saturate_branches(ctx, hyps, extra_atoms=()) -> list:
    """All total preorders of the mentioned atoms satisfying ``hyps``."""
    ctx = as_cube_context(ctx)
    key = functools.partial(atom_key, ctx)
    extra = []
    for h in hyps:
        extra = atoms_of(normalize_tope(ctx, h), extra)
    for a in extra_atoms:
        if a not in extra:
            extra.append(a)
    out = []
    seen = set()
    for state in _prepare(ctx, tuple(hyps)):
        for total in _refine(state.extend(extra)):
            classes = _total(total, key)
            if classes not in seen:
                seen.add(classes)
                out.append(Branch(classes, ctx))
    out.sort(key=lambda b: [[key(a) for a in cls] for cls in b.classes])
    return out


def branches_over(ctx, hyps) -> list:
    """Branches over every interval atom of the context, not only mentioned ones."""
    ctx = as_cube_context(ctx)
    return saturate_branches(ctx, hyps, extra_atoms=context_atoms(ctx))


def context_atoms(ctx) -> list:
    ctx = as_cube_context(ctx)
    out = []
    n = len(ctx)
    for level, (_, cube) in enumerate(ctx.items):
        base = CVar(n - 1 - level, ctx.items[level][0])
        out.extend(_leaves(base, cube))
    return out


def _leaves(t, cube):
    match cube:
        case Interval():
            return [t]
        case Prod(l, r):
            return _leaves(Proj1(t), l) + _leaves(Proj2(t), r)
    return []


def canonical_rep(branch: Branch, t):
    """Least member of the class of ``t`` (componentwise at products)."""
    if isinstance(t, CPair):
        return CPair(canonical_rep(branch, t.left), canonical_rep(branch, t.right))
    return branch.classes[branch.class_of(t)][0]


# ---------------------------------------------------------------------------
# formatting for countermodels


def format_atom(ctx: CubeContext, t) -> str:
    path = []
    base = t
    while isinstance(base, (Proj1, Proj2)):
        path.append(1 if isinstance(base, Proj1) else 2)
        base = base.arg
    if isinstance(base, CVar):
        name = ctx.name_of(base.index)
        while path and isinstance(name, tuple):
            name = name[0] if path.pop() == 1 else name[1]
        if not isinstance(name, tuple) and not path:
            return name
    match t:
        case Zero():
            return "0"
        case One():
            return "1"
        case CVar(i):
            name = ctx.name_of(i)
            return name if isinstance(name, str) else repr(name)
        case Proj1(a):
            return f"π₁({format_atom(ctx, a)})"
        case Proj2(a):
            return f"π₂({format_atom(ctx, a)})"
    return repr(t)


def format_branch(branch: Branch) -> str:
    """Render a branch as endpoint equations plus a chain for interior atoms,
    for example ``x≡1, y≡0`` or ``x≡0, 0 < y < 1``."""
    ctx = branch.ctx
    key = functools.partial(atom_key, ctx)
    parts = []
    zero_k, one_k = branch.class_of(ZERO), branch.class_of(ONE)
    atoms = sorted((a for cls in branch.classes for a in cls if not isinstance(a, (Zero, One))), key=key)
    for a in atoms:
        k = branch.class_of(a)
        if k == zero_k:
            parts.append(f"{format_atom(ctx, a)}≡0")
        elif k == one_k:
            parts.append(f"{format_atom(ctx, a)}≡1")
    interior = [cls for k, cls in enumerate(branch.classes) if k not in (zero_k, one_k)]
    if interior:
        chain = ["0"] + ["≡".join(format_atom(ctx, a) for a in cls) for cls in interior] + ["1"]
        parts.append(" < ".join(chain))
    return ", ".join(parts) if parts else "(no atoms)"


def cache_clear():
    _prepare.cache_clear()
    _entails.cache_clear()

"""Brute-force reference semantics for topes.

Independent of the solver: interval points are interpreted as fractions in
[0, 1] and topes are evaluated classically.  With k interval coordinates in
play, the grid {0, 1/(k+1), ..., 1} realizes every weak order of them with
0 < 1 at the ends, so checking all grid assignments decides entailment.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .syntax import (
    And, Bot, CPair, CVar, Eq, Interval, Leq, One, Or, Prod, Proj1, Proj2, Star,
    Top, Zero,
)


def _leaf_count(cube) -> int:
    match cube:
        case Interval():
            return 1
        case Prod(l, r):
            return _leaf_count(l) + _leaf_count(r)
    return 0


def _build(cube, values):
    match cube:
        case Interval():
            return next(values)
        case Prod(l, r):
            left = _build(l, values)
            return (left, _build(r, values))
    return ()


def models(ctx):
    """Every grid assignment for a context of (name, cube) pairs, outermost first."""
    cubes = [cube for _, cube in ctx]
    k = sum(_leaf_count(c) for c in cubes)
    grid = [Fraction(i, k + 1) for i in range(k + 2)]
    for values in product(grid, repeat=k):
        it = iter(values)
        yield [_build(c, it) for c in cubes]


def eval_point(env, t):
    """Value of a cube term; ``env`` lists values outermost first."""
    match t:
        case CVar(i):
            return env[-1 - i]
        case Zero():
            return Fraction(0)
        case One():
            return Fraction(1)
        case Star():
            return ()
        case CPair(l, r):
            return (eval_point(env, l), eval_point(env, r))
        case Proj1(a):
            return eval_point(env, a)[0]
        case Proj2(a):
            return eval_point(env, a)[1]
    raise ValueError(f"not a cube term: {t!r}")


def holds(env, tope) -> bool:
    match tope:
        case Top():
            return True
        case Bot():
            return False
        case And(l, r):
            return holds(env, l) and holds(env, r)
        case Or(l, r):
            return holds(env, l) or holds(env, r)
        case Eq(a, b):
            return eval_point(env, a) == eval_point(env, b)
        case Leq(a, b):
            return eval_point(env, a) <= eval_point(env, b)
    raise ValueError(f"not a tope: {tope!r}")


def satisfying(ctx, hyps) -> list:
    return [env for env in models(ctx) if all(holds(env, h) for h in hyps)]


def oracle_entails(ctx, hyps, goal) -> bool:
    return all(holds(env, goal) for env in satisfying(ctx, hyps))


def oracle_countermodel(ctx, hyps, goal):
    for env in satisfying(ctx, hyps):
        if not holds(env, goal):
            return env
    return None

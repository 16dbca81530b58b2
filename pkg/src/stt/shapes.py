"""Simplices, boundaries, horns and the join calculus on augmented shapes.

A shape binds one point variable (index 0) of its cube; the coordinates of
a point of 2^n are the projections t1 = π₁p, t2 = π₁π₂p, ..., tn = π₂...π₂p.
Shapes are compared by mutual entailment, never syntactically.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import solver
from .syntax import (
    And, CVar, Eq, Leq, One, Or, Proj1, Proj2, Shape, Zero, ONE, TOP, ZERO, Prod, UNIT,
    beta_tope, conj, coordinates, cube_arity, cube_power, cube_tuple, disj, map_vars, nest_pattern, shift,
)

MAX_DIM = 8


class Overflow(Exception):
    pass


class OutOfRange(Exception):
    pass


class ArityMismatch(Exception):
    pass


def point(n: int):
    return coordinates(CVar(0, "t"), n)


def coordinate_names(n: int, stem: str = "t"):
    if n == 0 or n == 1:
        return stem
    return nest_pattern(f"{stem}{i}" for i in range(1, n + 1))


def replace_point(tope, replacement):
    """Substitute for the point variable of a closed shape tope.

    ``replacement`` may mention the variables of the new context freely.
    """

    def fn(v, depth):
        if v.index == depth:
            return shift(replacement, depth)
        return v

    return prune(beta_tope(map_vars(tope, fn)))


def prune(tope):
    """Drop atoms that hold at every point, such as t <= 1 and 0 <= t."""
    match tope:
        case Leq(_, One()) | Leq(Zero(), _):
            return TOP
        case Leq(a, b) | Eq(a, b) if a == b:
            return TOP
        case And(l, r):
            l, r = prune(l), prune(r)
            return r if l == TOP else l if r == TOP else And(l, r)
        case Or(l, r):
            l, r = prune(l), prune(r)
            return TOP if TOP in (l, r) else Or(l, r)
    return tope


def _check_dim(n: int):
    if n < 0:
        raise OutOfRange(f"negative dimension {n}")
    if n > MAX_DIM:
        raise Overflow(f"dimension {n} exceeds the bound {MAX_DIM}")


def _chain(ts, skip=None):
    """Links t_{i+1} <= t_i from the bottom, over 1 >= t_1 >= ... >= t_n >= 0.

    ``skip`` names a link index that is replaced by an equality.  Links with
    an endpoint are trivially true and are dropped unless they are ``skip``.
    """
    c = [ONE] + list(ts) + [ZERO]
    parts = []
    for i in reversed(range(len(c) - 1)):
        lo, hi = c[i + 1], c[i]
        if i == skip:
            parts.append(Eq(hi, lo) if isinstance(lo, Zero) else Eq(lo, hi))
        elif not isinstance(lo, Zero) and not isinstance(hi, One):
            parts.append(Leq(lo, hi))
    return conj(parts)


def simplex(n: int) -> Shape:
    _check_dim(n)
    if n == 0:
        return Shape(UNIT, TOP, "t")
    return Shape(cube_power(n), _chain(point(n)), coordinate_names(n))


def _faces(n, omit=None):
    ts = point(n)
    return disj(_chain(ts, skip=i) for i in reversed(range(n + 1)) if i != omit)


def boundary(n: int) -> Shape:
    _check_dim(n)
    if not 1 <= n <= 3:
        raise OutOfRange(f"boundary is provided for 1 <= n <= 3, not {n}")
    return Shape(cube_power(n), _faces(n), coordinate_names(n))


def horn(n: int, k: int) -> Shape:
    """Inner horn: the boundary without the face opposite vertex k."""
    _check_dim(n)
    if not (2 <= n <= 3 and 0 < k < n):
        raise OutOfRange(f"only inner horns with n <= 3 are provided, not ({n}, {k})")
    if (n, k) == (2, 1):
        t1, t2 = point(2)
        return Shape(cube_power(2), Or(Eq(t2, ZERO), Eq(t1, ONE)), coordinate_names(2))
    return Shape(cube_power(n), _faces(n, omit=n - k), coordinate_names(n))


def diagonal() -> Shape:
    """The diagonal 1-simplex inside the 2-simplex."""
    t1, t2 = point(2)
    return Shape(cube_power(2), Eq(t2, t1), coordinate_names(2))


def diagonal_boundary() -> Shape:
    t1, t2 = point(2)
    return Shape(cube_power(2), And(Eq(t2, t1), Or(Eq(t1, ZERO), Eq(t1, ONE))), coordinate_names(2))


def square() -> Shape:
    return Shape(cube_power(2), TOP, ("t", "s"))


def square_halves():
    """The two triangles covering the square and their common diagonal."""
    t, s = point(2)
    return (Shape(cube_power(2), Leq(s, t), ("t", "s")),
            Shape(cube_power(2), Leq(t, s), ("t", "s")),
            Shape(cube_power(2), Eq(t, s), ("t", "s")))


def product(a: Shape, b: Shape) -> Shape:
    p = CVar(0, "p")
    return Shape(Prod(a.cube, b.cube),
                 And(replace_point(a.tope, Proj1(p)), replace_point(b.tope, Proj2(p))),
                 (a.pat, b.pat))


def union(a: Shape, b: Shape) -> Shape:
    if a.cube != b.cube:
        raise ArityMismatch("union of shapes in different cubes")
    return Shape(a.cube, Or(a.tope, b.tope), a.pat)


def intersection(a: Shape, b: Shape) -> Shape:
    if a.cube != b.cube:
        raise ArityMismatch("intersection of shapes in different cubes")
    return Shape(a.cube, And(a.tope, b.tope), a.pat)


def _ctx(shape: Shape):
    return [("t", shape.cube)]


def includes(sub: Shape, sup: Shape) -> bool:
    """Whether ``sub`` is a subshape of ``sup`` (same cube, tope entailment)."""
    if sub.cube != sup.cube:
        return False
    return solver.entails(_ctx(sub), [sub.tope], sup.tope)


def equivalent(a: Shape, b: Shape) -> bool:
    return includes(a, b) and includes(b, a)


# ---------------------------------------------------------------------------
# augmented shapes


@dataclass(frozen=True)
class AugmentedShape:
    """A shape in 2^(n+2) with coordinates (t₋, t1..tn, t₊)."""

    ambient: Shape
    n: int

    @property
    def restriction(self) -> Shape:
        return restrict(self)


def augment(ambient: Shape) -> AugmentedShape:
    n = cube_arity(ambient.cube) - 2
    if n < 0:
        raise ArityMismatch("an augmented shape needs a cube 2^k with k >= 2")
    return AugmentedShape(ambient, n)


def restrict(a: AugmentedShape) -> Shape:
    """Set the first coordinate to 1 and the last to 0."""
    inner = point(a.n)
    tope = replace_point(a.ambient.tope, cube_tuple([ONE] + inner + [ZERO]))
    return Shape(cube_power(a.n), tope, coordinate_names(a.n))


def augmented_simplex(n: int) -> AugmentedShape:
    return AugmentedShape(simplex(n + 2), n)


def augmented_empty_boundary() -> AugmentedShape:
    """The empty boundary of the point: t₊ ≡ t₋."""
    lo, hi = point(2)[1], point(2)[0]
    return AugmentedShape(Shape(cube_power(2), Eq(lo, hi), ("tm", "tp")), 0)


def augmented_interval_boundary() -> AugmentedShape:
    """The two endpoints of the arrow: (t₊ ≡ t₁ ≤ t₋) ∨ (t₊ ≤ t₁ ≡ t₋)."""
    tm, t1, tp = point(3)
    tope = Or(And(Eq(tp, t1), Leq(t1, tm)), And(Leq(tp, t1), Eq(t1, tm)))
    return AugmentedShape(Shape(cube_power(3), tope, nest_pattern(["tm", "t1", "tp"])), 1)


def gluing(a: AugmentedShape, b: AugmentedShape) -> AugmentedShape:
    """Identify the last coordinate of ``a`` with the first of ``b``."""
    n, m = a.n, b.n
    coords = point(n + m + 3)
    left = coords[: n + 2]
    right = coords[n + 1:]
    tope = And(replace_point(a.ambient.tope, cube_tuple(left)),
               replace_point(b.ambient.tope, cube_tuple(right)))
    names = nest_pattern(["tm"] + [f"t{i}" for i in range(1, n + m + 2)] + ["tp"])
    return AugmentedShape(Shape(cube_power(n + m + 3), tope, names), n + m + 1)


def join(a: AugmentedShape, b: AugmentedShape) -> AugmentedShape:
    """The join; its underlying shape is the restriction of the gluing."""
    return gluing(a, b)


def pushout_join(i: tuple, j: tuple) -> tuple:
    """Pushout join of inclusions A ⊆ B and C ⊆ D: (A⋆D) ∪ (B⋆C) ⊆ B⋆D."""
    (a, b), (c, d) = i, j
    if a.n != b.n or c.n != d.n:
        raise ArityMismatch("inclusion between augmented shapes of different dimension")
    left, right = join(a, d), join(b, c)
    sub = AugmentedShape(Shape(left.ambient.cube, Or(left.ambient.tope, right.ambient.tope),
                               left.ambient.pat), left.n)
    return sub, join(b, d)


def join_simplex(n: int) -> Shape:
    """The n-simplex generated by joining points."""
    _check_dim(n)
    acc = augmented_simplex(0)
    for _ in range(n):
        acc = join(acc, augmented_simplex(0))
    return restrict(acc)


def join_boundary(n: int) -> Shape:
    """Boundary of the n-simplex by iterated pushout join with the point's boundary."""
    _check_dim(n)
    if n < 1:
        raise OutOfRange("the boundary recursion starts at n = 1")
    point_incl = (augmented_empty_boundary(), augmented_simplex(0))
    acc = (augmented_interval_boundary(), augmented_simplex(1))
    for _ in range(n - 1):
        acc = pushout_join(acc, point_incl)
    return restrict(acc[0])


def join_boundary_from_points(n: int) -> Shape:
    """Same recursion, but starting from the empty boundary of the point."""
    _check_dim(n)
    point_incl = (augmented_empty_boundary(), augmented_simplex(0))
    acc = point_incl
    for _ in range(n):
        acc = pushout_join(acc, point_incl)
    return restrict(acc[0])

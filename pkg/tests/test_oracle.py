from fractions import Fraction

from hypothesis import given

from stt import oracle
from stt.syntax import CPair, CVar, Eq, INTERVAL, Leq, ONE, Prod, Proj1, Proj2, UNIT, ZERO

from conftest import interval_ctx, topes


def test_grid_size():
    assert len(list(oracle.models([]))) == 1
    assert len(list(oracle.models(interval_ctx("x")))) == 3
    assert len(list(oracle.models(interval_ctx("x", "y")))) == 16
    assert len(list(oracle.models([("p", Prod(INTERVAL, INTERVAL)), ("u", UNIT)]))) == 16


def test_products_build_nested_values():
    envs = list(oracle.models([("p", Prod(INTERVAL, Prod(INTERVAL, INTERVAL)))]))
    assert all(isinstance(e[0], tuple) and isinstance(e[0][1], tuple) for e in envs)
    env = [(Fraction(1, 4), (Fraction(1, 2), Fraction(0)))]
    p = CVar(0, "p")
    assert oracle.eval_point(env, Proj1(Proj2(p))) == Fraction(1, 2)
    assert oracle.eval_point(env, CPair(ZERO, Proj1(p))) == (0, Fraction(1, 4))


def test_first_countermodel_for_leq():
    x, y = CVar(1, "x"), CVar(0, "y")
    env = oracle.oracle_countermodel(interval_ctx("x", "y"), [], Leq(x, y))
    assert env == [Fraction(1, 3), Fraction(0)]
    assert oracle.oracle_countermodel(interval_ctx("x", "y"), [Leq(x, y)], Leq(x, y)) is None


def test_endpoints_are_distinct():
    assert oracle.oracle_entails([], [Eq(ZERO, ONE)], Eq(ONE, ZERO))
    assert not oracle.satisfying([], [Eq(ZERO, ONE)])


@given(topes(2, 6))
def test_weak_orders_are_realized(t):
    # the grid with one spare point decides the same as a finer grid
    coarse = interval_ctx("v0", "v1")
    fine = [env for env in oracle.models(interval_ctx("a", "b", "v0", "v1"))]
    assert oracle.oracle_entails(coarse, [], t) == all(oracle.holds(env, t) for env in fine)

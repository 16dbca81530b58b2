"""One test per acceptance criterion; each records a PASS or FAIL line.

The lines are printed in the terminal summary of every pytest run, and by
running this file directly.
"""

import itertools
import os
import random
import subprocess
import sys
import time

from stt import oracle, shapes, solver
from stt.corpus import verify_corpus
from stt.loader import Workspace
from stt.syntax import (
    And, BOT, CVar, Eq, ExtApp, ExtLam, INTERVAL, Leq, ONE, Or, TOP, ZERO, conj, disj,
    instantiate, shift,
)

from conftest import (
    ACCEPTANCE_LINES, MANIFEST, REPO, corpus_files, extension_lambdas, reparse_printed,
)
from termgen import Env, term, variant


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# -- 1. solver and oracle agree --------------------------------------------------

XY = [("x", INTERVAL), ("y", INTERVAL)]
XYZ = [("x", INTERVAL), ("y", INTERVAL), ("z", INTERVAL)]
TERMS2 = [ZERO, ONE, CVar(1, "x"), CVar(0, "y")]
TERMS3 = [ZERO, ONE, CVar(2, "x"), CVar(1, "y"), CVar(0, "z")]


def _random_atom(rng, terms):
    return rng.choice([Eq, Leq])(rng.choice(terms), rng.choice(terms))


def _random_dnf(rng, terms, max_literals=6):
    total = rng.randint(1, max_literals)
    lits = [_random_atom(rng, terms) for _ in range(total)]
    cuts = sorted(rng.sample(range(1, total), rng.randint(0, total - 1))) if total > 1 else []
    groups, prev = [], 0
    for c in cuts + [total]:
        groups.append(conj(lits[prev:c]))
        prev = c
    return disj(groups)


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    solver.cache_clear()
    atoms = [k(a, b) for k in (Eq, Leq) for a in TERMS2 for b in TERMS2]
    goals = atoms + [TOP, BOT]
    exhaustive = disagree = 0
    for size in range(4):
        for hyps in itertools.combinations(atoms, size):
            models = oracle.satisfying(XY, hyps)
            for g in goals:
                expected = all(oracle.holds(env, g) for env in models)
                exhaustive += 1
                disagree += solver.entails(XY, list(hyps), g) != expected
    rng = random.Random(2024)
    sampled = 0
    for _ in range(10_000):
        hyp = _random_dnf(rng, TERMS3)
        goal = disj(conj(_random_atom(rng, TERMS3) for _ in range(rng.randint(1, 2)))
                    for _ in range(rng.randint(1, 3)))
        sampled += 1
        disagree += solver.entails(XYZ, [hyp], goal) != oracle.oracle_entails(XYZ, [hyp], goal)
    elapsed = time.perf_counter() - start
    record(1, "solver agrees with enumeration",
           disagree == 0 and sampled == 10_000 and elapsed < 60,
           f"{exhaustive} exhaustive + {sampled} random queries, {disagree} disagreements, "
           f"{elapsed:.1f}s (limit 60s)")


# -- 2. axioms and rules as solver assertions ----------------------------------

def _tope(rng, terms, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return _random_atom(rng, terms)
    return rng.choice([And, Or])(_tope(rng, terms, depth - 1), _tope(rng, terms, depth - 1))


def _axiom_instances(rng):
    x, y, z = (rng.choice(TERMS3) for _ in range(3))
    return [
        ([], Leq(x, x)),
        ([Leq(x, y), Leq(y, z)], Leq(x, z)),
        ([Leq(x, y), Leq(y, x)], Eq(x, y)),
        ([], Or(Leq(x, y), Leq(y, x))),
        ([], Leq(ZERO, x)),
        ([], Leq(x, ONE)),
        ([Eq(ZERO, ONE)], BOT),
    ]


def _rule_instances(rng):
    phi, psi, chi = (_tope(rng, TERMS3) for _ in range(3))
    ctx = [_tope(rng, TERMS3) for _ in range(rng.randint(0, 2))]
    s, r, u = (rng.choice(TERMS3) for _ in range(3))
    # a tope over x, y, z and one extra variable, to substitute into
    body = _tope(rng, [ZERO, ONE, CVar(3), CVar(2), CVar(1), CVar(0)])
    return [
        (ctx + [phi], phi),                                    # hypothesis
        (ctx, TOP),                                            # top introduction
        (ctx + [BOT], chi),                                    # bottom elimination
        (ctx + [phi, psi], And(phi, psi)),                     # conjunction introduction
        (ctx + [And(phi, psi)], phi),                          # conjunction elimination
        (ctx + [And(phi, psi)], psi),
        (ctx + [phi], Or(phi, psi)),                           # disjunction introduction
        (ctx + [psi], Or(phi, psi)),
        (ctx + [Or(phi, psi)], Or(Or(psi, chi), phi)),         # disjunction elimination
        (ctx, Eq(s, s)),                                       # equality
        (ctx + [Eq(s, r)], Eq(r, s)),
        (ctx + [Eq(s, r), Eq(r, u)], Eq(s, u)),
        (ctx + [Eq(s, r), instantiate(body, s)], instantiate(body, r)),
    ]


def _structural(rng):
    """Cut and monotonicity, checked as implications on random sequents."""
    hyps = [_tope(rng, TERMS3) for _ in range(rng.randint(1, 2))]
    psi, chi, extra = (_tope(rng, TERMS3) for _ in range(3))
    if rng.random() < 0.5:
        psi = Or(hyps[0], psi)  # derivable, so the premises are not vacuous
    if rng.random() < 0.5:
        chi = Or(And(psi, hyps[-1]), chi)
    out = []
    if solver.entails(XYZ, hyps, psi) and solver.entails(XYZ, hyps + [psi], chi):
        out.append((hyps, chi))
    if solver.entails(XYZ, hyps, psi):
        out.append((hyps + [extra], psi))
    return out


def test_criterion_2_axioms_and_rules():
    rng = random.Random(7)
    instances = failures = 0
    structural = 0
    batch = []
    for _ in range(60):
        batch += _axiom_instances(rng) + _rule_instances(rng)
    for _ in range(300):
        extra = _structural(rng)
        structural += len(extra)
        batch += extra
    for hyps, goal in batch:
        instances += 1
        failures += not solver.entails(XYZ, hyps, goal)
    record(2, "axioms, rules, cut and monotonicity hold",
           failures == 0 and instances >= 500,
           f"{instances} instances ({structural} cut/monotonicity), {failures} failures")


# -- 3. shape coherence ---------------------------------------------------------

def test_criterion_3_shape_coherence():
    start = time.perf_counter()
    checks = []
    for n in range(4):
        checks.append((f"join simplex {n}", shapes.equivalent(shapes.join_simplex(n), shapes.simplex(n))))
    for n in range(1, 4):
        checks.append((f"join boundary {n}", shapes.equivalent(shapes.join_boundary(n), shapes.boundary(n))))
        checks.append((f"join boundary from points {n}",
                       shapes.equivalent(shapes.join_boundary_from_points(n), shapes.boundary(n))))
    horn, diag = shapes.horn(2, 1), shapes.diagonal()
    checks.append(("horn and diagonal cover the boundary",
                   shapes.equivalent(shapes.union(horn, diag), shapes.boundary(2))))
    checks.append(("horn meets diagonal in its endpoints",
                   shapes.equivalent(shapes.intersection(horn, diag), shapes.diagonal_boundary())))
    upper, lower, mid = shapes.square_halves()
    checks.append(("square is two triangles",
                   shapes.equivalent(shapes.union(upper, lower), shapes.square())))
    checks.append(("triangles meet in the diagonal",
                   shapes.equivalent(shapes.intersection(upper, lower), mid)))
    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks if not ok]
    record(3, "shape algebra is coherent", not failed and elapsed < 5,
           f"{len(checks) - len(failed)}/{len(checks)} equivalences, {elapsed:.2f}s (limit 5s)"
           + (f"; failed: {', '.join(failed)}" if failed else ""))


# -- 4. corpus gate -------------------------------------------------------------

REQUIRED = ["id-arr", "id-comp", "comp-id", "conn-max", "conn-min", "retraction", "section",
            "retract-round-trip", "curry", "uncurry", "curry-uncurry", "uncurry-curry"]


def test_criterion_4_corpus_gate():
    report = verify_corpus(MANIFEST)
    ws = Workspace()
    for f in corpus_files():
        ws.load(f)
    missing = [n for n in REQUIRED if n not in ws.env]
    boundary_eqs = sum(n.startswith(("conn-max-", "conn-min-")) for n in ws.env)
    negatives = [r for r in report.results if r.entry.expect != "checks"]
    ok = report.ok and report.elapsed < 10 and not missing and boundary_eqs == 10
    detail = (f"{sum(r.ok for r in report.results)}/{len(report.results)} files as expected "
              f"({len(negatives)} negative), {boundary_eqs} connection boundary equations, "
              f"{report.elapsed:.2f}s (limit 10s)")
    if missing:
        detail += f"; missing {', '.join(missing)}"
    if report.coverage_problems:
        detail += f"; {len(report.coverage_problems)} coverage problems"
    record(4, "corpus checks", ok, detail)


# -- 5. equality, normalization, extension laws, round trip ----------------------

def test_criterion_5_equality_and_round_trip():
    env = Env()
    chk, ctx, ty = env.checker, env.ctx, env.A
    rng = random.Random(11)
    generated = failures = 0

    def el(text):
        return env.elaborate(text)[0]

    while generated < 1000:
        m = term(rng)
        a, b, c, d = (el(x) for x in (m, variant(rng, m), variant(rng, m), term(rng)))
        generated += 4
        eq = lambda p, q: chk.def_equal(ctx, p, q, ty)  # noqa: E731
        laws = [eq(a, a), eq(d, d), eq(a, b), eq(b, a), eq(b, c), eq(a, c),
                eq(a, d) == eq(d, a), eq(b, d) == eq(a, d)]
        for x in (a, d):
            nf = chk.normalize(ctx, x, ty)
            laws += [chk.normalize(ctx, nf, ty) == nf, eq(x, nf)]
        failures += laws.count(False)

    ws = Workspace()
    for f in corpus_files():
        ws.load(f)
    ext_laws = ext_failures = 0
    for name, lctx, lam, ext in extension_lambdas(ws.checker):
        inner = lctx.bind_cube(lam.pat, ext.cube).assume(ext.shape)
        beta = ws.checker.def_equal(inner, ExtApp(shift(lam, 1), CVar(0)), lam.body, ext.family)
        eta = ws.checker.def_equal(lctx, ExtLam(ExtApp(shift(lam, 1), CVar(0)), lam.pat), lam, ext)
        ext_laws += 2
        ext_failures += (not beta) + (not eta)

    trips = trip_failures = 0
    rws = Workspace()
    for f in corpus_files(include_negative=True):
        loaded = rws.load(f)
        again = reparse_printed(rws, loaded)
        trips += 1
        trip_failures += again.decls != loaded.module.decls

    ok = failures == 0 and ext_failures == 0 and trip_failures == 0 and generated >= 1000
    record(5, "equality, normal forms, extension laws and round trip",
           ok and ext_laws > 0,
           f"{generated} generated terms with {failures} law failures; "
           f"{ext_laws} beta/eta checks over corpus extension lambdas with {ext_failures} failures; "
           f"{trips} files round-tripped with {trip_failures} failures")


# -- 6. determinism --------------------------------------------------------------

def test_criterion_6_determinism():
    files = corpus_files(include_negative=True)
    runs = []
    for seed in ("1", "2"):
        proc = subprocess.run([sys.executable, "-m", "stt", "check", *files], capture_output=True,
                              cwd=REPO, env={**os.environ, "PYTHONHASHSEED": seed, "STT_COLOR": "never"})
        runs.append(proc.stdout)
    identical = runs[0] == runs[1]
    record(6, "check output is deterministic", identical and len(runs[0]) > 0,
           f"two runs over {len(files)} files, {len(runs[0])} bytes each, "
           f"{'byte-identical' if identical else 'different'}")


if __name__ == "__main__":
    sys.setrecursionlimit(20000)
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)

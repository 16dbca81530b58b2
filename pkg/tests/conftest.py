import os
import sys

from hypothesis import settings
from hypothesis import strategies as st

from stt.syntax import (
    And, BOT, CVar, Eq, INTERVAL, Leq, ONE, Or, TOP, ZERO, conj, disj,
)

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(REPO, "corpus")
MANIFEST = os.path.join(CORPUS, "manifest.json")

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def interval_ctx(*names):
    return [(n, INTERVAL) for n in names]


def interval_terms(n_vars):
    return [ZERO, ONE] + [CVar(n_vars - 1 - i, f"v{i}") for i in range(n_vars)]


def atoms(n_vars):
    ts = interval_terms(n_vars)
    return st.builds(lambda k, a, b: k(a, b), st.sampled_from([Eq, Leq]),
                     st.sampled_from(ts), st.sampled_from(ts))


def topes(n_vars, max_leaves=6):
    base = st.one_of(atoms(n_vars), st.sampled_from([TOP, BOT]))
    return st.recursive(
        base,
        lambda sub: st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub)),
        max_leaves=max_leaves,
    )


def dnf_topes(n_vars, max_literals=6):
    """A disjunction of conjunctions with at most ``max_literals`` atoms in all."""

    @st.composite
    def build(draw):
        total = draw(st.integers(1, max_literals))
        lits = draw(st.lists(atoms(n_vars), min_size=total, max_size=total))
        cuts = sorted(draw(st.sets(st.integers(1, total - 1), max_size=total - 1))) if total > 1 else []
        groups, prev = [], 0
        for c in cuts + [total]:
            groups.append(conj(lits[prev:c]))
            prev = c
        return disj(groups)

    return build()


def corpus_files(include_negative=False):
    import glob
    files = sorted(glob.glob(os.path.join(CORPUS, "**", "*.stt"), recursive=True))
    return [f for f in files if include_negative or os.sep + "negative" + os.sep not in f]


def reparse_printed(ws, loaded):
    """Print a loaded module and parse the text back in the same workspace."""
    from stt.parser import parse_module
    from stt.printer import print_module

    def on_import(rel, span):
        return ws.load(os.path.join(os.path.dirname(loaded.path), rel)).exports

    return parse_module(print_module(loaded.module), loaded.path, {}, on_import)


def extension_lambdas(checker):
    """Every extension lambda reachable through the lambdas of a definition body.

    Yields (name, ctx, lam, ext_type) with ``lam`` checked at ``ext_type`` in ``ctx``.
    """
    from stt.syntax import ExtLam, ExtType, Lam, Pi, TriContext

    for name, entry in checker.env.items():
        if entry.body is None:
            continue
        ctx, body, ty = TriContext(), entry.body, entry.type
        while True:
            t = checker.whnf(ctx, ty)
            if isinstance(body, Lam) and isinstance(t, Pi):
                ctx, body, ty = ctx.bind_type(body.pat, t.dom), body.body, t.cod
            elif isinstance(body, ExtLam) and isinstance(t, ExtType):
                yield name, ctx, body, t
                ctx = ctx.bind_cube(body.pat, t.cube).assume(t.shape)
                body, ty = body.body, t.family
            else:
                break


def vertices(cube):
    """The points of ``cube`` with every coordinate an endpoint."""
    from stt.syntax import CPair, INTERVAL, ONE, Prod, STAR, ZERO

    if cube == INTERVAL:
        return [ZERO, ONE]
    if isinstance(cube, Prod):
        return [CPair(a, b) for a in vertices(cube.left) for b in vertices(cube.right)]
    return [STAR]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

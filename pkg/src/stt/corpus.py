"""The checked corpus: manifest, verification, and anchor coverage."""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field

from .diagnostics import CODES, CheckError
from .loader import Workspace, check_files

# Concepts the corpus and the test suite must cover between them.
IN_SCOPE_ANCHORS = (
    "cube-layer",
    "tope-layer",
    "tope-disjunction-elim",
    "tope-equality-conversion",
    "extension-types",
    "extension-degenerate-notation",
    "strict-interval-axioms",
    "simplices",
    "boundaries",
    "horns",
    "degeneracies",
    "gluing-and-join",
    "pushout-join",
    "extension-commute",
    "extension-curry",
    "non-choice",
    "cofibration-compose",
    "cofibration-union",
    "relative-funext",
    "hom",
    "hom2",
    "segal-type",
    "segal-horn-form",
    "identity-arrow",
    "identity-laws",
    "connections",
    "square-retract",
    "discrete",
    "covariant",
    "yoneda-maps",
    "isomorphism",
    "rezk",
)

CHECKS = "checks"


class ManifestDrift(Exception):
    """Files on disk and the manifest disagree."""


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    anchors: tuple
    expect: str  # "checks" or an error code such as "E0302"
    stretch: bool = False


@dataclass
class CorpusManifest:
    root: str
    entries: list
    tests: dict = field(default_factory=dict)  # anchor -> "path::test_name"

    @classmethod
    def load(cls, path: str) -> "CorpusManifest":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        entries = []
        for item in raw["files"]:
            expect = item.get("expect", CHECKS)
            if expect != CHECKS and expect not in CODES.values():
                raise ValueError(f"{item['file']}: unknown expected status {expect!r}")
            entries.append(ManifestEntry(item["file"], tuple(item.get("anchors", ())), expect,
                                         bool(item.get("stretch", False))))
        return cls(os.path.dirname(os.path.abspath(path)), entries, dict(raw.get("tests", {})))

    def path_of(self, entry: ManifestEntry) -> str:
        return os.path.join(self.root, entry.file)


@dataclass(frozen=True)
class FileResult:
    entry: ManifestEntry
    codes: tuple
    ok: bool
    rendered: tuple


@dataclass
class CorpusReport:
    results: list
    coverage_problems: list
    elapsed: float

    @property
    def ok(self) -> bool:
        gated = [r for r in self.results if not r.entry.stretch]
        return all(r.ok for r in gated) and not self.coverage_problems

    def lines(self) -> list:
        out = []
        for r in self.results:
            status = "ok  " if r.ok else "FAIL"
            got = ",".join(r.codes) if r.codes else "checks"
            tag = " (stretch)" if r.entry.stretch else ""
            out.append(f"{status} {r.entry.file}: expected {r.entry.expect}, got {got}{tag}")
            if not r.ok:
                out.extend("    " + line for d in r.rendered for line in d.splitlines())
        out.extend(f"coverage: {p}" for p in self.coverage_problems)
        passed = sum(r.ok for r in self.results)
        out.append(f"{passed}/{len(self.results)} files as expected in {self.elapsed:.2f}s")
        return out


def disk_files(root: str) -> list:
    found = []
    for dirpath, _, names in os.walk(root):
        for n in names:
            if n.endswith(".stt"):
                found.append(os.path.relpath(os.path.join(dirpath, n), root))
    return sorted(found)


def check_drift(manifest: CorpusManifest) -> None:
    listed = [e.file for e in manifest.entries]
    dupes = sorted({f for f in listed if listed.count(f) > 1})
    on_disk = set(disk_files(manifest.root))
    missing = sorted(set(listed) - on_disk)
    unlisted = sorted(on_disk - set(listed))
    problems = []
    if dupes:
        problems.append("listed twice: " + ", ".join(dupes))
    if missing:
        problems.append("listed but missing: " + ", ".join(missing))
    if unlisted:
        problems.append("on disk but not listed: " + ", ".join(unlisted))
    if problems:
        raise ManifestDrift("; ".join(problems))


def _test_exists(repo: str, ref: str) -> bool:
    path, _, name = ref.partition("::")
    full = os.path.join(repo, path)
    if not name or not os.path.exists(full):
        return False
    with open(full, encoding="utf-8") as fh:
        return re.search(rf"^\s*def {re.escape(name)}\(", fh.read(), re.M) is not None


def coverage_problems(manifest: CorpusManifest, repo: str | None = None) -> list:
    """Each in-scope anchor must be claimed by exactly one file or one test."""
    repo = repo or os.path.dirname(manifest.root)
    claims: dict = {}
    for e in manifest.entries:
        for a in e.anchors:
            claims.setdefault(a, []).append(e.file)
    for a, ref in manifest.tests.items():
        claims.setdefault(a, []).append(ref)
    problems = []
    for a in IN_SCOPE_ANCHORS:
        owners = claims.get(a, [])
        if not owners:
            problems.append(f"anchor {a} is not claimed")
        elif len(owners) > 1:
            problems.append(f"anchor {a} is claimed more than once: {', '.join(owners)}")
    for a in sorted(set(claims) - set(IN_SCOPE_ANCHORS)):
        problems.append(f"unknown anchor {a}")
    for a, ref in sorted(manifest.tests.items()):
        if not _test_exists(repo, ref):
            problems.append(f"anchor {a} points at a missing test {ref}")
    return problems


def verify_corpus(manifest: CorpusManifest | str, repo: str | None = None) -> CorpusReport:
    """Check every file against its expected status.

    Files expected to check share one workspace, so shared imports are
    checked once; each negative file gets a fresh one.  Test anchors are
    resolved against ``repo``, by default the manifest directory's parent.
    """
    if isinstance(manifest, str):
        manifest = CorpusManifest.load(manifest)
    check_drift(manifest)
    start = time.perf_counter()
    shared = Workspace()
    results = []
    for e in manifest.entries:
        path = manifest.path_of(e)
        if e.expect == CHECKS:
            diags = _diagnostics_of(shared, path)
        else:
            diags = check_files([path])
        codes = tuple(d.code for d in diags)
        if e.expect == CHECKS:
            ok = not codes
        else:
            ok = bool(codes) and all(c == e.expect for c in codes)
        results.append(FileResult(e, codes, ok, tuple(d.render(False) for d in diags)))
    elapsed = time.perf_counter() - start
    return CorpusReport(results, coverage_problems(manifest, repo), elapsed)


def _diagnostics_of(ws: Workspace, path: str) -> list:
    before = set(ws.modules)
    try:
        ws.load(path)
    except CheckError as err:
        return [err.diagnostic()]
    # report the file itself and anything it pulled in for the first time
    out = []
    for p, mod in ws.modules.items():
        if p not in before:
            out.extend(mod.diagnostics)
    return out

"""Loading .stt files: imports, checking, and diagnostic collection."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .printer import install
from .checker import Checker, Definition, Postulate, ShapeDef
from .diagnostics import CheckError, Diagnostic
from .parser import SourceModule, parse_module
from .syntax import TriContext

install()


@dataclass
class LoadedModule:
    path: str
    module: SourceModule
    exports: dict
    diagnostics: list = field(default_factory=list)


def display_path(path: str) -> str:
    rel = os.path.relpath(path)
    return path if rel.startswith("..") else rel


class Workspace:
    """A set of loaded modules sharing one checked environment."""

    def __init__(self):
        self.checker = Checker()
        self.modules: dict = {}
        self.loading: list = []
        self.shape_names: dict = {}

    @property
    def env(self) -> dict:
        return self.checker.env

    def load(self, path: str) -> LoadedModule:
        path = os.path.normpath(os.path.abspath(path))
        if path in self.modules:
            return self.modules[path]
        if path in self.loading:
            cycle = " -> ".join(display_path(p) for p in self.loading + [path])
            raise CheckError("ImportError", f"import cycle: {cycle}")
        shown = display_path(path)
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CheckError("ImportError", f"cannot read {shown}: {exc.strerror}") from None
        self.loading.append(path)
        try:
            shapes: dict = {}

            def on_import(rel, span):
                target = os.path.join(os.path.dirname(path), rel)
                try:
                    return self.load(target).exports
                except CheckError as err:
                    raise err.with_span(span)

            mod = parse_module(text, shown, shapes, on_import)
        finally:
            self.loading.pop()
        loaded = LoadedModule(path, mod, shapes, list(mod.diagnostics))
        for decl in mod.decls:
            try:
                self.check_declaration(decl)
            except CheckError as err:
                loaded.diagnostics.append(err.diagnostic())
            except RecursionError:
                loaded.diagnostics.append(CheckError(
                    "Internal", "recursion limit exceeded", decl.span).diagnostic())
            except Exception as exc:  # a kernel bug must not hide other diagnostics
                loaded.diagnostics.append(CheckError(
                    "Internal", f"{type(exc).__name__}: {exc}", decl.span).diagnostic())
        loaded.diagnostics.sort(key=Diagnostic.sort_key)
        self.modules[path] = loaded
        return loaded

    def check_declaration(self, decl):
        if isinstance(decl, ShapeDef):
            if decl.name in self.env:
                raise CheckError("DuplicateName", f"{decl.name} is already defined", decl.span)
            ctx = TriContext().bind_cube(decl.shape.pat, decl.shape.cube)
            try:
                self.checker.check_tope(ctx, decl.shape.tope)
            except Exception as exc:
                raise CheckError("IllFormedTope", str(exc), decl.span) from None
            self.shape_names[decl.name] = decl.shape
            return
        if isinstance(decl, (Definition, Postulate)) and decl.name in self.shape_names:
            raise CheckError("DuplicateName", f"{decl.name} is already defined as a shape",
                             decl.span)
        self.checker.check_declaration(decl)


def check_files(paths) -> list:
    """Check files in order; diagnostics of every loaded module, each reported once."""
    ws = Workspace()
    out = []
    for p in paths:
        try:
            ws.load(p)
        except CheckError as err:
            out.append(err.diagnostic())
    for loaded in ws.modules.values():
        out.extend(loaded.diagnostics)
    out.sort(key=Diagnostic.sort_key)
    return out

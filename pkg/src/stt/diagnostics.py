"""Stable error codes and the diagnostic record."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Optional

from .syntax import Span

CODES = {
    "SyntaxError": "E0001",
    "UnboundVariable": "E0002",
    "DuplicateName": "E0003",
    "ImportError": "E0004",
    "SortMismatch": "E0101",
    "IllFormedCubeTerm": "E0102",
    "IllFormedTope": "E0103",
    "TypeMismatch": "E0201",
    "NotAFunction": "E0202",
    "NotAType": "E0203",
    "CannotInfer": "E0204",
    "UniverseError": "E0205",
    "TopeSideConditionFailed": "E0301",
    "BoundaryMismatch": "E0302",
    "BranchDisagreement": "E0303",
    "NotASubshape": "E0304",
    "Internal": "E0900",
}

KINDS = {code: kind for kind, code in CODES.items()}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Optional[Span] = None
    severity: str = "error"
    entailment: Optional[str] = None

    @property
    def kind(self) -> str:
        return KINDS.get(self.code, "Internal")

    def sort_key(self):
        s = self.span
        return (s.file, s.line, s.col) if s else ("", 0, 0)

    def render(self, color: bool = False) -> str:
        where = f"{self.span}: " if self.span else ""
        head = f"{self.severity}[{self.code}]"
        if color:
            head = f"\x1b[1;31m{head}\x1b[0m"
        text = f"{where}{head}: {self.message}"
        if self.entailment:
            text += f"\n  failed entailment: {self.entailment}"
        return text


class CheckError(Exception):
    """Raised by the kernel; carries everything needed for a Diagnostic."""

    def __init__(self, kind: str, message: str, span: Optional[Span] = None,
                 entailment: Optional[str] = None):
        super().__init__(message)
        if kind not in CODES:
            raise ValueError(f"unknown diagnostic kind {kind}")
        self.kind = kind
        self.message = message
        self.span = span
        self.entailment = entailment

    @property
    def code(self) -> str:
        return CODES[self.kind]

    def with_span(self, span: Optional[Span]) -> "CheckError":
        if self.span is None and span is not None:
            self.span = span
        return self

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(self.code, self.message, self.span, entailment=self.entailment)


def use_color(stream=sys.stderr) -> bool:
    mode = os.environ.get("STT_COLOR", "auto")
    if mode == "never":
        return False
    if mode == "always":
        return True
    return hasattr(stream, "isatty") and stream.isatty()

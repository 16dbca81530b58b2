import io

import pytest

from stt.diagnostics import CODES, KINDS, CheckError, Diagnostic, use_color
from stt.syntax import Span


def test_codes_are_unique_and_stable():
    assert len(set(CODES.values())) == len(CODES)
    assert CODES["SyntaxError"] == "E0001"
    assert CODES["TopeSideConditionFailed"] == "E0301"
    assert CODES["BoundaryMismatch"] == "E0302"
    assert KINDS["E0304"] == "NotASubshape"


def test_render_format():
    d = Diagnostic("E0302", "the body does not agree with the boundary on t === 0",
                   Span("a.stt", 4, 42), entailment="t === 0 ⊢ y ≡ x")
    assert d.render() == ("a.stt:4:42: error[E0302]: the body does not agree with the boundary on t === 0\n"
                          "  failed entailment: t === 0 ⊢ y ≡ x")
    assert Diagnostic("E0004", "no file").render() == "error[E0004]: no file"
    assert "\x1b[" in d.render(color=True)


def test_check_error_carries_kind():
    err = CheckError("UnboundVariable", "unknown name y")
    assert err.code == "E0002"
    assert err.with_span(Span("f", 1, 2)).span == Span("f", 1, 2)
    assert err.with_span(Span("g", 9, 9)).span == Span("f", 1, 2)
    with pytest.raises(ValueError):
        CheckError("NoSuchKind", "x")


def test_sort_key_orders_by_position():
    ds = [Diagnostic("E0001", "b", Span("f", 3, 1)), Diagnostic("E0001", "a", Span("f", 1, 5)),
          Diagnostic("E0004", "c")]
    assert [d.message for d in sorted(ds, key=Diagnostic.sort_key)] == ["c", "a", "b"]


class Tty(io.StringIO):
    def isatty(self):
        return True


def test_color_setting(monkeypatch):
    monkeypatch.setenv("STT_COLOR", "never")
    assert not use_color(Tty())
    monkeypatch.setenv("STT_COLOR", "always")
    assert use_color(io.StringIO())
    monkeypatch.setenv("STT_COLOR", "auto")
    assert use_color(Tty()) and not use_color(io.StringIO())

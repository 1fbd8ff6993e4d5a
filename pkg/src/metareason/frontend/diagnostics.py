"""Frontend errors and their rendering with source excerpts."""
from __future__ import annotations

from typing import Iterable, Optional

from ..kernel.ast import SourceSpan


class FrontendError(Exception):
    code = "error"

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class DslSyntaxError(FrontendError):
    code = "syntax"

    def __init__(self, message, span=None, expected: Iterable[str] = (), errors=None):
        super().__init__(message, span)
        self.expected = tuple(sorted(set(expected)))
        # every error found, one per recovery point; the first is self
        self.errors: list[DslSyntaxError] = errors if errors is not None else [self]


class UnknownName(FrontendError):
    code = "unknown-name"


class CyclicInheritance(FrontendError):
    code = "cyclic-inheritance"

    def __init__(self, cycle: list[str], span=None):
        super().__init__("inheritance cycle: " + " -> ".join(cycle + cycle[:1]), span)
        self.cycle = cycle


class ArityError(FrontendError):
    code = "arity"


class TypeMismatch(FrontendError):
    code = "type-mismatch"


class UnsatisfiedParameterBound(FrontendError):
    code = "parameter-bound"


class DuplicateFeature(FrontendError):
    code = "duplicate-feature"


class DuplicateName(FrontendError):
    code = "duplicate-name"


class GhostReference(FrontendError):
    code = "ghost-reference"


class Warning_:
    """A non-fatal diagnostic."""

    code = "warning"

    def __init__(self, message: str, span: Optional[SourceSpan] = None, code: str = "warning"):
        self.message = message
        self.span = span
        self.code = code

    def __repr__(self):
        return f"Warning_({self.code!r}, {self.message!r})"


def excerpt(source: str, span: SourceSpan) -> list[str]:
    lines = source.splitlines()
    if not 1 <= span.line <= len(lines):
        return []
    text = lines[span.line - 1]
    gutter = str(span.line)
    pad = " " * len(gutter)
    width = max(1, min(span.length, len(text) - span.column + 1) if span.column <= len(text) else 1)
    return [
        f"{pad} |",
        f"{gutter} | {text}",
        f"{pad} | " + " " * (span.column - 1) + "^" * width,
    ]


def render(
    message: str,
    span: Optional[SourceSpan] = None,
    source: Optional[str] = None,
    code: str = "error",
    severity: str = "error",
) -> str:
    out = [f"{severity}[{code}]: {message}"]
    if span is not None:
        out.append(f"  --> {span.file}:{span.line}:{span.column}")
        if source is not None:
            out.extend(excerpt(source, span))
    return "\n".join(out)


def render_error(err: FrontendError, source: Optional[str] = None) -> str:
    if isinstance(err, DslSyntaxError):
        return "\n".join(render(e.message, e.span, source, e.code) for e in err.errors)
    return render(err.message, err.span, source, err.code)

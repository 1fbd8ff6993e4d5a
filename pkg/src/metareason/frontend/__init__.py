from .diagnostics import (
    ArityError,
    CyclicInheritance,
    DslSyntaxError,
    DuplicateFeature,
    DuplicateName,
    FrontendError,
    GhostReference,
    TypeMismatch,
    UnknownName,
    UnsatisfiedParameterBound,
    render_error,
)
from .parser import parse, parse_expr, parse_formula
from .pretty import pretty
from .resolve import ResolvedMetamodel, resolve_and_typecheck

__all__ = [
    "ArityError",
    "CyclicInheritance",
    "DslSyntaxError",
    "DuplicateFeature",
    "DuplicateName",
    "FrontendError",
    "GhostReference",
    "ResolvedMetamodel",
    "TypeMismatch",
    "UnknownName",
    "UnsatisfiedParameterBound",
    "parse",
    "parse_expr",
    "parse_formula",
    "pretty",
    "render_error",
    "resolve_and_typecheck",
]

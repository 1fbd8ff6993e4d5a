from .ast import SourceSpan, arity_of, check
from .errors import (
    ArityMismatch,
    BoundViolation,
    DivisionByZero,
    DuplicateAtom,
    EmptyUniverse,
    IntOutOfRange,
    KernelError,
    UnboundVariable,
    UnknownAtom,
)
from .evaluate import evaluate, holds, wrap
from .printer import show
from .universe import (
    Bounds,
    ConcreteInstance,
    Relation,
    TupleSet,
    Universe,
    mk_tupleset,
    mk_universe,
    set_bounds,
)

__all__ = [
    "ArityMismatch",
    "BoundViolation",
    "Bounds",
    "ConcreteInstance",
    "DivisionByZero",
    "DuplicateAtom",
    "EmptyUniverse",
    "IntOutOfRange",
    "KernelError",
    "Relation",
    "SourceSpan",
    "TupleSet",
    "UnboundVariable",
    "UnknownAtom",
    "Universe",
    "arity_of",
    "check",
    "evaluate",
    "holds",
    "mk_tupleset",
    "mk_universe",
    "set_bounds",
    "show",
    "wrap",
]

from .translator import (
    IncompleteAssignment,
    TranslationError,
    Translation,
    UnboundedRelation,
    interpret,
    translate,
)

__all__ = [
    "IncompleteAssignment",
    "Translation",
    "TranslationError",
    "UnboundedRelation",
    "interpret",
    "translate",
]

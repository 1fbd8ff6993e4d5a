"""Metamodel syntax tree, plus the two expression leaves that only exist before resolution."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..kernel import ast as A
from ..kernel.ast import SourceSpan


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Name(A.Expr):
    """An identifier in a formula, resolved later to a variable or relation."""

    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class StringLit(A.Expr):
    value: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class TypeRef:
    name: str
    args: tuple["TypeArg", ...] = ()
    span: Optional[SourceSpan] = _span()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}<{', '.join(str(a) for a in self.args)}>"


@dataclass(frozen=True)
class Wildcard:
    kind: Optional[str] = None  # None, "extends" or "super"
    bound: Optional[TypeRef] = None
    span: Optional[SourceSpan] = _span()

    def __str__(self):
        return "?" if self.kind is None else f"? {self.kind} {self.bound}"


TypeArg = Union[TypeRef, Wildcard]


@dataclass(frozen=True)
class Param:
    name: str
    bounds: tuple[TypeRef, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Multiplicity:
    lower: int
    upper: Optional[int]  # None is unbounded
    text: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Keyword:
    """A flag or props keyword inside feature braces, kept with its position."""

    word: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Feature:
    kind: str  # "attribute" or "property"
    name: str
    type: TypeRef
    mult: Multiplicity
    qualifiers: tuple[Keyword, ...] = ()
    cardinality: Optional[Keyword] = None
    flags: tuple[Keyword, ...] = ()
    props: tuple[Keyword, ...] = ()
    span: Optional[SourceSpan] = _span()
    name_span: Optional[SourceSpan] = _span()

    def has_flag(self, word: str) -> bool:
        return any(k.word == word for k in self.flags)

    def has_qualifier(self, word: str) -> bool:
        return any(k.word == word for k in self.qualifiers)


@dataclass(frozen=True)
class Invariant:
    formula: A.Formula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ClassDecl:
    name: str
    abstract: bool = False
    cardinality: Optional[Keyword] = None
    params: tuple[Param, ...] = ()
    extends: tuple[TypeRef, ...] = ()
    bound: Optional[tuple[int, Optional[int]]] = None
    features: tuple[Feature, ...] = ()
    invariants: tuple[Invariant, ...] = ()
    span: Optional[SourceSpan] = _span()
    name_span: Optional[SourceSpan] = _span()
    bound_span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class DataTypeDecl:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EnumDecl:
    name: str
    literals: tuple[str, ...]
    span: Optional[SourceSpan] = _span()


Classifier = Union[ClassDecl, DataTypeDecl, EnumDecl]


@dataclass(frozen=True)
class Package:
    name: str
    packages: tuple["Package", ...] = ()
    classifiers: tuple[Classifier, ...] = ()
    invariants: tuple[Invariant, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Metamodel:
    packages: tuple[Package, ...]
    file: str = field(default="<input>", compare=False)
    source: str = field(default="", compare=False, repr=False)

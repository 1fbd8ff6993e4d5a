"""The relational problem handed from the compiler to the translator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .kernel.ast import Formula, SourceSpan, check_formula
from .kernel.universe import Relation

CATEGORIES = ("structure", "multiplicity", "cardinality", "qualifier", "invariant", "fact")


@dataclass(frozen=True)
class Constraint:
    id: str
    formula: Formula
    category: str = "invariant"
    span: Optional[SourceSpan] = None
    label: str = ""

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown constraint category {self.category!r}")


@dataclass
class RelationalProblem:
    relations: list[Relation]
    constraints: list[Constraint]
    # compiler metadata consumed by bounds construction and reporting
    meta: Any = None
    bitwidth: int = 8
    notes: dict = field(default_factory=dict)

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def constraint(self, cid: str) -> Constraint:
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def with_constraints(self, extra: list[Constraint], relations: list[Relation] = ()) -> "RelationalProblem":
        return RelationalProblem(
            self.relations + [r for r in relations if r not in self.relations],
            self.constraints + list(extra),
            self.meta,
            self.bitwidth,
            dict(self.notes),
        )

    def check(self) -> None:
        """Arity-check every constraint against the declared relations."""
        arities = {r.name: r.arity for r in self.relations}
        for c in self.constraints:
            check_formula(c.formula, arities)

"""End-to-end analysis: metamodel + partial instance -> verdict, completions, log."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

from .compiler import compile
from .frontend import parse, resolve_and_typecheck
from .frontend.resolve import ResolvedMetamodel
from .instance.ais import PartialInstance, parse_instance
from .instance.bounds import Prepared, ScopeConfig, prepare
from .instance.completion import CompletionReport, Diagnosis, diff_completion, make_diagnosis
from .kernel.evaluate import Evaluator
from .kernel.printer import show
from .kernel.universe import ConcreteInstance
from .problem import RelationalProblem
from .sat import minimize_core, next_model
from .sat.dimacs import dumps as to_dimacs
from .translate import Translation, interpret, translate

# Constraints earlier in this list are dropped first while minimizing a core,
# so explanations favour qualifiers and instance facts over everything else.
CORE_DROP_ORDER = ("invariant", "multiplicity", "cardinality", "structure", "qualifier", "fact")


class SoundnessError(Exception):
    """A solution failed the reference evaluator; signals a pipeline bug."""


@dataclass
class Outcome:
    sat: bool
    instance: Optional[ConcreteInstance] = None
    diagnosis: Optional[Diagnosis] = None
    stats: dict = field(default_factory=dict)


def load_metamodel(path: str | Path) -> ResolvedMetamodel:
    text = Path(path).read_text(encoding="utf-8")
    return resolve_and_typecheck(parse(text, str(path)))


def load_instance(path: str | Path, mm: ResolvedMetamodel) -> PartialInstance:
    text = Path(path).read_text(encoding="utf-8")
    return parse_instance(text, mm, str(path))


def empty_instance(mm: ResolvedMetamodel) -> PartialInstance:
    return PartialInstance("empty", mm.package, file="<empty>")


class Analysis:
    """One metamodel/instance pair at fixed scopes, translated once."""

    def __init__(self, mm: ResolvedMetamodel, inst: Optional[PartialInstance] = None,
                 scope: Optional[ScopeConfig] = None, hard_facts: bool = False, seed: Optional[int] = None):
        self.mm = mm
        self.scope = scope or ScopeConfig()
        self.inst = inst if inst is not None else empty_instance(mm)
        self.seed = seed
        self.base_problem: RelationalProblem = compile(mm, self.scope.bitwidth)
        self.prepared: Prepared = prepare(self.base_problem, self.inst, self.scope, hard_facts)
        self.problem = self.prepared.problem
        self.translation: Translation = translate(self.problem, self.prepared.bounds, self.scope.bitwidth)
        self._solver = None

    @property
    def solver(self):
        if self._solver is None:
            self._solver = self.translation.new_solver(self.seed)
        return self._solver

    def dimacs(self) -> str:
        tr = self.translation
        comments = [f"selector {v} {cid}" for cid, v in tr.selector_of.items()]
        return to_dimacs(tr.clauses, tr.num_vars, comments)

    def _stats(self, t_solve: float, outcome: str) -> dict:
        st = self.translation.stats
        return {
            "vars": st["num_vars"],
            "clauses": st["num_clauses"],
            "translation_ms": st["translation_ms"],
            "solving_ms": t_solve,
            "outcome": outcome,
        }

    def drop_order(self) -> list[int]:
        rank = {c: i for i, c in enumerate(CORE_DROP_ORDER)}
        cons = sorted(self.problem.constraints, key=lambda c: rank[c.category])
        return [self.translation.selector_of[c.id] for c in cons]

    def verify(self, inst: ConcreteInstance) -> None:
        ev = Evaluator(inst)
        for c in self.problem.constraints:
            if not ev.formula(c.formula, {}):
                raise SoundnessError(f"solution violates {c.id}: {show(c.formula)}")

    def solve(self) -> Outcome:
        tr = self.translation
        start = time.perf_counter()
        result = self.solver.solve(tr.selectors)
        if result:
            elapsed = (time.perf_counter() - start) * 1000.0
            inst = interpret(tr, result.assignment)
            self.verify(inst)
            return Outcome(True, instance=inst, stats=self._stats(elapsed, "SAT"))
        core = minimize_core(self.solver, result.failed, self.drop_order())
        elapsed = (time.perf_counter() - start) * 1000.0
        ids = {tr.constraint_of[v] for v in core}
        return Outcome(False, diagnosis=make_diagnosis(self.problem, ids), stats=self._stats(elapsed, "UNSAT"))

    def report(self, inst: ConcreteInstance) -> CompletionReport:
        meta = self.problem.meta
        return diff_completion(self.inst, inst, self.mm, meta.feature_relations, meta.model_features)

    def completions(self, limit: Optional[int] = None) -> Iterator[CompletionReport]:
        """Distinct completions, each checked by the reference evaluator.

        Uses a fresh solver, so it can run after ``solve``.
        """
        tr = self.translation
        solver = tr.new_solver(self.seed)
        n = 0
        while limit is None or n < limit:
            result = next_model(solver, tr.primary_vars, tr.selectors)
            if not result:
                return
            inst = interpret(tr, result.assignment)
            self.verify(inst)
            n += 1
            yield self.report(inst)

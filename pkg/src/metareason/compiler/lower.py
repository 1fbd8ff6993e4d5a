"""Lower a resolved metamodel to a relational problem."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend.resolve import FeatureInfo, ResolvedMetamodel, string_relation
from ..kernel import ast as A
from ..kernel.ast import SourceSpan
from ..kernel.universe import Relation
from ..problem import Constraint, RelationalProblem
from .qualifiers import expand_qualifier

CLASS_REL = "class"


def class_atom_relation(cls: str) -> str:
    return "@" + cls


@dataclass
class CompileMeta:
    """What bounds construction and reporting need to know about the lowering."""

    metamodel: ResolvedMetamodel
    class_relations: list[str]
    feature_relations: list[str]
    # internal unary relations with fixed contents: relation name -> atom names
    constant_relations: dict[str, tuple[str, ...]] = field(default_factory=dict)
    # datatype pool relations whose contents depend on the instance
    datatype_relations: dict[str, str] = field(default_factory=dict)
    inferred_only: set[str] = field(default_factory=set)
    model_features: set[str] = field(default_factory=set)


def _rel(name: str) -> A.RelRef:
    return A.RelRef(name)


def _union(names) -> A.Expr:
    names = list(names)
    if not names:
        return None
    return A.union(*(_rel(n) for n in names))


def _ge(e: A.IntExpr, k: int) -> A.Formula:
    return A.Not(A.IntCompare("<", e, A.IntLit(k)))


def _le(e: A.IntExpr, k: int) -> A.Formula:
    return A.Not(A.IntCompare(">", e, A.IntLit(k)))


def _mult_formula(expr: A.Expr, lower: int, upper: Optional[int]) -> Optional[A.Formula]:
    if (lower, upper) == (0, None):
        return None
    if (lower, upper) == (0, 1):
        return A.Mult("lone", expr)
    if (lower, upper) == (1, 1):
        return A.Mult("one", expr)
    if (lower, upper) == (1, None):
        return A.Mult("some", expr)
    if (lower, upper) == (0, 0):
        return A.Mult("no", expr)
    card = A.Card(expr)
    parts = []
    if lower > 0:
        parts.append(_ge(card, lower))
    if upper is not None:
        parts.append(_le(card, upper))
    return A.conj(*parts)


class _Lowering:
    def __init__(self, mm: ResolvedMetamodel, bitwidth: int):
        self.mm = mm
        self.bitwidth = bitwidth
        self.constraints: list[Constraint] = []
        self.ids: set[str] = set()

    def add(self, cid: str, formula, category: str, span: Optional[SourceSpan], label: str):
        if formula is None:
            return
        base, k = cid, 1
        while cid in self.ids:
            k += 1
            cid = f"{base}#{k}"
        self.ids.add(cid)
        self.constraints.append(Constraint(cid, formula, category, span, label))

    def target_expr(self, f: FeatureInfo, target=None) -> A.Expr:
        target = f.target if target is None else target
        if not target:
            return None
        return A.union(*(_rel(t) for t in target))

    def run(self) -> RelationalProblem:
        mm = self.mm
        relations: list[Relation] = []
        meta = CompileMeta(mm, [], [])
        for name in mm.classes:
            relations.append(Relation(name, 1, "class"))
            meta.class_relations.append(name)
        for f in mm.feature_relations():
            relations.append(Relation(f.name, 2, "feature"))
            meta.feature_relations.append(f.name)
            if f.inferred_only:
                meta.inferred_only.add(f.name)
            if f.model:
                meta.model_features.add(f.name)
        relations.append(Relation(CLASS_REL, 2, "builtin"))
        concrete = mm.concrete_classes
        for c in concrete:
            relations.append(Relation(class_atom_relation(c), 1, "internal"))
            meta.constant_relations[class_atom_relation(c)] = (c,)
        for lit in mm.string_literals:
            name = string_relation(lit)
            relations.append(Relation(name, 1, "internal"))
            meta.constant_relations[name] = (name,)
        datatypes_needed = set(mm.referenced_datatypes)
        for f in mm.feature_relations():
            datatypes_needed.update(t for t in f.target if t in mm.datatypes)
        for dt in sorted(datatypes_needed):
            info = mm.datatypes[dt]
            relations.append(Relation(dt, 1, "internal"))
            meta.datatype_relations[dt] = info.kind
            if info.kind in ("enum", "boolean"):
                for lit in info.literals:
                    relations.append(Relation(lit, 1, "internal"))
                    meta.constant_relations[lit] = (lit,)

        self.structure(concrete)
        self.features()
        self.cardinalities()
        self.containment()
        for inv in mm.invariants:
            self.add(f"invariant/{inv.id}", inv.formula, "invariant", inv.span, f"invariant in {inv.owner}")
        problem = RelationalProblem(relations, self.constraints, meta, self.bitwidth)
        problem.check()
        return problem

    # ------------------------------------------------------------ structure

    def structure(self, concrete):
        mm = self.mm
        for name, c in mm.classes.items():
            for s in c.supers:
                self.add(f"structure/extends/{name}/{s}", A.subset(_rel(name), _rel(s)), "structure", c.span,
                         f"{name} extends {s}")
            if c.abstract:
                subs = mm.subclasses(name)
                f = A.Compare("=", _rel(name), _union(subs)) if subs else A.Mult("no", _rel(name))
                self.add(f"structure/abstract/{name}", f, "structure", c.span, f"abstract {name} is the union of its subclasses")
        for i, a in enumerate(concrete):
            for b in concrete[i + 1:]:
                if mm.descendants(a) & mm.descendants(b):
                    continue
                self.add(f"structure/disjoint/{a}/{b}", A.Mult("no", A.BinExpr("&", _rel(a), _rel(b))), "structure",
                         mm.classes[b].span, f"{a} and {b} are disjoint")
        if not concrete:
            return
        objects = _union(concrete)
        self.add("structure/class/total", A.forall([("x", objects)], A.Mult("one", A.join(A.Var("x"), _rel(CLASS_REL)))),
                 "structure", mm.ast.packages[0].span, "every object has exactly one class")
        for c in concrete:
            proper = [d for d in sorted(mm.descendants(c)) if d != c]
            own = _rel(c) if not proper else A.BinExpr("-", _rel(c), _union(proper))
            f = A.Compare("=", A.join(_rel(CLASS_REL), _rel(class_atom_relation(c))), own)
            self.add(f"structure/class/{c}", f, "structure", mm.classes[c].span, f"objects of exactly {c}")

    def features(self):
        mm = self.mm
        for f in mm.feature_relations():
            r = _rel(f.name)
            D = _rel(f.owner)
            R = self.target_expr(f)
            span = f.decl.name_span or f.span
            if R is None:
                self.add(f"structure/type/{f.name}", A.Mult("no", r), "structure", span, f"{f.name} has no possible targets")
                R = A.Univ()
            else:
                self.add(f"structure/type/{f.name}", A.subset(r, A.product(D, R)), "structure", span,
                         f"{f.name} is typed {f.owner} -> {' + '.join(f.target)}")
            for inst, narrowed in f.refinements:
                NR = self.target_expr(f, narrowed)
                body = A.subset(A.join(A.Var("x"), r), NR) if NR is not None else A.Mult("no", A.join(A.Var("x"), r))
                self.add(f"structure/refine/{f.name}/{inst}", A.forall([("x", _rel(inst))], body), "structure", span,
                         f"{f.name} on {inst} targets {' + '.join(narrowed) or 'nothing'}")
            m = _mult_formula(A.join(A.Var("x"), r), f.lower, f.upper)
            if m is not None:
                self.add(f"multiplicity/{f.name}", A.forall([("x", D)], m), "multiplicity", f.decl.mult.span,
                         f"multiplicity [{f.decl.mult.text}] of {f.name}")
            if f.decl.cardinality is not None:
                kw = f.decl.cardinality
                self.add(f"cardinality/{f.name}", A.Mult(kw.word, A.join(D, r)), "cardinality", kw.span,
                         f"'{kw.word}' values of {f.name}")
            for kw in f.props:
                self.add(f"qualifier/{f.name}/{kw.word}", expand_qualifier(kw.word, r, D, R), "qualifier", kw.span,
                         f"{kw.word} on {f.name}")
            if f.is_id:
                kw = next(k for k in f.decl.flags if k.word == "id")
                a, b = A.Var("a"), A.Var("b")
                same = A.conj(A.Compare("=", A.join(a, r), A.join(b, r)), A.Mult("some", A.join(a, r)))
                body = A.BinFormula("=>", same, A.Compare("=", a, b))
                self.add(f"qualifier/{f.name}/id", A.forall([("a", D), ("b", D)], body), "qualifier", kw.span,
                         f"id on {f.name}")

    def cardinalities(self):
        for name, c in self.mm.classes.items():
            if c.cardinality is not None:
                kw = c.cardinality
                self.add(f"cardinality/{name}/{kw.word}", A.Mult(kw.word, _rel(name)), "cardinality", kw.span,
                         f"'{kw.word}' {name}")
            if c.bound is not None:
                lo, hi = c.bound
                parts = [_ge(A.Card(_rel(name)), lo)] if lo > 0 else []
                if hi is not None:
                    parts.append(_le(A.Card(_rel(name)), hi))
                if parts:
                    text = f"[{lo}, {'*' if hi is None else hi}]"
                    self.add(f"cardinality/{name}/bound", A.conj(*parts), "cardinality", c.bound_span or c.span,
                             f"{name} instances within {text}")

    def containment(self):
        comp = [f for f in self.mm.feature_relations() if f.composes]
        if not comp:
            return
        K = _union(f.name for f in comp)
        targets = sorted({t for f in comp for t in f.target})
        owners = sorted({f.owner for f in comp})
        span = comp[0].decl.name_span
        if targets:
            self.add("structure/containment/single", A.forall([("y", _union(targets))],
                     A.Mult("lone", A.join(A.Var("y"), A.UnaryExpr("~", K)))), "structure", span,
                     "an object has at most one container")
        dom = _union(sorted(set(owners) | set(targets)))
        x = A.Var("x")
        self.add("structure/containment/acyclic", A.forall([("x", dom)], A.Not(A.subset(x, A.join(x, A.UnaryExpr("^", K))))),
                 "structure", span, "containment is acyclic")


def compile(mm: ResolvedMetamodel, bitwidth: int = 8) -> RelationalProblem:
    """Relations and constraints for ``mm``; metadata for bounds lives in ``problem.meta``."""
    return _Lowering(mm, bitwidth).run()

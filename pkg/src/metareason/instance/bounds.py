"""Universe and bounds for a compiled metamodel plus a partial instance."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..compiler.lower import CLASS_REL
from ..frontend.resolve import ResolvedMetamodel, string_relation
from ..kernel import ast as A
from ..kernel.ast import SourceSpan
from ..kernel.evaluate import int_range
from ..kernel.universe import Bounds, Relation, TupleSet, Universe, set_bounds
from ..problem import Constraint, RelationalProblem
from .ais import Link, PartialInstance


class BoundsError(Exception):
    span: Optional[SourceSpan] = None


class ScopeBelowAssertion(BoundsError):
    def __init__(self, cls: str, scope: int, asserted: int):
        super().__init__(f"scope {scope} for {cls} is below its {asserted} asserted object(s)")
        self.cls, self.scope, self.asserted = cls, scope, asserted


class CardinalityScopeConflict(BoundsError):
    def __init__(self, cls: str, asserted: int, upper: int):
        super().__init__(f"{asserted} asserted object(s) of {cls} exceed its declared maximum of {upper}")
        self.cls, self.asserted, self.upper = cls, asserted, upper


@dataclass
class ScopeConfig:
    default_scope: int = 3
    per_class: dict[str, int] = field(default_factory=dict)
    bitwidth: int = 8

    def __post_init__(self):
        if self.default_scope < 0 or any(v < 0 for v in self.per_class.values()):
            raise ValueError("scopes must be non-negative")


@dataclass
class Prepared:
    """Everything needed to translate one metamodel + instance query."""

    problem: RelationalProblem  # compiled problem plus fact constraints
    universe: Universe
    bounds: Bounds
    instance: PartialInstance
    scopes: dict[str, int]
    object_atoms: dict[str, str]  # atom -> exact concrete class
    fact_of: dict[str, Link] = field(default_factory=dict)


_CARD_UPPER = {"one": 1, "lone": 1, "no": 0}
_CARD_LOWER = {"one": 1, "some": 1}


def class_limits(mm: ResolvedMetamodel, cls: str) -> tuple[int, Optional[int]]:
    """Declared (lower, upper) instance counts of ``cls`` alone, ignoring subclasses' share."""
    c = mm.classes[cls]
    lo, hi = 0, None
    if c.cardinality is not None:
        lo = max(lo, _CARD_LOWER.get(c.cardinality.word, 0))
        u = _CARD_UPPER.get(c.cardinality.word)
        if u is not None:
            hi = u
    if c.bound is not None:
        lo = max(lo, c.bound[0])
        if c.bound[1] is not None:
            hi = c.bound[1] if hi is None else min(hi, c.bound[1])
    return lo, hi


def object_relation(name: str) -> str:
    return "@" + name


def effective_scopes(mm: ResolvedMetamodel, inst: PartialInstance, scope: ScopeConfig) -> dict[str, int]:
    asserted: dict[str, int] = {}
    for o in inst.objects:
        asserted[o.cls] = asserted.get(o.cls, 0) + 1
    for name in mm.classes:
        lo, hi = class_limits(mm, name)
        if hi is not None:
            n = sum(asserted.get(d, 0) for d in mm.descendants(name))
            if n > hi:
                raise CardinalityScopeConflict(name, n, hi)
    out = {}
    for c in mm.concrete_classes:
        n = asserted.get(c, 0)
        if c in scope.per_class:
            s = scope.per_class[c]
            if s < n:
                raise ScopeBelowAssertion(c, s, n)
        else:
            s = scope.default_scope
        lo, _ = class_limits(mm, c)
        eff = max(s, n, lo)
        for a in mm.ancestors(c):
            _, hi = class_limits(mm, a)
            if hi is not None:
                # a 'no' class keeps one candidate atom so that the cardinality
                # formula, not the bounds, rules it out and shows up in cores
                eff = min(eff, max(hi, 1))
        out[c] = max(eff, n)
    for name in scope.per_class:
        if name not in mm.classes and name not in mm.datatypes:
            raise KeyError(f"scope given for unknown class {name}")
    return out


def prepare(problem: RelationalProblem, inst: PartialInstance, scope: ScopeConfig, hard_facts: bool = False) -> Prepared:
    meta = problem.meta
    mm: ResolvedMetamodel = meta.metamodel
    scopes = effective_scopes(mm, inst, scope)

    # ---- atoms, in the documented order
    object_atoms: dict[str, str] = {}
    for o in inst.objects:
        object_atoms[o.name] = o.cls
    used = set(object_atoms)
    asserted_count: dict[str, int] = {}
    for o in inst.objects:
        asserted_count[o.cls] = asserted_count.get(o.cls, 0) + 1
    pools: dict[str, list[str]] = {c: [o.name for o in inst.objects if o.cls == c] for c in mm.concrete_classes}
    for c in mm.concrete_classes:
        k = asserted_count.get(c, 0)
        for _ in range(scopes[c] - len(pools[c])):
            while f"{c}${k}" in used:
                k += 1
            atom = f"{c}${k}"
            used.add(atom)
            pools[c].append(atom)
            object_atoms[atom] = c
            k += 1
    class_atoms = list(mm.concrete_classes)
    strings = set(mm.string_literals)
    strings.update(link.value for link in inst.links if link.kind == "string")
    # string-like datatypes get anonymous values too, named like padding objects
    for dt, kind in sorted(meta.datatype_relations.items()):
        if kind in ("string", "datatype"):
            k = 0
            for _ in range(scope.per_class.get(dt, scope.default_scope)):
                while f"{dt}${k}" in strings:
                    k += 1
                strings.add(f"{dt}${k}")
    string_atoms = [string_relation(s) for s in sorted(strings)]
    literal_atoms = []
    for dt in mm.datatypes.values():
        if dt.kind == "enum" or (dt.kind == "boolean" and dt.name in meta.datatype_relations):
            literal_atoms.extend(dt.literals)
    if any(link.kind == "literal" and link.value in ("true", "false") for link in inst.links):
        literal_atoms.extend(x for x in ("true", "false") if x not in literal_atoms)
    uses_ints = mm.uses_ints or any(link.kind == "int" for link in inst.links)
    bitwidth = scope.bitwidth
    ints = int_range(bitwidth) if uses_ints else ()
    atoms = list(object_atoms) + class_atoms + string_atoms + literal_atoms
    u = Universe(atoms, ints)

    def ts(arity, tuples):
        return TupleSet(u, arity, frozenset(tuples))

    def ords(names):
        return {(u.ordinal(n),) for n in names}

    # ---- relations added for this instance
    extra_rel: list[Relation] = []
    extra_exact: dict[str, set] = {}
    for o in inst.objects:
        r = Relation(object_relation(o.name), 1, "internal")
        extra_rel.append(r)
        extra_exact[r.name] = ords([o.name])
    for s in sorted(strings - set(mm.string_literals)):
        r = Relation(string_relation(s), 1, "internal")
        extra_rel.append(r)
        extra_exact[r.name] = ords([string_relation(s)])
    for lit in literal_atoms:
        if lit not in meta.constant_relations:
            r = Relation(lit, 1, "internal")
            extra_rel.append(r)
            extra_exact[r.name] = ords([lit])

    b = Bounds(u)
    # class relations
    for name in meta.class_relations:
        upper = set()
        lower = set()
        for d in mm.descendants(name):
            if mm.classes[d].concrete:
                upper |= ords(pools[d])
        for o in inst.objects:
            if name in mm.ancestors(o.cls):
                lower |= ords([o.name])
        b = set_bounds(b, Relation(name, 1, "class"), ts(1, lower), ts(1, upper))
    # builtin class relation
    up, lo = set(), set()
    asserted_names = {o.name for o in inst.objects}
    for c in mm.concrete_classes:
        ca = u.ordinal(c)
        for x in pools[c]:
            up.add((u.ordinal(x), ca))
            if x in asserted_names:
                lo.add((u.ordinal(x), ca))
    b = set_bounds(b, problem.relation(CLASS_REL), ts(2, lo), ts(2, up))
    # constant internal relations
    for rname, contents in meta.constant_relations.items():
        t = ords(contents)
        b = set_bounds(b, problem.relation(rname), ts(1, t), ts(1, t))
    for rname, contents in extra_exact.items():
        b = set_bounds(b, Relation(rname, 1, "internal"), ts(1, contents), ts(1, contents))
    # datatype pools
    pool_of = {}
    for dt, kind in meta.datatype_relations.items():
        if kind in ("string", "datatype"):
            names = string_atoms
        elif kind == "int":
            names = [str(v) for v in ints]
        else:
            names = list(mm.datatypes[dt].literals)
        pool_of[dt] = ords(names)
        b = set_bounds(b, problem.relation(dt), ts(1, pool_of[dt]), ts(1, pool_of[dt]))

    def upper_of(target_names) -> set:
        out = set()
        for t in target_names:
            if t in mm.datatypes:
                out |= pool_of.get(t, set())
            else:
                out |= b.upper(b.relation(t)).tuples
        return out

    # features
    links_by_feature: dict[str, list[Link]] = {}
    for link in inst.links:
        links_by_feature.setdefault(link.feature, []).append(link)
    for fname in meta.feature_relations:
        f = mm.features[fname]
        base_targets = upper_of(f.target)
        upper = set()
        for c in mm.concrete_classes:
            if f.owner not in mm.ancestors(c):
                continue
            allowed = set(base_targets)
            for inst_cls, narrowed in f.refinements:
                if inst_cls in mm.ancestors(c):
                    allowed &= upper_of(narrowed)
            for x in pools[c]:
                xo = u.ordinal(x)
                upper.update((xo, y) for (y,) in allowed)
        lower = set()
        for link in links_by_feature.get(fname, []):
            t = (u.ordinal(link.source), u.ordinal(link_atom(link)))
            upper.add(t)
            if hard_facts:
                lower.add(t)
        b = set_bounds(b, problem.relation(fname), ts(2, lower), ts(2, upper))

    # fact constraints
    extra_constraints = []
    fact_of = {}
    if not hard_facts:
        for i, link in enumerate(inst.links):
            cid = f"fact/{i + 1}"
            src = A.RelRef(object_relation(link.source))
            f = A.subset(A.product(src, link_expr(link)), A.RelRef(link.feature))
            extra_constraints.append(Constraint(cid, f, "fact", link.span, str(link)))
            fact_of[cid] = link
    full = problem.with_constraints(extra_constraints, extra_rel)
    full.bitwidth = bitwidth
    return Prepared(full, u, b, inst, scopes, object_atoms, fact_of)


def link_atom(link: Link) -> str:
    if link.kind == "string":
        return string_relation(link.value)
    return str(link.value)


def link_expr(link: Link) -> A.Expr:
    if link.kind == "object":
        return A.RelRef(object_relation(link.value))
    if link.kind == "string":
        return A.RelRef(string_relation(link.value))
    if link.kind == "int":
        return A.IntToExpr(A.IntLit(link.value))
    return A.RelRef(str(link.value))


def build_bounds(problem: RelationalProblem, inst: PartialInstance, scope: ScopeConfig, hard_facts: bool = False):
    """(Universe, Bounds) for ``problem`` with ``inst`` asserted."""
    p = prepare(problem, inst, scope, hard_facts)
    return p.universe, p.bounds

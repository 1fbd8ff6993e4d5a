"""Completed instances: what was inferred, and why an instance was rejected."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..compiler.lower import CLASS_REL
from ..frontend.resolve import ResolvedMetamodel
from ..kernel.ast import SourceSpan
from ..kernel.printer import show
from ..kernel.universe import ConcreteInstance
from .ais import Link, PartialInstance


class BaseNotContained(Exception):
    """A fact of the partial instance is missing from a solution."""


@dataclass(frozen=True)
class CompletionReport:
    base: PartialInstance
    completed: ConcreteInstance
    inferred_objects: frozenset  # of (name, class)
    inferred_links: frozenset  # of Link
    inferred_model_facts: frozenset  # of Link, on model features
    all_objects: tuple = ()  # (name, class) in universe order
    all_links: tuple = ()  # Link, sorted

    def objects(self):
        for name, cls in self.all_objects:
            yield name, cls, (name, cls) in self.inferred_objects

    def links(self):
        for link in self.all_links:
            model = link in self.inferred_model_facts
            yield link, model or link in self.inferred_links, model


@dataclass(frozen=True)
class CoreItem:
    id: str
    span: Optional[SourceSpan]
    category: str
    formula: str
    label: str = ""


@dataclass(frozen=True)
class Diagnosis:
    core: tuple[CoreItem, ...]
    verdict: str = "inconsistent"

    def __post_init__(self):
        if not self.core:
            raise ValueError("a diagnosis needs at least one core element")

    @property
    def ids(self) -> set[str]:
        return {c.id for c in self.core}


def _link_of(mm: ResolvedMetamodel, feature: str, src: str, atom: str, completed: ConcreteInstance) -> Link:
    u = completed.universe
    o = u.ordinal(atom)
    v = u.int_value(o)
    if v is not None:
        return Link(src, feature, "int", v)
    if atom.startswith('"'):
        return Link(src, feature, "string", _unquote(atom))
    if any(atom in dt.literals for dt in mm.datatypes.values()):
        return Link(src, feature, "literal", atom)
    return Link(src, feature, "object", atom)


def _unquote(atom: str) -> str:
    body = atom[1:-1]
    out, i = [], 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            i += 1
            out.append({"n": "\n", "t": "\t"}.get(body[i], body[i]))
        else:
            out.append(body[i])
        i += 1
    return "".join(out)


def completed_facts(mm: ResolvedMetamodel, completed: ConcreteInstance, features) -> tuple[list, list]:
    """Objects (name, class) and links present in ``completed``."""
    objects = [completed.universe.atom(a) for (a, _) in sorted(completed[CLASS_REL].tuples)]
    cls = {completed.universe.atom(a): completed.universe.atom(c) for (a, c) in completed[CLASS_REL].tuples}
    objs = [(n, cls[n]) for n in objects]
    links = []
    for f in features:
        for s, t in completed[f].names():
            links.append(_link_of(mm, f, s, t, completed))
    links.sort(key=lambda l: (l.source, l.feature, l.kind, str(l.value)))
    return objs, links


def diff_completion(base: PartialInstance, completed: ConcreteInstance, mm: ResolvedMetamodel,
                    features, model_features=frozenset()) -> CompletionReport:
    objs, links = completed_facts(mm, completed, features)
    present = set(objs)
    for o in base.objects:
        if (o.name, o.cls) not in present:
            raise BaseNotContained(f"object {o.name} : {o.cls} is missing from the solution")
    have = set(links)
    base_links = {Link(l.source, l.feature, l.kind, l.value) for l in base.links}
    for l in base_links:
        if l not in have:
            raise BaseNotContained(f"fact {l} is missing from the solution")
    asserted = {(o.name, o.cls) for o in base.objects}
    inferred_objects = frozenset(o for o in objs if o not in asserted)
    new = [l for l in links if l not in base_links]
    model = frozenset(l for l in new if l.feature in model_features)
    plain = frozenset(l for l in new if l.feature not in model_features)
    return CompletionReport(base, completed, inferred_objects, plain, model, tuple(objs), tuple(links))


def render_core_item(item: CoreItem) -> str:
    return f"{item.id} [{item.category}] {item.formula}"


def make_diagnosis(problem, ids) -> Diagnosis:
    items = []
    for c in problem.constraints:
        if c.id in ids:
            items.append(CoreItem(c.id, c.span, c.category, show(c.formula), c.label))
    return Diagnosis(tuple(items))


__all__ = [
    "BaseNotContained",
    "CompletionReport",
    "CoreItem",
    "Diagnosis",
    "completed_facts",
    "diff_completion",
    "make_diagnosis",
    "render_core_item",
]

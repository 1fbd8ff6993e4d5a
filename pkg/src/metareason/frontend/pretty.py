"""Print a metamodel syntax tree back to source text."""
from __future__ import annotations

from ..kernel.printer import show
from .syntax import ClassDecl, DataTypeDecl, EnumDecl, Feature, Metamodel, Package


def _feature(f: Feature) -> str:
    parts = [q.word for q in f.qualifiers] + [f.kind]
    if f.cardinality:
        parts.append(f.cardinality.word)
    parts.append(f"{f.name} : {f.type} [{f.mult.text}]")
    words = [k.word for k in f.flags] + [k.word for k in f.props]
    if words:
        parts.append("{ " + " ".join(words) + " }")
    return " ".join(parts)


def _class(c: ClassDecl, indent: str) -> list[str]:
    head = []
    if c.abstract:
        head.append("abstract")
    if c.cardinality:
        head.append(c.cardinality.word)
    name = c.name
    if c.params:
        ps = []
        for p in c.params:
            ps.append(p.name + (" extends " + " & ".join(str(b) for b in p.bounds) if p.bounds else ""))
        name += "<" + ", ".join(ps) + ">"
    head += ["class", name]
    if c.extends:
        head.append("extends " + ", ".join(str(t) for t in c.extends))
    if c.bound:
        lo, hi = c.bound
        head.append(f"[{lo}, {'*' if hi is None else hi}]")
    lines = [indent + " ".join(head) + " {"]
    for f in c.features:
        lines.append(indent + "  " + _feature(f))
    for inv in c.invariants:
        lines.append(indent + "  " + show(inv.formula))
    lines.append(indent + "}")
    return lines


def _package(p: Package, indent: str) -> list[str]:
    lines = [f"{indent}package {p.name} {{"]
    inner = indent + "  "
    for q in p.packages:
        lines += _package(q, inner)
    for c in p.classifiers:
        if isinstance(c, ClassDecl):
            lines += _class(c, inner)
        elif isinstance(c, DataTypeDecl):
            lines.append(f"{inner}datatype {c.name};")
        elif isinstance(c, EnumDecl):
            lines.append(f"{inner}enum {c.name} {{ {', '.join(c.literals)} }}")
    for inv in p.invariants:
        lines.append(inner + show(inv.formula))
    lines.append(indent + "}")
    return lines


def pretty(mm: Metamodel) -> str:
    lines: list[str] = []
    for p in mm.packages:
        lines += _package(p, "")
    return "\n".join(lines) + "\n"

"""Text and line-oriented renderings of outcomes, diagnoses and translation logs."""
from __future__ import annotations

import json
from typing import Mapping

from .frontend.diagnostics import excerpt
from .instance.completion import CompletionReport, Diagnosis
from .kernel.printer import show


def stats_line(stats: Mapping) -> str:
    return (
        f"vars={stats['vars']} clauses={stats['clauses']} "
        f"translation_ms={stats['translation_ms']:.1f} solving_ms={stats['solving_ms']:.1f} "
        f"outcome={stats['outcome']}"
    )


def render_diagnosis(diag: Diagnosis, sources: Mapping[str, str]) -> str:
    out = [f"inconsistent: minimal core of {len(diag.core)} constraint(s)"]
    for item in diag.core:
        out.append("")
        out.append(f"{item.category}[{item.id}]: {item.label or item.id}")
        if item.span is not None:
            out.append(f"  --> {item.span.file}:{item.span.line}:{item.span.column}")
            src = sources.get(item.span.file)
            if src is not None:
                out.extend(excerpt(src, item.span))
        out.append(f"  = formula: {item.formula}")
    return "\n".join(out) + "\n"


def diagnosis_records(diag: Diagnosis) -> list[str]:
    recs = []
    for item in diag.core:
        rec = {"kind": "core", "id": item.id, "category": item.category, "formula": item.formula}
        if item.span is not None:
            rec.update(file=item.span.file, line=item.span.line, column=item.span.column)
        recs.append(json.dumps(rec, sort_keys=True))
    return recs


def completion_records(index: int, report: CompletionReport) -> list[str]:
    recs = []
    for name, cls, inferred in report.objects():
        recs.append(json.dumps({"kind": "object", "completion": index, "name": name, "class": cls,
                                "inferred": inferred}, sort_keys=True))
    for link, inferred, model in report.links():
        recs.append(json.dumps({"kind": "link", "completion": index, "source": link.source,
                                "feature": link.feature, "target": link.target_text,
                                "inferred": inferred, "model": model}, sort_keys=True))
    return recs


def _tuples(ts) -> str:
    names = sorted(ts.names(), key=lambda t: [ts.universe.ordinal(a) for a in t])
    return "{" + ", ".join("(" + ", ".join(t) + ")" for t in names) + "}"


def translation_log(analysis, outcome=None) -> str:
    """Sections, in order: universe, three groups of bounds, formulas, outcome, model."""
    tr = analysis.translation
    b = analysis.prepared.bounds
    u = b.universe
    out = ["== Universe ==", f"{len(u)} atoms", " ".join(u.atoms), ""]
    unary = [r for r in analysis.problem.relations if r.arity == 1]
    internal = [r for r in analysis.problem.relations if r.arity > 1 and r.kind != "feature"]
    user = [r for r in analysis.problem.relations if r.arity > 1 and r.kind == "feature"]
    for title, rels in (("Bounds for Unary Relations", unary),
                        ("Bounds for Internal Binary Relations", internal),
                        ("Bounds for User Binary Relations", user)):
        out.append(f"== {title} ==")
        for r in rels:
            out.append(f"{r.name} ({r.kind})")
            out.append(f"  lower: {_tuples(b.lower(r))}")
            out.append(f"  upper: {_tuples(b.upper(r))}")
        out.append("")
    out.append("== Generated Formulas ==")
    for c in analysis.problem.constraints:
        out.append(f"[s{tr.selector_of[c.id]}] {c.id} ({c.category}): {show(c.formula)}")
    out.append("")
    if outcome is not None:
        out.append("== Outcome and statistics ==")
        out.append(stats_line(outcome.stats))
        out.append("")
        if outcome.sat:
            out.append("== Generated Model ==")
            for r in analysis.problem.relations:
                if r.kind in ("class", "feature", "builtin"):
                    out.append(f"{r.name} = {_tuples(outcome.instance[r])}")
            out.append("")
        else:
            out.append("== Minimal Core ==")
            for item in outcome.diagnosis.core:
                out.append(f"{item.id}: {item.formula}")
            out.append("")
    return "\n".join(out)

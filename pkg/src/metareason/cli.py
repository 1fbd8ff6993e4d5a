"""metareason: consistency checking and completion of metamodel instances.

Exit status: 0 consistent, 1 inconsistent, 2 usage/parse/type error, 3 internal failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .frontend.diagnostics import FrontendError, render, render_error
from .instance.ais import serialize_instance
from .instance.bounds import BoundsError, ScopeConfig
from .instance.completion import BaseNotContained
from .kernel.errors import KernelError
from .pipeline import Analysis, SoundnessError, load_instance, load_metamodel
from .report import completion_records, diagnosis_records, render_diagnosis, stats_line, translation_log

EXIT_SAT, EXIT_UNSAT, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("check-meta", "check", "complete", "log")


@dataclass
class RunConfig:
    command: str
    metamodel: str
    instance: Optional[str] = None
    per_class: dict[str, int] = field(default_factory=dict)
    default_scope: int = 3
    bitwidth: int = 8
    max_solutions: int = 10
    hard_facts: bool = False
    dimacs: Optional[str] = None
    seed: Optional[int] = None
    format: str = "text"

    def __post_init__(self):
        if self.command in ("check", "complete") and self.instance is None:
            raise ValueError(f"{self.command} needs an instance file")
        if self.max_solutions < 1:
            raise ValueError("--max-solutions must be at least 1")

    @property
    def scope(self) -> ScopeConfig:
        return ScopeConfig(self.default_scope, dict(self.per_class), self.bitwidth)


def _scope_arg(text: str) -> tuple[str, int]:
    name, sep, value = text.rpartition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected Class=n, got {text!r}")
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"scope for {name} is not an integer: {value!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"scope for {name} must be non-negative")
    return name, n


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="metareason", description="Check and complete instances of a metamodel.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("metamodel", help="metamodel file (.aie)")
    p.add_argument("instance", nargs="?", help="partial instance file (.ais)")
    p.add_argument("--scope", action="append", type=_scope_arg, default=[], metavar="Class=n",
                   help="total atoms for a concrete class (repeatable)")
    p.add_argument("--default-scope", type=_nonneg, default=3, metavar="n")
    p.add_argument("--bitwidth", type=int, default=8, choices=range(2, 17), metavar="b")
    p.add_argument("--max-solutions", type=_positive, default=10, metavar="k")
    p.add_argument("--hard-facts", action="store_true", help="put instance links in lower bounds")
    p.add_argument("--dimacs", metavar="path", help="write the CNF here before solving")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("text", "lines"), default="text")
    return p


def parse_args(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return RunConfig(ns.command, ns.metamodel, ns.instance, dict(ns.scope), ns.default_scope, ns.bitwidth,
                         ns.max_solutions, ns.hard_facts, ns.dimacs, ns.seed, ns.format)
    except ValueError as e:
        parser.print_usage(sys.stderr)
        parser.exit(EXIT_USAGE, f"metareason: error: {e}\n")


def execute(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    sources: dict[str, str] = {}
    try:
        mm = load_metamodel(cfg.metamodel)
        sources[cfg.metamodel] = mm.source
        for w in mm.warnings:
            print(render(w.message, w.span, mm.source, w.code, "warning"), file=err)
        inst = None
        if cfg.instance is not None and cfg.command != "check-meta":
            inst = load_instance(cfg.instance, mm)
            sources[cfg.instance] = inst.source
            for w in inst.warnings:
                print(render(w.message, w.span, inst.source, w.code, "warning"), file=err)
        analysis = Analysis(mm, inst, cfg.scope, cfg.hard_facts, cfg.seed)
    except FrontendError as e:
        src = next((s for f, s in sources.items() if e.span is not None and e.span.file == f), None)
        if src is None and e.span is not None:
            try:
                with open(e.span.file, encoding="utf-8") as fh:
                    src = fh.read()
            except OSError:
                src = None
        print(render_error(e, src), file=err)
        return EXIT_USAGE
    except (OSError, BoundsError, KeyError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE

    if cfg.dimacs:
        try:
            with open(cfg.dimacs, "w") as fh:
                fh.write(analysis.dimacs())
        except OSError as e:
            print(f"error: {e}", file=err)
            return EXIT_USAGE

    try:
        return _run(cfg, analysis, sources, out, err)
    except (SoundnessError, BaseNotContained, KernelError) as e:
        print(f"internal error: {e}", file=err)
        return EXIT_INTERNAL


def _run(cfg: RunConfig, analysis: Analysis, sources, out, err) -> int:
    outcome = analysis.solve()
    print(stats_line(outcome.stats), file=err)
    if cfg.command == "log":
        out.write(translation_log(analysis, outcome))
        return EXIT_SAT if outcome.sat else EXIT_UNSAT
    if not outcome.sat:
        if cfg.format == "lines":
            out.write("\n".join(diagnosis_records(outcome.diagnosis)) + "\n")
        else:
            out.write(render_diagnosis(outcome.diagnosis, sources))
        return EXIT_UNSAT
    if cfg.command in ("check-meta", "check"):
        out.write('{"kind": "outcome", "outcome": "consistent"}\n' if cfg.format == "lines" else "consistent\n")
        return EXIT_SAT
    n = 0
    for i, report in enumerate(analysis.completions(cfg.max_solutions), 1):
        n = i
        if cfg.format == "lines":
            out.write("\n".join(completion_records(i, report)) + "\n")
        else:
            out.write(f"-- completion {i}\n")
            out.write(serialize_instance(report))
    exhausted = n < cfg.max_solutions
    if cfg.format == "lines":
        out.write(f'{{"count": {n}, "exhausted": {"true" if exhausted else "false"}, "kind": "summary"}}\n')
    else:
        out.write(f"-- {n} completion(s){'; enumeration exhausted' if exhausted else ''}\n")
    return EXIT_SAT


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())

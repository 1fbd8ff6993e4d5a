"""DIMACS CNF import/export for cross-checking against external solvers."""
from __future__ import annotations

from typing import Iterable, Sequence


def dumps(clauses: Iterable[Sequence[int]], num_vars: int, comments: Sequence[str] = ()) -> str:
    clauses = [tuple(c) for c in clauses]
    for c in clauses:
        for lit in c:
            num_vars = max(num_vars, abs(lit))
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {num_vars} {len(clauses)}")
    lines.extend(" ".join(map(str, c + (0,))) for c in clauses)
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[int, list[list[int]]]:
    """Parse DIMACS text into (num_vars, clauses)."""
    num_vars = 0
    clauses: list[list[int]] = []
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    return num_vars, clauses


def dump_solver(solver, path: str, comments: Sequence[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(solver.original, solver.num_vars, comments))

from .dimacs import dumps as to_dimacs, loads as from_dimacs
from .solver import (
    MinimizeOnSat,
    Sat,
    Solver,
    Unsat,
    add_clause,
    minimize_core,
    next_model,
    solve_under_assumptions,
)

__all__ = [
    "MinimizeOnSat",
    "Sat",
    "Solver",
    "Unsat",
    "add_clause",
    "from_dimacs",
    "minimize_core",
    "next_model",
    "solve_under_assumptions",
    "to_dimacs",
]

"""CDCL SAT solver with assumptions, unsat cores and model enumeration.

Literals at the API are DIMACS-style non-zero ints. Internally literal ``v``
is ``2*v`` and ``-v`` is ``2*v + 1``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class MinimizeOnSat(Exception):
    """minimize_core was handed a satisfiable assumption set."""


@dataclass(frozen=True)
class Sat:
    assignment: Mapping[int, bool]

    def __bool__(self) -> bool:
        return True

    def value(self, lit: int) -> bool:
        v = self.assignment[abs(lit)]
        return v if lit > 0 else not v


@dataclass(frozen=True)
class Unsat:
    failed: frozenset = field(default_factory=frozenset)

    def __bool__(self) -> bool:
        return False


@dataclass
class Stats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    solves: int = 0


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    """Incremental CDCL solver.

    Branching picks the lowest-numbered unassigned variable, true first, so
    enumeration order is reproducible. ``seed`` shuffles the variable order.
    """

    def __init__(self, num_vars: int = 0, seed: int | None = None, restart_base: int = 100):
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.original: list[tuple[int, ...]] = []
        self.watches: list[list[int]] = [[], []]
        self.vals: list[int] = [0, 0]  # per internal literal: 1 true, -1 false, 0 unassigned
        self.level: list[int] = [0]
        self.reason: list[int | None] = [None]
        self.seen = bytearray(1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.unsat = False
        self.stats = Stats()
        self.restart_base = restart_base
        self._rng = random.Random(seed) if seed is not None else None
        self.order: list[int] = []
        self.pos: list[int] = [0]
        self.scan = 0
        self.enumerated: list[dict[int, bool]] = []
        self.ensure_vars(num_vars)

    # ------------------------------------------------------------ variables

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.new_var()

    def new_var(self) -> int:
        self.num_vars += 1
        v = self.num_vars
        self.watches.extend(([], []))
        self.vals.extend((0, 0))
        self.level.append(0)
        self.reason.append(None)
        self.seen.append(0)
        if self._rng is None:
            self.pos.append(len(self.order))
            self.order.append(v)
        else:
            at = self._rng.randint(0, len(self.order))
            self.order.insert(at, v)
            self.pos.append(0)
            for i in range(at, len(self.order)):
                self.pos[self.order[i]] = i
            self.scan = 0
        self.scan = min(self.scan, self.pos[v])
        return v

    # -------------------------------------------------------------- clauses

    def add_clause(self, literals: Iterable[int]) -> None:
        """Add a clause; an empty clause makes the solver permanently UNSAT."""
        literals = tuple(literals)
        self.original.append(literals)
        if self.unsat:
            return
        self._cancel_until(0)
        lits: list[int] = []
        seen = set()
        for x in literals:
            if x == 0:
                raise ValueError("literal 0 is not allowed")
            v = abs(x)
            if v > self.num_vars:
                self.ensure_vars(v)
            il = 2 * v + (x < 0)
            if il ^ 1 in seen:
                return  # tautology
            if il in seen:
                continue
            seen.add(il)
            lits.append(il)
        vals = self.vals
        if any(vals[l] == 1 for l in lits):
            return
        lits = [l for l in lits if vals[l] == 0]
        if not lits:
            self.unsat = True
            return
        if len(lits) == 1:
            self._assign(lits[0], None)
            if self._propagate() is not None:
                self.unsat = True
            return
        self._attach(lits)

    def _attach(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    # ---------------------------------------------------------------- trail

    def _assign(self, lit: int, reason: int | None) -> None:
        v = lit >> 1
        self.vals[lit] = 1
        self.vals[lit ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        vals = self.vals
        pos = self.pos
        start = self.trail_lim[lvl]
        scan = self.scan
        for lit in self.trail[start:]:
            vals[lit] = 0
            vals[lit ^ 1] = 0
            self.reason[lit >> 1] = None
            p = pos[lit >> 1]
            if p < scan:
                scan = p
        self.scan = scan
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _propagate(self) -> int | None:
        trail = self.trail
        vals = self.vals
        watches = self.watches
        clauses = self.clauses
        level = self.level
        reason = self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            props += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if vals[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if vals[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if vals[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        self.stats.propagations += props
                        return ci
                    v = first >> 1
                    vals[first] = 1
                    vals[first ^ 1] = -1
                    level[v] = dl
                    reason[v] = ci
                    trail.append(first)
            del ws[j:]
        self.qhead = qhead
        self.stats.propagations += props
        return None

    # ------------------------------------------------------------- analysis

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        clauses = self.clauses
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        c = clauses[confl]
        start = 0
        while True:
            for q in c[start:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = 0
            path -= 1
            if path == 0:
                break
            c = clauses[reason[v]]
            start = 1
        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = 0
        bt = 0
        if len(learnt) > 1:
            best = 1
            for i in range(2, len(learnt)):
                if level[learnt[i] >> 1] > level[learnt[best] >> 1]:
                    best = i
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        return learnt, bt

    def _analyze_final(self, failed: int) -> set[int]:
        """Assumption literals (internal) responsible for ``failed`` being false."""
        out = {failed}
        if not self.trail_lim:
            return out
        seen = self.seen
        seen[failed >> 1] = 1
        clauses = self.clauses
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            lit = self.trail[i]
            x = lit >> 1
            if seen[x]:
                r = self.reason[x]
                if r is None:
                    out.add(lit)
                else:
                    for q in clauses[r][1:]:
                        if self.level[q >> 1] > 0:
                            seen[q >> 1] = 1
                seen[x] = 0
        seen[failed >> 1] = 0
        return out

    def _pick_branch(self) -> int:
        order = self.order
        vals = self.vals
        i = self.scan
        n = len(order)
        while i < n:
            v = order[i]
            if vals[2 * v] == 0:
                self.scan = i
                return 2 * v
            i += 1
        self.scan = n
        return -1

    # ---------------------------------------------------------------- solve

    def solve(self, assumptions: Iterable[int] = ()) -> Sat | Unsat:
        """Solve under ``assumptions``; UNSAT carries the failed assumptions."""
        self.stats.solves += 1
        assumptions = list(dict.fromkeys(assumptions))
        for a in assumptions:
            if abs(a) > self.num_vars:
                self.ensure_vars(abs(a))
        if self.unsat:
            return Unsat(frozenset())
        self._cancel_until(0)
        if self._propagate() is not None:
            self.unsat = True
            return Unsat(frozenset())
        assumps = [2 * abs(a) + (a < 0) for a in assumptions]
        conflicts_since_restart = 0
        restart_round = 0
        budget = self.restart_base * _luby(restart_round)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats.conflicts += 1
                if not self.trail_lim:
                    self.unsat = True
                    return Unsat(frozenset())
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._assign(learnt[0], ci)
                conflicts_since_restart += 1
                continue
            if conflicts_since_restart >= budget:
                self.stats.restarts += 1
                restart_round += 1
                budget = self.restart_base * _luby(restart_round)
                conflicts_since_restart = 0
                self._cancel_until(0)
                continue
            nxt = -1
            while len(self.trail_lim) < len(assumps):
                p = assumps[len(self.trail_lim)]
                val = self.vals[p]
                if val == 1:
                    self.trail_lim.append(len(self.trail))
                elif val == -1:
                    core = self._analyze_final(p)
                    self._cancel_until(0)
                    return Unsat(frozenset((l >> 1) * (-1 if l & 1 else 1) for l in core))
                else:
                    nxt = p
                    break
            if nxt == -1:
                nxt = self._pick_branch()
                if nxt == -1:
                    model = {v: self.vals[2 * v] == 1 for v in range(1, self.num_vars + 1)}
                    self._cancel_until(0)
                    return Sat(model)
                self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(nxt, None)

    # ----------------------------------------------------------- utilities

    def satisfies(self, assignment: Mapping[int, bool]) -> bool:
        """Check every clause ever added against ``assignment``."""
        for c in self.original:
            if not any(assignment.get(abs(l), False) == (l > 0) for l in c):
                return False
        return True


def add_clause(solver: Solver, literals: Sequence[int]) -> None:
    solver.add_clause(literals)


def solve_under_assumptions(solver: Solver, assumptions: Iterable[int]) -> Sat | Unsat:
    return solver.solve(assumptions)


def minimize_core(solver: Solver, core: Iterable[int], order: Sequence[int] | None = None) -> frozenset:
    """Deletion-based minimization to a 1-minimal unsatisfiable assumption set.

    Candidates are tried for removal in ``order`` (default: the iteration
    order of ``core``); earlier candidates are dropped in preference to later
    ones when several minimal cores exist.
    """
    current = list(dict.fromkeys(core))
    first = solver.solve(current)
    if first:
        raise MinimizeOnSat("assumption set is satisfiable")
    if solver.unsat:
        return frozenset()
    keep = set(first.failed)
    ranked = [l for l in dict.fromkeys(order) if l in keep] if order is not None else []
    candidates = ranked + [l for l in current if l in keep and l not in set(ranked)]
    for lit in candidates:
        if lit not in keep:
            continue
        trial = [l for l in current if l in keep and l != lit]
        result = solver.solve(trial)
        if not result:
            keep = set(result.failed) & set(trial)
    return frozenset(l for l in current if l in keep)


def next_model(solver: Solver, projection: Iterable[int], assumptions: Iterable[int] = ()) -> Sat | Unsat:
    """Next model distinct on ``projection``; blocks it before returning."""
    projection = sorted(set(projection))
    result = solver.solve(assumptions)
    if result:
        solver.enumerated.append(dict(result.assignment))
        solver.add_clause([-v if result.assignment[v] else v for v in projection])
    return result

"""Relational problem + bounds -> CNF, and SAT assignments back to instances."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from ..kernel import ast as A
from ..kernel.evaluate import wrap
from ..kernel.universe import Bounds, ConcreteInstance, Relation, TupleSet
from ..problem import RelationalProblem
from ..sat.solver import Solver
from . import ints
from . import matrix as M
from .circuit import Circuit, Value, neg
from .matrix import BoolMatrix


class TranslationError(Exception):
    pass


class UnboundedRelation(TranslationError):
    def __init__(self, name):
        super().__init__(f"relation {name} is referenced but has no bounds")
        self.name = name


class IncompleteAssignment(TranslationError):
    pass


@dataclass
class Translation:
    problem: RelationalProblem
    bounds: Bounds
    bitwidth: int
    clauses: list[tuple[int, ...]]
    num_vars: int
    varmap: dict[Relation, dict[tuple, Value]]
    primary_vars: list[int]
    selector_of: dict[str, int]
    stats: dict = field(default_factory=dict)

    @property
    def constraint_of(self) -> dict[int, str]:
        return {v: k for k, v in self.selector_of.items()}

    @property
    def selectors(self) -> list[int]:
        return list(self.selector_of.values())

    def var_of(self, relation: Relation | str, atoms: tuple[str, ...]) -> Value:
        if isinstance(relation, str):
            relation = self.bounds.relation(relation)
        u = self.bounds.universe
        return self.varmap[relation].get(tuple(u.ordinal(a) for a in atoms), False)

    def new_solver(self, seed: int | None = None) -> Solver:
        s = Solver(self.num_vars, seed=seed)
        for c in self.clauses:
            s.add_clause(c)
        return s


class _Translator:
    def __init__(self, problem: RelationalProblem, bounds: Bounds, bitwidth: int):
        self.problem = problem
        self.bounds = bounds
        self.universe = bounds.universe
        self.bitwidth = bitwidth
        self.varmap: dict[Relation, dict[tuple, Value]] = {}
        self.primary: list[int] = []
        next_var = 1
        order = list(problem.relations) + [r for r in bounds.relations if r not in problem.relations]
        self.matrices: dict[str, BoolMatrix] = {}
        for r in order:
            if r not in bounds.entries:
                continue
            lower, upper = bounds.entries[r]
            cells: dict[tuple, Value] = {}
            for t in sorted(upper.tuples):
                if t in lower.tuples:
                    cells[t] = True
                else:
                    cells[t] = next_var
                    self.primary.append(next_var)
                    next_var += 1
            self.varmap[r] = cells
            self.matrices[r.name] = BoolMatrix(r.arity, cells)
        self.selector_of: dict[str, int] = {}
        for c in problem.constraints:
            self.selector_of[c.id] = next_var
            next_var += 1
        self.circuit = Circuit(next_var)
        self._univ = BoolMatrix(1, {(i,): True for i in range(len(self.universe))})
        self._free: dict[int, tuple[str, ...]] = {}
        self._memo: dict[tuple, object] = {}

    # ------------------------------------------------------------- helpers

    def free_vars(self, node) -> tuple[str, ...]:
        key = id(node)
        got = self._free.get(key)
        if got is not None:
            return got
        if isinstance(node, A.Var):
            out = {node.name}
        elif isinstance(node, (A.Quant, A.Comprehension)):
            out = set()
            bound: set[str] = set()
            for d in node.decls:
                out |= set(self.free_vars(d.expr)) - bound
                bound.add(d.name)
            out |= set(self.free_vars(node.body)) - bound
        else:
            out = set()
            for ch in A.children(node):
                out |= set(self.free_vars(ch))
        res = tuple(sorted(out))
        self._free[key] = res
        return res

    def _key(self, node, env):
        return (id(node),) + tuple(env[v] for v in self.free_vars(node))

    # --------------------------------------------------------- expressions

    def expr(self, node, env) -> BoolMatrix:
        key = self._key(node, env)
        got = self._memo.get(key)
        if got is None:
            got = self._expr(node, env)
            self._memo[key] = got
        return got

    def _expr(self, node, env) -> BoolMatrix:
        c = self.circuit
        if isinstance(node, A.Var):
            return M.singleton(env[node.name])
        if isinstance(node, A.RelRef):
            try:
                return self.matrices[node.name]
            except KeyError:
                raise UnboundedRelation(node.name) from None
        if isinstance(node, A.Univ):
            return self._univ
        if isinstance(node, A.UnaryExpr):
            m = self.expr(node.expr, env)
            return M.transpose(m) if node.op == "~" else M.closure(c, m)
        if isinstance(node, A.BinExpr):
            a = self.expr(node.left, env)
            b = self.expr(node.right, env)
            op = node.op
            if op == "+":
                return M.union(c, a, b)
            if op == "&":
                return M.intersection(c, a, b)
            if op == "-":
                return M.difference(c, a, b)
            if op == ".":
                return M.join(c, a, b)
            return M.product(c, a, b)
        if isinstance(node, A.IfExpr):
            cond = self.formula(node.cond, env)
            return M.ite(c, cond, self.expr(node.then, env), self.expr(node.other, env))
        if isinstance(node, A.Comprehension):
            cells: dict[tuple, Value] = {}
            for binding, guard, atoms in self._ground(node.decls, env):
                cells[atoms] = c.and_(guard, self.formula(node.body, binding))
            return BoolMatrix(len(node.decls), cells)
        if isinstance(node, A.Projection):
            m = self.expr(node.expr, env)
            cols = [A.constant_int(col) for col in node.columns]
            if any(k is None for k in cols):
                raise TranslationError("projection columns must be integer constants")
            acc: dict[tuple, list] = {}
            for t, v in m.cells.items():
                acc.setdefault(tuple(t[k] for k in cols), []).append(v)
            return BoolMatrix(len(cols), {k: c.or_all(vs) for k, vs in acc.items()})
        if isinstance(node, A.IntToExpr):
            bits = self.int(node.value, env)
            if not self.universe.has_ints():
                raise TranslationError("int2expr needs integer atoms in the universe")
            cells = {}
            for o, v in self.universe.int_ordinals.items():
                cells[(o,)] = ints.equal(c, bits, ints.const(v, self.bitwidth))
            return BoolMatrix(1, cells)
        raise TypeError(f"not an expression: {node!r}")

    def _ground(self, decls, env):
        """Yield (env, guard, atoms) for each singleton choice per declaration."""
        c = self.circuit

        def go(i, cur, guard, atoms):
            if i == len(decls):
                yield cur, guard, atoms
                return
            d = decls[i]
            m = self.expr(d.expr, cur)
            for t, v in m.items():
                inner = dict(cur)
                inner[d.name] = t
                g = c.and_(guard, v)
                if g is False:
                    continue
                yield from go(i + 1, inner, g, atoms + t)

        yield from go(0, dict(env), True, ())

    # ------------------------------------------------------------ integers

    def int(self, node, env) -> list:
        key = self._key(node, env)
        got = self._memo.get(key)
        if got is None:
            got = self._int(node, env)
            self._memo[key] = got
        return got

    def _int(self, node, env) -> list:
        c = self.circuit
        bw = self.bitwidth
        if isinstance(node, A.IntLit):
            return ints.const(wrap(node.value, bw), bw)
        if isinstance(node, A.Card):
            return ints.popcount(c, self.expr(node.expr, env).values(), bw)
        if isinstance(node, A.Sum):
            m = self.expr(node.expr, env)
            acc = ints.const(0, bw)
            for (o,), v in m.items():
                val = self.universe.int_value(o)
                if val is None:
                    continue
                term = [c.and_(v, b) for b in ints.const(val, bw)]
                acc = ints.add(c, acc, term)
            return acc
        if isinstance(node, A.Arith):
            a = self.int(node.left, env)
            b = self.int(node.right, env)
            if node.op == "+":
                return ints.add(c, a, b)
            if node.op == "-":
                return ints.sub(c, a, b)
            if node.op == "*":
                return ints.mul(c, a, b)
            return ints.sdiv(c, a, b)
        raise TypeError(f"not an integer expression: {node!r}")

    # ------------------------------------------------------------ formulas

    def formula(self, node, env) -> Value:
        key = self._key(node, env)
        got = self._memo.get(key)
        if got is None:
            got = self._formula(node, env)
            self._memo[key] = got
        return got

    def _formula(self, node, env) -> Value:
        c = self.circuit
        if isinstance(node, A.Compare):
            a = self.expr(node.left, env)
            b = self.expr(node.right, env)
            return M.subset(c, a, b) if node.op == "in" else M.equal(c, a, b)
        if isinstance(node, A.Mult):
            vals = self.expr(node.expr, env).values()
            if node.mult == "some":
                return c.or_all(vals)
            if node.mult == "no":
                return neg(c.or_all(vals))
            if node.mult == "lone":
                return c.at_most_one(vals)
            return c.and_(c.or_all(vals), c.at_most_one(vals))
        if isinstance(node, A.Not):
            return neg(self.formula(node.formula, env))
        if isinstance(node, A.BinFormula):
            a = self.formula(node.left, env)
            if node.op == "&&":
                return c.and_(a, self.formula(node.right, env)) if a is not False else False
            if node.op == "||":
                return c.or_(a, self.formula(node.right, env)) if a is not True else True
            return c.implies(a, self.formula(node.right, env)) if a is not False else True
        if isinstance(node, A.Quant):
            parts = []
            if node.quant == "all":
                for binding, guard, _ in self._ground(node.decls, env):
                    parts.append(c.implies(guard, self.formula(node.body, binding)))
                    if parts[-1] is False:
                        return False
                return c.and_all(parts)
            for binding, guard, _ in self._ground(node.decls, env):
                parts.append(c.and_(guard, self.formula(node.body, binding)))
                if parts[-1] is True:
                    return True
            return c.or_all(parts)
        if isinstance(node, A.IntCompare):
            a = self.int(node.left, env)
            b = self.int(node.right, env)
            if node.op == "=":
                return ints.equal(c, a, b)
            if node.op == "<":
                return ints.slt(c, a, b)
            return ints.slt(c, b, a)
        raise TypeError(f"not a formula: {node!r}")


def translate(problem: RelationalProblem, bounds: Bounds, bitwidth: int | None = None) -> Translation:
    """Encode ``problem`` under ``bounds`` as CNF.

    Each constraint ``c`` becomes ``selector_c -> encoding(c)``; assuming every
    selector gives a CNF equisatisfiable with the relational problem.
    """
    start = time.perf_counter()
    bitwidth = bitwidth or problem.bitwidth
    for r in problem.relations:
        if r not in bounds.entries:
            raise UnboundedRelation(r.name)
    tr = _Translator(problem, bounds, bitwidth)
    clauses: list[tuple[int, ...]] = []
    for con in problem.constraints:
        root = tr.formula(con.formula, {})
        sel = tr.selector_of[con.id]
        if root is True:
            continue
        if root is False:
            clauses.append((-sel,))
        else:
            clauses.append((-sel, root))
    clauses = tr.circuit.clauses + clauses
    elapsed = (time.perf_counter() - start) * 1000.0
    num_vars = tr.circuit.num_vars
    stats = {
        "num_vars": num_vars,
        "num_primary": len(tr.primary),
        "num_gates": tr.circuit.num_gates,
        "num_clauses": len(clauses),
        "translation_ms": elapsed,
    }
    return Translation(problem, bounds, bitwidth, clauses, num_vars, tr.varmap, tr.primary, tr.selector_of, stats)


def interpret(translation: Translation, assignment: Mapping[int, bool]) -> ConcreteInstance:
    """Instance whose relations hold their lower bound plus every true optional tuple."""
    u = translation.bounds.universe
    valuation = {}
    for r, cells in translation.varmap.items():
        tuples = set()
        for t, v in cells.items():
            if v is True:
                tuples.add(t)
            elif v is not False:
                try:
                    if assignment[v]:
                        tuples.add(t)
                except KeyError:
                    raise IncompleteAssignment(f"no value for variable {v}") from None
        valuation[r] = TupleSet(u, r.arity, frozenset(tuples))
    return ConcreteInstance(u, valuation, translation.bitwidth)

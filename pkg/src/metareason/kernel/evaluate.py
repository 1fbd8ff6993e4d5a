"""Reference evaluator: the semantics every other component is checked against."""
from __future__ import annotations

from typing import Mapping

from .ast import (
    Arith,
    BinExpr,
    BinFormula,
    Card,
    Compare,
    Comprehension,
    Expr,
    Formula,
    IfExpr,
    IntCompare,
    IntExpr,
    IntLit,
    IntToExpr,
    Mult,
    Not,
    Projection,
    Quant,
    RelRef,
    Sum,
    UnaryExpr,
    Univ,
    Var,
)
from .errors import ArityMismatch, DivisionByZero, IntOutOfRange, UnboundVariable
from .universe import ConcreteInstance, TupleSet


def wrap(value: int, bitwidth: int) -> int:
    """Two's-complement wraparound of ``value`` to ``bitwidth`` bits."""
    half = 1 << (bitwidth - 1)
    return ((value + half) % (1 << bitwidth)) - half


def int_range(bitwidth: int) -> range:
    half = 1 << (bitwidth - 1)
    return range(-half, half)


def arith(op: str, a: int, b: int, bitwidth: int) -> int:
    if op == "+":
        return wrap(a + b, bitwidth)
    if op == "-":
        return wrap(a - b, bitwidth)
    if op == "*":
        return wrap(a * b, bitwidth)
    if op == "/":
        if b == 0:
            raise DivisionByZero("division by zero")
        q = abs(a) // abs(b)
        return wrap(q if (a < 0) == (b < 0) else -q, bitwidth)
    raise ValueError(op)


def closure(pairs: frozenset) -> frozenset:
    """Least transitive relation containing ``pairs``."""
    succ: dict = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    out = set()
    for start in succ:
        seen = set()
        stack = list(succ[start])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ.get(x, ()))
        out.update((start, x) for x in seen)
    return frozenset(out)


def _join(a: frozenset, b: frozenset) -> frozenset:
    index: dict = {}
    for t in b:
        index.setdefault(t[0], []).append(t[1:])
    out = set()
    for s in a:
        for rest in index.get(s[-1], ()):
            out.add(s[:-1] + rest)
    return frozenset(out)


class Evaluator:
    def __init__(self, instance: ConcreteInstance):
        self.instance = instance
        self.universe = instance.universe
        self.bitwidth = instance.bitwidth
        self._rels = {r.name: ts.tuples for r, ts in instance.valuation.items()}
        self._univ = frozenset((i,) for i in range(len(self.universe)))

    # relational expressions return raw frozensets of ordinal tuples
    def expr(self, node: Expr, env: Mapping[str, frozenset]) -> frozenset:
        if isinstance(node, Var):
            try:
                return env[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
        if isinstance(node, RelRef):
            try:
                return self._rels[node.name]
            except KeyError:
                raise ArityMismatch(f"relation {node.name} has no value in this instance") from None
        if isinstance(node, Univ):
            return self._univ
        if isinstance(node, UnaryExpr):
            v = self.expr(node.expr, env)
            if node.op == "~":
                return frozenset((b, a) for a, b in v)
            return closure(v)
        if isinstance(node, BinExpr):
            a = self.expr(node.left, env)
            b = self.expr(node.right, env)
            op = node.op
            if op == "+":
                return a | b
            if op == "&":
                return a & b
            if op == "-":
                return a - b
            if op == ".":
                return _join(a, b)
            return frozenset(s + t for s in a for t in b)
        if isinstance(node, IfExpr):
            if self.formula(node.cond, env):
                return self.expr(node.then, env)
            return self.expr(node.other, env)
        if isinstance(node, Comprehension):
            out = set()
            for binding, atoms in self._bindings(node.decls, env):
                if self.formula(node.body, binding):
                    out.add(atoms)
            return frozenset(out)
        if isinstance(node, Projection):
            v = self.expr(node.expr, env)
            cols = [self.int(c, env) for c in node.columns]
            return frozenset(tuple(t[c] for c in cols) for t in v)
        if isinstance(node, IntToExpr):
            value = self.int(node.value, env)
            o = self.universe.int_atom(value)
            if o is None:
                raise IntOutOfRange(f"no integer atom for {value}")
            return frozenset({(o,)})
        raise TypeError(f"not an expression: {node!r}")

    def _bindings(self, decls, env):
        """Yield (env, atoms) for every choice of singleton per declaration."""

        def go(i, cur, atoms):
            if i == len(decls):
                yield cur, atoms
                return
            d = decls[i]
            for t in sorted(self.expr(d.expr, cur)):
                inner = dict(cur)
                inner[d.name] = frozenset({t})
                yield from go(i + 1, inner, atoms + t)

        yield from go(0, dict(env), ())

    def int(self, node: IntExpr, env) -> int:
        bw = self.bitwidth
        if isinstance(node, IntLit):
            return wrap(node.value, bw)
        if isinstance(node, Card):
            return wrap(len(self.expr(node.expr, env)), bw)
        if isinstance(node, Sum):
            total = 0
            for (o,) in self.expr(node.expr, env):
                v = self.universe.int_value(o)
                if v is not None:
                    total += v
            return wrap(total, bw)
        if isinstance(node, Arith):
            return arith(node.op, self.int(node.left, env), self.int(node.right, env), bw)
        raise TypeError(f"not an integer expression: {node!r}")

    def formula(self, node: Formula, env) -> bool:
        if isinstance(node, Compare):
            a = self.expr(node.left, env)
            b = self.expr(node.right, env)
            return a <= b if node.op == "in" else a == b
        if isinstance(node, Mult):
            n = len(self.expr(node.expr, env))
            m = node.mult
            if m == "some":
                return n > 0
            if m == "one":
                return n == 1
            if m == "lone":
                return n <= 1
            return n == 0
        if isinstance(node, Not):
            return not self.formula(node.formula, env)
        if isinstance(node, BinFormula):
            if node.op == "&&":
                return self.formula(node.left, env) and self.formula(node.right, env)
            if node.op == "||":
                return self.formula(node.left, env) or self.formula(node.right, env)
            return (not self.formula(node.left, env)) or self.formula(node.right, env)
        if isinstance(node, Quant):
            if node.quant == "all":
                return all(self.formula(node.body, b) for b, _ in self._bindings(node.decls, env))
            return any(self.formula(node.body, b) for b, _ in self._bindings(node.decls, env))
        if isinstance(node, IntCompare):
            a = self.int(node.left, env)
            b = self.int(node.right, env)
            if node.op == "=":
                return a == b
            if node.op == "<":
                return a < b
            return a > b
        raise TypeError(f"not a formula: {node!r}")


def _raw_env(env, universe):
    out = {}
    for k, v in (env or {}).items():
        out[k] = v.tuples if isinstance(v, TupleSet) else frozenset(v)
    return out


def evaluate(instance: ConcreteInstance, node, env: Mapping | None = None):
    """Value of ``node`` over ``instance``: a TupleSet, bool or int.

    ``env`` maps variable names to singleton TupleSets.
    """
    ev = Evaluator(instance)
    raw = _raw_env(env, instance.universe)
    if isinstance(node, Formula):
        return ev.formula(node, raw)
    if isinstance(node, IntExpr):
        return ev.int(node, raw)
    tuples = ev.expr(node, raw)
    arity = len(next(iter(tuples))) if tuples else _static_arity(node, instance, raw)
    return TupleSet(instance.universe, arity, tuples)


def _static_arity(node, instance, raw_env):
    from .ast import arity_of

    rel_arity = {r.name: r.arity for r in instance.valuation}
    env_ar = {k: (len(next(iter(v))) if v else 1) for k, v in raw_env.items()}
    return arity_of(node, rel_arity, env_ar)


def holds(instance: ConcreteInstance, formula: Formula) -> bool:
    return Evaluator(instance).formula(formula, {})

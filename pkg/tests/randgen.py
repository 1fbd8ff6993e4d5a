"""Random relational problems for differential testing against brute force."""
from __future__ import annotations

import random

from metareason.kernel import ast as A
from metareason.kernel.universe import Bounds, Relation, TupleSet, Universe, set_bounds
from metareason.problem import Constraint, RelationalProblem


def random_bounds(rng: random.Random, n_atoms: int, relations: list[Relation], max_free: int, ints=()):
    u = Universe([f"a{i}" for i in range(n_atoms)], ints)
    objects = [i for i in range(n_atoms)]
    b = Bounds(u)
    free_left = max_free
    for r in relations:
        if r.arity == 1:
            space = [(i,) for i in objects]
        else:
            space = [(i, j) for i in objects for j in objects]
        rng.shuffle(space)
        upper_n = rng.randint(0, min(len(space), free_left + 2))
        upper = space[:upper_n]
        lower = [t for t in upper if rng.random() < 0.25]
        free = len(upper) - len(lower)
        if free > free_left:
            lower = upper[: len(upper) - free_left]
            free = free_left
        free_left -= free
        b = set_bounds(b, r, TupleSet(u, r.arity, frozenset(lower)), TupleSet(u, r.arity, frozenset(upper)))
    return b


class FormulaGen:
    def __init__(self, rng: random.Random, relations: list[Relation], with_ints: bool = False):
        self.rng = rng
        self.relations = relations
        self.with_ints = with_ints
        self.counter = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    def expr(self, arity: int, depth: int, env: list[str]) -> A.Expr:
        rng = self.rng
        leaves = [A.RelRef(r.name) for r in self.relations if r.arity == arity]
        if arity == 1:
            leaves += [A.Var(v) for v in env] + [A.Univ()]
        if depth <= 0 or rng.random() < 0.3:
            if leaves:
                return rng.choice(leaves)
            if arity == 2:
                return A.BinExpr("->", self.expr(1, 0, env), self.expr(1, 0, env))
            return A.Univ()
        choices = ["set", "join"]
        if arity == 2:
            choices += ["unary", "product"]
        if arity == 1:
            choices += ["comprehension"]
        if self.with_ints and arity == 1:
            choices += ["cast"]
        choices += ["if"]
        kind = rng.choice(choices)
        if kind == "set":
            op = rng.choice(["+", "&", "-"])
            return A.BinExpr(op, self.expr(arity, depth - 1, env), self.expr(arity, depth - 1, env))
        if kind == "join":
            return A.BinExpr(".", self.expr(1, depth - 1, env), self.expr(arity + 1, depth - 1, env)) if arity == 1 and rng.random() < 0.5 else \
                A.BinExpr(".", self.expr(arity + 1, depth - 1, env), self.expr(1, depth - 1, env)) if arity == 1 else \
                A.BinExpr(".", self.expr(2, depth - 1, env), self.expr(2, depth - 1, env))
        if kind == "unary":
            return A.UnaryExpr(rng.choice(["~", "^"]), self.expr(2, depth - 1, env))
        if kind == "product":
            return A.BinExpr("->", self.expr(1, depth - 1, env), self.expr(1, depth - 1, env))
        if kind == "comprehension":
            v = self.fresh()
            return A.Comprehension((A.Decl(v, self.expr(1, depth - 1, env)),), self.formula(depth - 1, env + [v]))
        if kind == "cast":
            return A.IntToExpr(self.int(depth - 1, env))
        return A.IfExpr(self.formula(depth - 1, env), self.expr(arity, depth - 1, env), self.expr(arity, depth - 1, env))

    def int(self, depth: int, env: list[str]) -> A.IntExpr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.4:
            return rng.choice([A.IntLit(rng.randint(-3, 3)), A.Card(self.expr(rng.choice([1, 2]), 1, env))])
        k = rng.random()
        if k < 0.2:
            return A.Sum(self.expr(1, depth - 1, env))
        return A.Arith(rng.choice(["+", "-", "*"]), self.int(depth - 1, env), self.int(depth - 1, env))

    def formula(self, depth: int, env: list[str] | None = None) -> A.Formula:
        rng = self.rng
        env = env or []
        if depth <= 0:
            kind = rng.choice(["cmp", "mult"])
        else:
            kinds = ["cmp", "mult", "not", "bin", "bin", "quant"]
            if self.with_ints:
                kinds.append("icmp")
            kind = rng.choice(kinds)
        if kind == "cmp":
            ar = rng.choice([1, 2])
            d = max(depth - 1, 0)
            return A.Compare(rng.choice(["in", "="]), self.expr(ar, d, env), self.expr(ar, d, env))
        if kind == "mult":
            ar = rng.choice([1, 2])
            return A.Mult(rng.choice(A.MULTIPLICITIES), self.expr(ar, max(depth - 1, 0), env))
        if kind == "not":
            return A.Not(self.formula(depth - 1, env))
        if kind == "bin":
            return A.BinFormula(rng.choice(A.FORMULA_BINOPS), self.formula(depth - 1, env), self.formula(depth - 1, env))
        if kind == "icmp":
            return A.IntCompare(rng.choice(A.INT_CMPOPS), self.int(depth - 1, env), self.int(depth - 1, env))
        v = self.fresh()
        decl = A.Decl(v, self.expr(1, max(depth - 2, 0), env))
        return A.Quant(rng.choice(["all", "exists"]), (decl,), self.formula(depth - 1, env + [v]))


def random_problem(seed: int, max_atoms: int = 6, max_relations: int = 3, depth: int = 4, max_free: int = 10, with_ints=False):
    rng = random.Random(seed)
    n_rel = rng.randint(1, max_relations)
    relations = [Relation(f"r{i}", rng.choice([1, 2]), "feature") for i in range(n_rel)]
    n_atoms = rng.randint(1, max_atoms)
    ints = range(-8, 8) if with_ints else ()
    bounds = random_bounds(rng, n_atoms, relations, max_free, ints)
    gen = FormulaGen(rng, relations, with_ints)
    constraints = [Constraint(f"f{i}", gen.formula(rng.randint(1, depth))) for i in range(rng.randint(1, 3))]
    return RelationalProblem(relations, constraints, bitwidth=4 if with_ints else 8), bounds

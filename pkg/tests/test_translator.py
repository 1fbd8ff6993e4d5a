import itertools

import pytest

from metareason.kernel import Bounds, Relation, mk_tupleset, mk_universe, set_bounds
from metareason.kernel import ast as A
from metareason.kernel.brute import exists_model
from metareason.kernel.evaluate import Evaluator, arith, closure, int_range
from metareason.problem import Constraint, RelationalProblem
from metareason.sat import Solver
from metareason.translate import UnboundedRelation, interpret, translate
from metareason.translate import ints
from metareason.translate.circuit import Circuit, evaluate_value
from randgen import random_problem


def single(formula, bounds_spec, atoms=("a", "b", "c")):
    u = mk_universe(list(atoms))
    b = Bounds(u)
    rels = []
    for name, arity, lo, hi in bounds_spec:
        r = Relation(name, arity)
        rels.append(r)
        b = set_bounds(b, r, mk_tupleset(u, arity, lo), mk_tupleset(u, arity, hi))
    return RelationalProblem(rels, [Constraint("c", formula)]), b


def solve(problem, bounds):
    tr = translate(problem, bounds)
    return tr, tr.new_solver().solve(tr.selectors)


def test_exact_bound_contradiction():
    p, b = single(A.Mult("no", A.RelRef("r")), [("r", 1, {("a",)}, {("a",)})])
    tr, r = solve(p, b)
    assert not r
    assert tr.stats["num_primary"] == 0


def test_some_forces_a_tuple():
    p, b = single(A.Mult("some", A.RelRef("r")), [("r", 1, set(), {("a",), ("b",)})])
    tr, r = solve(p, b)
    assert r and len(interpret(tr, r.assignment)["r"]) >= 1


def test_acyclic_with_self_loop_in_lower_bound():
    x = A.Var("x")
    f = A.forall([("x", A.Univ())], A.Not(A.subset(x, A.join(x, A.UnaryExpr("^", A.RelRef("r"))))))
    p, b = single(f, [("r", 2, {("a", "a")}, {("a", "a"), ("a", "b")})])
    assert not solve(p, b)[1]


def test_unbounded_relation():
    p, b = single(A.Mult("some", A.RelRef("r")), [])
    p.relations.append(Relation("r", 1))
    with pytest.raises(UnboundedRelation):
        translate(p, b)


def test_interpret_extremes():
    p, b = single(A.Mult("some", A.Univ()), [("r", 2, {("a", "b")}, {("a", "b"), ("b", "c"), ("c", "c")})])
    tr = translate(p, b)
    r = Relation("r", 2)
    lo = interpret(tr, {v: False for v in range(1, tr.num_vars + 1)})
    hi = interpret(tr, {v: True for v in range(1, tr.num_vars + 1)})
    assert lo[r] == b.lower(r) and hi[r] == b.upper(r)


def test_closure_bits_match_floyd_warshall():
    # ^r = c pins an auxiliary relation to the encoded closure
    for seed in range(30):
        p, b = random_problem(seed, max_atoms=5, max_relations=1)
        r = next((rel for rel in p.relations if rel.arity == 2), None)
        if r is None:
            continue
        c = Relation("c", 2)
        u = b.universe
        every = mk_tupleset(u, 2, {(x, y) for x in u.atoms for y in u.atoms})
        b2 = set_bounds(b, c, mk_tupleset(u, 2, set()), every)
        prob = RelationalProblem([r, c], [Constraint("cl", A.Compare("=", A.RelRef("c"), A.UnaryExpr("^", A.RelRef(r.name))))])
        tr = translate(prob, b2)
        s = tr.new_solver()
        for _ in range(10):
            res = s.solve(tr.selectors)
            if not res:
                break
            inst = interpret(tr, res.assignment)
            assert inst[c].tuples == closure(inst[r].tuples)
            s.add_clause([-v if res.assignment[v] else v for v in tr.primary_vars])


@pytest.mark.parametrize("with_ints", [False, True])
def test_random_problems_equisatisfiable(with_ints):
    n = 200 if not with_ints else 60
    for seed in range(n):
        p, b = random_problem(1000 * with_ints + seed, max_atoms=6, max_relations=3, depth=4, with_ints=with_ints)
        tr = translate(p, b)
        res = tr.new_solver().solve(tr.selectors)
        expected = exists_model([c.formula for c in p.constraints], b, p.bitwidth)
        assert bool(res) == expected, f"seed {seed}"
        if res:
            inst = interpret(tr, res.assignment)
            ev = Evaluator(inst)
            assert all(ev.formula(c.formula, {}) for c in p.constraints)


OPS = {
    "+": ints.add,
    "-": ints.sub,
    "*": ints.mul,
    "/": ints.sdiv,
}
CMPS = {"<": lambda c, a, b: ints.slt(c, a, b), ">": lambda c, a, b: ints.slt(c, b, a), "=": ints.equal}


def test_integer_circuits_exhaustive_bitwidth_4():
    bw = 4
    c = Circuit()
    a = [c.fresh() for _ in range(bw)]
    b = [c.fresh() for _ in range(bw)]
    outs = {op: fn(c, a, b) for op, fn in OPS.items()}
    cmps = {op: fn(c, a, b) for op, fn in CMPS.items()}
    s = Solver(c.num_vars)
    for cl in c.clauses:
        s.add_clause(cl)
    for x, y in itertools.product(int_range(bw), repeat=2):
        assume = [v if (x >> i) & 1 else -v for i, v in enumerate(a)]
        assume += [v if (y >> i) & 1 else -v for i, v in enumerate(b)]
        res = s.solve(assume)
        assert res
        for op, bits in outs.items():
            if op == "/" and y == 0:
                continue
            assert ints.value_of(bits, res.assignment) == arith(op, x, y, bw), (x, op, y)
        assert evaluate_value(cmps["<"], res.assignment) == (x < y)
        assert evaluate_value(cmps[">"], res.assignment) == (x > y)
        assert evaluate_value(cmps["="], res.assignment) == (x == y)


def test_hash_consing_shares_gates():
    c = Circuit()
    x, y = c.fresh(), c.fresh()
    g1 = c.and_(x, y)
    n = len(c.clauses)
    assert c.and_(y, x) == g1 and len(c.clauses) == n

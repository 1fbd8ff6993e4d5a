import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metareason.kernel import (
    ArityMismatch,
    BoundViolation,
    Bounds,
    ConcreteInstance,
    DivisionByZero,
    DuplicateAtom,
    EmptyUniverse,
    IntOutOfRange,
    Relation,
    TupleSet,
    UnboundVariable,
    UnknownAtom,
    evaluate,
    mk_tupleset,
    mk_universe,
    set_bounds,
    show,
)
from metareason.kernel import ast as A
from metareason.kernel.evaluate import closure, wrap


def instance(atoms, rels, ints=(), bitwidth=4):
    u = mk_universe(atoms, ints)
    val = {}
    for name, (arity, tuples) in rels.items():
        val[Relation(name, arity)] = mk_tupleset(u, arity, tuples)
    return ConcreteInstance(u, val, bitwidth)


def test_universe_basics():
    u = mk_universe(["a"])
    assert len(u) == 1 and u.ordinal("a") == 0
    with pytest.raises(DuplicateAtom, match="a"):
        mk_universe(["a", "b", "a"])
    with pytest.raises(EmptyUniverse):
        mk_universe([])
    with pytest.raises(AttributeError):
        u.foo = 1


def test_tupleset_construction():
    u = mk_universe(["a", "b"])
    assert mk_tupleset(u, 2, {("a", "b")}).tuples == {(0, 1)}
    assert len(mk_tupleset(mk_universe(["a"]), 1, set())) == 0
    with pytest.raises(UnknownAtom, match="c"):
        mk_tupleset(mk_universe(["a"]), 2, {("a", "c")})
    with pytest.raises(ArityMismatch):
        mk_tupleset(u, 2, {("a",)})


def test_set_bounds():
    u = mk_universe(["a", "b", "c"])
    r = Relation("r", 2)
    lo = mk_tupleset(u, 2, {("a", "b")})
    b = set_bounds(Bounds(u), r, lo, mk_tupleset(u, 2, {("a", "b"), ("b", "c")}))
    assert b.lower(r) == lo
    with pytest.raises(BoundViolation) as exc:
        set_bounds(Bounds(u), r, lo, mk_tupleset(u, 2, {("b", "c")}))
    assert ("a", "b") in exc.value.tuples
    with pytest.raises(ArityMismatch):
        set_bounds(Bounds(u), Relation("s", 1), lo, lo)


def test_closure_example():
    inst = instance(["0", "1", "2"], {"r": (2, {("0", "1"), ("1", "2")})})
    got = evaluate(inst, A.UnaryExpr("^", A.RelRef("r")))
    assert set(got.names()) == {("0", "1"), ("1", "2"), ("0", "2")}


def test_acyclic_fails_on_self_loop():
    inst = instance(["TruckList$0"], {"List": (1, {("TruckList$0",)}), "cdr": (2, {("TruckList$0", "TruckList$0")})})
    x = A.Var("x")
    f = A.forall([("x", A.RelRef("List"))], A.Not(A.subset(x, A.join(x, A.UnaryExpr("^", A.RelRef("cdr"))))))
    assert evaluate(inst, f) is False


def test_univ_and_int_examples():
    inst = instance(["a", "b"], {"s": (1, {("a",), ("b",)})}, ints=range(-8, 8))
    assert len(evaluate(inst, A.Univ())) == len(inst.universe)
    assert evaluate(inst, A.Card(A.RelRef("s"))) == 2
    assert evaluate(inst, A.Arith("+", A.IntLit(2), A.IntLit(2))) == 4
    assert evaluate(inst, A.Arith("+", A.IntLit(7), A.IntLit(1))) == -8


def test_evaluator_errors():
    inst = instance(["a"], {}, ints=range(-8, 8))
    with pytest.raises(UnboundVariable):
        evaluate(inst, A.Var("x"))
    with pytest.raises(DivisionByZero):
        evaluate(inst, A.Arith("/", A.IntLit(1), A.IntLit(0)))
    plain = instance(["a"], {})
    with pytest.raises(IntOutOfRange):
        evaluate(plain, A.IntToExpr(A.IntLit(3)))


@given(st.integers(-1000, 1000), st.integers(2, 10))
def test_wrap_matches_bigint_model(v, bw):
    w = wrap(v, bw)
    assert -(1 << (bw - 1)) <= w < (1 << (bw - 1))
    assert (w - v) % (1 << bw) == 0


def floyd_warshall(n, pairs):
    reach = [[(i, j) in pairs for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return {(i, j) for i in range(n) for j in range(n) if reach[i][j]}


@settings(max_examples=200)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_closure_equals_floyd_warshall(data):
    n, pairs = data
    assert closure(frozenset(pairs)) == floyd_warshall(n, pairs)


# ---------------------------------------------------------------- algebra


@st.composite
def small_instances(draw):
    n = draw(st.integers(1, 4))
    atoms = [f"a{i}" for i in range(n)]
    unary = draw(st.sets(st.sampled_from(atoms)))
    pairs = draw(st.sets(st.tuples(st.sampled_from(atoms), st.sampled_from(atoms))))
    other = draw(st.sets(st.tuples(st.sampled_from(atoms), st.sampled_from(atoms))))
    return instance(atoms, {"s": (1, {(a,) for a in unary}), "r": (2, pairs), "q": (2, other)})


R, Q, S = A.RelRef("r"), A.RelRef("q"), A.RelRef("s")


@settings(max_examples=150)
@given(small_instances())
def test_evaluator_algebra(inst):
    ev = lambda e: evaluate(inst, e).tuples
    assert ev(A.BinExpr("+", R, R)) == ev(R)
    assert ev(A.UnaryExpr("~", A.UnaryExpr("~", R))) == ev(R)
    cl = A.UnaryExpr("^", R)
    assert ev(cl) == ev(A.BinExpr("+", A.BinExpr(".", cl, R), R))
    assert ev(A.BinExpr("-", R, R)) == frozenset()
    assert ev(A.BinExpr(".", A.BinExpr(".", S, R), Q)) == ev(A.BinExpr(".", S, A.BinExpr(".", R, Q)))
    f, g = A.Mult("some", A.BinExpr(".", S, R)), A.Compare("in", R, Q)
    assert evaluate(inst, A.Not(A.BinFormula("&&", f, g))) == evaluate(inst, A.BinFormula("||", A.Not(f), A.Not(g)))
    body = A.Mult("some", A.BinExpr(".", A.Var("v"), R))
    assert evaluate(inst, A.forall([("v", S)], body)) == evaluate(inst, A.Not(A.exists([("v", S)], A.Not(body))))


def test_printer_surface_syntax():
    x = A.Var("x")
    f = A.forall([("x", A.RelRef("List"))], A.Not(A.subset(x, A.join(x, A.UnaryExpr("^", A.RelRef("cdr"))))))
    assert show(f) == "all x : List | !(x in x.^cdr)"
    assert show(f, unicode=True) == "∀ x : List | ¬(x ⊆ x.^cdr)"


def test_projection_and_comprehension():
    inst = instance(["a", "b"], {"r": (2, {("a", "b")})})
    p = evaluate(inst, A.Projection(A.RelRef("r"), (A.IntLit(1), A.IntLit(0))))
    assert set(p.names()) == {("b", "a")}
    c = A.Comprehension((A.Decl("x", A.Univ()),), A.Mult("some", A.join(A.Var("x"), A.RelRef("r"))))
    assert set(evaluate(inst, c).names()) == {("a",)}

"""Abstract syntax of relational formulas, expressions and integer expressions.

Nodes are frozen dataclasses. Structural equality ignores source spans, so a
reparsed tree compares equal to the original.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .errors import ArityMismatch


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1
    offset: int = -1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


def _span():
    return field(default=None, compare=False, repr=False)


class Node:
    span: Optional[SourceSpan]


# ---------------------------------------------------------------- expressions


class Expr(Node):
    pass


@dataclass(frozen=True)
class Var(Expr):
    """A quantified or comprehension variable."""

    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class RelRef(Expr):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Univ(Expr):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class UnaryExpr(Expr):
    op: str  # "~" transpose, "^" closure
    expr: Expr
    span: Optional[SourceSpan] = _span()


EXPR_BINOPS = ("+", "&", "-", ".", "->")


@dataclass(frozen=True)
class BinExpr(Expr):
    op: str  # one of EXPR_BINOPS
    left: Expr
    right: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class IfExpr(Expr):
    cond: "Formula"
    then: Expr
    other: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Decl:
    name: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Comprehension(Expr):
    decls: tuple[Decl, ...]
    body: "Formula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Projection(Expr):
    expr: Expr
    columns: tuple["IntExpr", ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class IntToExpr(Expr):
    value: "IntExpr"
    span: Optional[SourceSpan] = _span()


# ------------------------------------------------------- integer expressions


class IntExpr(Node):
    pass


@dataclass(frozen=True)
class IntLit(IntExpr):
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Card(IntExpr):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Sum(IntExpr):
    expr: Expr
    span: Optional[SourceSpan] = _span()


INT_BINOPS = ("+", "-", "*", "/")


@dataclass(frozen=True)
class Arith(IntExpr):
    op: str
    left: IntExpr
    right: IntExpr
    span: Optional[SourceSpan] = _span()


# ------------------------------------------------------------------ formulas


class Formula(Node):
    pass


@dataclass(frozen=True)
class Compare(Formula):
    op: str  # "in" or "="
    left: Expr
    right: Expr
    span: Optional[SourceSpan] = _span()


MULTIPLICITIES = ("some", "one", "lone", "no")


@dataclass(frozen=True)
class Mult(Formula):
    mult: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Not(Formula):
    formula: Formula
    span: Optional[SourceSpan] = _span()


FORMULA_BINOPS = ("&&", "||", "=>")


@dataclass(frozen=True)
class BinFormula(Formula):
    op: str
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Quant(Formula):
    quant: str  # "all" or "exists"
    decls: tuple[Decl, ...]
    body: Formula
    span: Optional[SourceSpan] = _span()


INT_CMPOPS = ("=", "<", ">")


@dataclass(frozen=True)
class IntCompare(Formula):
    op: str
    left: IntExpr
    right: IntExpr
    span: Optional[SourceSpan] = _span()


AnyNode = Union[Formula, Expr, IntExpr]


# ------------------------------------------------------------------- helpers


def conj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f is not None]
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = BinFormula("&&", out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = BinFormula("||", out, f)
    return out


def union(*es: Expr) -> Expr:
    out = es[0]
    for e in es[1:]:
        out = BinExpr("+", out, e)
    return out


def join(a: Expr, b: Expr) -> Expr:
    return BinExpr(".", a, b)


def product(a: Expr, b: Expr) -> Expr:
    return BinExpr("->", a, b)


def subset(a: Expr, b: Expr) -> Formula:
    return Compare("in", a, b)


def forall(decls, body: Formula) -> Formula:
    return Quant("all", tuple(Decl(n, e) for n, e in decls), body)


def exists(decls, body: Formula) -> Formula:
    return Quant("exists", tuple(Decl(n, e) for n, e in decls), body)


def with_span(node, span):
    """Copy of ``node`` carrying ``span``."""
    from dataclasses import replace

    return replace(node, span=span)


def relations_of(node) -> set[str]:
    """Names of all relations referenced by ``node``."""
    out: set[str] = set()

    def walk(n):
        if isinstance(n, RelRef):
            out.add(n.name)
            return
        if isinstance(n, Decl):
            walk(n.expr)
            return
        for v in _children(n):
            walk(v)

    walk(node)
    return out


def _children(n):
    if isinstance(n, (Var, RelRef, Univ, IntLit)):
        return ()
    if isinstance(n, UnaryExpr):
        return (n.expr,)
    if isinstance(n, BinExpr):
        return (n.left, n.right)
    if isinstance(n, IfExpr):
        return (n.cond, n.then, n.other)
    if isinstance(n, Comprehension):
        return n.decls + (n.body,)
    if isinstance(n, Projection):
        return (n.expr,) + n.columns
    if isinstance(n, (IntToExpr,)):
        return (n.value,)
    if isinstance(n, (Card, Sum)):
        return (n.expr,)
    if isinstance(n, Arith):
        return (n.left, n.right)
    if isinstance(n, Compare):
        return (n.left, n.right)
    if isinstance(n, Mult):
        return (n.expr,)
    if isinstance(n, Not):
        return (n.formula,)
    if isinstance(n, BinFormula):
        return (n.left, n.right)
    if isinstance(n, Quant):
        return n.decls + (n.body,)
    if isinstance(n, IntCompare):
        return (n.left, n.right)
    if isinstance(n, Decl):
        return (n.expr,)
    raise TypeError(f"not an AST node: {n!r}")


def children(n):
    return _children(n)


def uses_ints(node) -> bool:
    """True when ``node`` needs integer atoms (int casts or sums)."""
    if isinstance(node, (IntToExpr, Sum)):
        return True
    return any(uses_ints(c) for c in _children(node))


def constant_int(node: IntExpr) -> int | None:
    """Value of a closed arithmetic expression over literals, else None."""
    if isinstance(node, IntLit):
        return node.value
    if isinstance(node, Arith):
        a, b = constant_int(node.left), constant_int(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            return None
        q = abs(a) // abs(b)
        return q if (a < 0) == (b < 0) else -q
    return None


# ------------------------------------------------------------------- arities


def arity_of(node: Expr, rel_arity: Mapping[str, int], env: Mapping[str, int] | None = None) -> int:
    """Arity of a relational expression, raising ArityMismatch on ill-formed trees."""
    env = env or {}
    if isinstance(node, Var):
        if node.name not in env:
            from .errors import UnboundVariable

            raise UnboundVariable(node.name)
        return env[node.name]
    if isinstance(node, RelRef):
        if node.name not in rel_arity:
            raise ArityMismatch(f"unknown relation {node.name}")
        return rel_arity[node.name]
    if isinstance(node, Univ):
        return 1
    if isinstance(node, UnaryExpr):
        a = arity_of(node.expr, rel_arity, env)
        if a != 2:
            raise ArityMismatch(f"{node.op} needs a binary operand, got arity {a}")
        return 2
    if isinstance(node, BinExpr):
        a = arity_of(node.left, rel_arity, env)
        b = arity_of(node.right, rel_arity, env)
        if node.op in ("+", "&", "-"):
            if a != b:
                raise ArityMismatch(f"operands of {node.op} have arities {a} and {b}")
            return a
        if node.op == ".":
            if a + b - 2 < 1:
                raise ArityMismatch(f"join of arities {a} and {b} is empty")
            return a + b - 2
        if node.op == "->":
            return a + b
        raise ValueError(node.op)
    if isinstance(node, IfExpr):
        check_formula(node.cond, rel_arity, env)
        a = arity_of(node.then, rel_arity, env)
        b = arity_of(node.other, rel_arity, env)
        if a != b:
            raise ArityMismatch(f"branches of conditional have arities {a} and {b}")
        return a
    if isinstance(node, Comprehension):
        inner = _check_decls(node.decls, rel_arity, env)
        check_formula(node.body, rel_arity, inner)
        return len(node.decls)
    if isinstance(node, Projection):
        a = arity_of(node.expr, rel_arity, env)
        if not node.columns:
            raise ArityMismatch("projection needs at least one column")
        for c in node.columns:
            check_int(c, rel_arity, env)
            k = constant_int(c)
            if k is None:
                raise ArityMismatch("projection columns must be integer constants")
            if not 0 <= k < a:
                raise ArityMismatch(f"projection column {k} out of range for arity {a}")
        return len(node.columns)
    if isinstance(node, IntToExpr):
        check_int(node.value, rel_arity, env)
        return 1
    raise TypeError(f"not an expression: {node!r}")


def _check_decls(decls, rel_arity, env):
    inner = dict(env)
    for d in decls:
        if arity_of(d.expr, rel_arity, inner) != 1:
            raise ArityMismatch(f"variable {d.name} must be declared over a unary expression")
        inner[d.name] = 1
    return inner


def check_int(node: IntExpr, rel_arity, env=None) -> None:
    env = env or {}
    if isinstance(node, IntLit):
        return
    if isinstance(node, Card):
        arity_of(node.expr, rel_arity, env)
        return
    if isinstance(node, Sum):
        if arity_of(node.expr, rel_arity, env) != 1:
            raise ArityMismatch("sum needs a unary operand")
        return
    if isinstance(node, Arith):
        check_int(node.left, rel_arity, env)
        check_int(node.right, rel_arity, env)
        return
    raise TypeError(f"not an integer expression: {node!r}")


def check_formula(node: Formula, rel_arity, env=None) -> None:
    env = env or {}
    if isinstance(node, Compare):
        a = arity_of(node.left, rel_arity, env)
        b = arity_of(node.right, rel_arity, env)
        if a != b:
            raise ArityMismatch(f"operands of {node.op} have arities {a} and {b}")
    elif isinstance(node, Mult):
        arity_of(node.expr, rel_arity, env)
    elif isinstance(node, Not):
        check_formula(node.formula, rel_arity, env)
    elif isinstance(node, BinFormula):
        check_formula(node.left, rel_arity, env)
        check_formula(node.right, rel_arity, env)
    elif isinstance(node, Quant):
        inner = _check_decls(node.decls, rel_arity, env)
        check_formula(node.body, rel_arity, inner)
    elif isinstance(node, IntCompare):
        check_int(node.left, rel_arity, env)
        check_int(node.right, rel_arity, env)
    else:
        raise TypeError(f"not a formula: {node!r}")


def check(node: AnyNode, rel_arity, env=None) -> None:
    """Arity-check any node."""
    if isinstance(node, Formula):
        check_formula(node, rel_arity, env)
    elif isinstance(node, IntExpr):
        check_int(node, rel_arity, env)
    else:
        arity_of(node, rel_arity, env)

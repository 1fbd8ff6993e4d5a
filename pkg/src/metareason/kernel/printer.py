"""Render ASTs in the surface syntax (ASCII by default, typeset operators on request)."""
from __future__ import annotations

from .ast import (
    Arith,
    BinExpr,
    BinFormula,
    Card,
    Compare,
    Comprehension,
    Decl,
    IfExpr,
    IntCompare,
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

_UNICODE = {
    "&&": "∧",
    "||": "∨",
    "=>": "⇒",
    "!": "¬",
    "in": "⊆",
    "+": "∪",
    "&": "∩",
    "-": "∖",
    "->": "→",
    "all": "∀",
    "exists": "∃",
    "*": "×",
    "/": "÷",
}

# precedence, loosest first
P_QUANT, P_IMPLIES, P_OR, P_AND, P_NOT, P_ATOM = range(6)
P_UNION, P_INTER, P_PRODUCT, P_JOIN, P_UNARY, P_PRIMARY = range(10, 16)
P_ADD, P_MUL, P_IPRIMARY = 20, 21, 22

_EXPR_PREC = {"+": P_UNION, "-": P_UNION, "&": P_INTER, "->": P_PRODUCT, ".": P_JOIN}


class Printer:
    def __init__(self, unicode: bool = False):
        self.unicode = unicode

    def op(self, s: str) -> str:
        return _UNICODE.get(s, s) if self.unicode else s

    def __call__(self, node) -> str:
        return self.show(node, 0)

    def show(self, node, prec: int) -> str:
        text, p = self._render(node)
        if p < prec:
            return "(" + text + ")"
        return text

    def _decls(self, decls: tuple[Decl, ...]) -> str:
        return ", ".join(f"{d.name} : {self.show(d.expr, P_UNION)}" for d in decls)

    def _render(self, n):
        if isinstance(n, Var):
            return n.name, P_PRIMARY
        if isinstance(n, RelRef):
            return n.name, P_PRIMARY
        if isinstance(n, Univ):
            return "univ", P_PRIMARY
        if isinstance(n, UnaryExpr):
            return n.op + self.show(n.expr, P_UNARY), P_UNARY
        if isinstance(n, BinExpr):
            p = _EXPR_PREC[n.op]
            sep = "." if n.op == "." else f" {self.op(n.op)} "
            return self.show(n.left, p) + sep + self.show(n.right, p + 1), p
        if isinstance(n, IfExpr):
            text = f"{self.show(n.cond, P_QUANT)} ? {self.show(n.then, P_UNION)} : {self.show(n.other, P_UNION)}"
            return "(" + text + ")", P_PRIMARY
        if isinstance(n, Comprehension):
            return "{" + self._decls(n.decls) + " | " + self.show(n.body, P_QUANT) + "}", P_PRIMARY
        if isinstance(n, Projection):
            cols = ", ".join(self.show(c, P_ADD) for c in n.columns)
            name = "π" if self.unicode else "pi"
            return f"{name}({self.show(n.expr, P_UNION)}, {cols})", P_PRIMARY
        if isinstance(n, IntToExpr):
            return f"int2expr({self.show(n.value, P_ADD)})", P_PRIMARY
        if isinstance(n, IntLit):
            return str(n.value), P_IPRIMARY
        if isinstance(n, Card):
            return "#" + self.show(n.expr, P_INTER), P_IPRIMARY
        if isinstance(n, Sum):
            return f"sum({self.show(n.expr, P_UNION)})", P_IPRIMARY
        if isinstance(n, Arith):
            p = P_ADD if n.op in "+-" else P_MUL
            return f"{self.show(n.left, p)} {self.op(n.op)} {self.show(n.right, p + 1)}", p
        if isinstance(n, Compare):
            return f"{self.show(n.left, P_UNION)} {self.op(n.op)} {self.show(n.right, P_UNION)}", P_ATOM
        if isinstance(n, IntCompare):
            return f"{self.show(n.left, P_ADD)} {n.op} {self.show(n.right, P_ADD)}", P_ATOM
        if isinstance(n, Mult):
            return f"{n.mult} {self.show(n.expr, P_UNION)}", P_ATOM
        if isinstance(n, Not):
            if isinstance(n.formula, Not):
                return self.op("!") + self.show(n.formula, P_NOT), P_NOT
            return self.op("!") + "(" + self.show(n.formula, P_QUANT) + ")", P_NOT
        if isinstance(n, BinFormula):
            if n.op == "=>":
                return f"{self.show(n.left, P_IMPLIES + 1)} {self.op('=>')} {self.show(n.right, P_IMPLIES)}", P_IMPLIES
            p = P_AND if n.op == "&&" else P_OR
            return f"{self.show(n.left, p)} {self.op(n.op)} {self.show(n.right, p + 1)}", p
        if isinstance(n, Quant):
            return f"{self.op(n.quant)} {self._decls(n.decls)} | {self.show(n.body, P_QUANT)}", P_QUANT
        from ..frontend.syntax import Name, StringLit

        if isinstance(n, Name):
            return n.name, P_PRIMARY
        if isinstance(n, StringLit):
            return '"' + n.value.replace("\\", "\\\\").replace('"', '\\"') + '"', P_PRIMARY
        raise TypeError(f"cannot print {n!r}")


def show(node, unicode: bool = False) -> str:
    return Printer(unicode)(node)

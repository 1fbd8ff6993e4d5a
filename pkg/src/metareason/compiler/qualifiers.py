"""Formula templates for the relation property keywords."""
from __future__ import annotations

from typing import Union

from ..kernel import ast as A
from ..kernel.universe import Relation


class NonBinaryQualifier(ValueError):
    def __init__(self, keyword: str, arity: int):
        super().__init__(f"'{keyword}' needs a binary relation, got arity {arity}")
        self.keyword = keyword


def _x(name):
    return A.Var(name)


def _in(a, b):
    return A.Compare("in", a, b)


def _join(a, b):
    return A.BinExpr(".", a, b)


def _pair_domain(D, R):
    return D if D == R else A.BinExpr("+", D, R)


def _acyclic(r, D, R):
    return A.forall([("x", D)], A.Not(_in(_x("x"), _join(_x("x"), A.UnaryExpr("^", r)))))


def _transitive(r, D, R):
    return _in(_join(r, r), r)


def _reflexive(r, D, R):
    return A.forall([("x", D)], _in(_x("x"), _join(_x("x"), r)))


def _irreflexive(r, D, R):
    return A.forall([("x", D)], A.Not(_in(_x("x"), _join(_x("x"), r))))


def _symmetric(r, D, R):
    return _in(A.UnaryExpr("~", r), r)


def _asymmetric(r, D, R):
    S = _pair_domain(D, R)
    x, y = _x("x"), _x("y")
    return A.forall([("x", S), ("y", S)], A.BinFormula("=>", _in(x, _join(y, r)), A.Not(_in(y, _join(x, r)))))


def _antisymmetric(r, D, R):
    S = _pair_domain(D, R)
    x, y = _x("x"), _x("y")
    both = A.BinFormula("&&", _in(x, _join(y, r)), _in(y, _join(x, r)))
    return A.forall([("x", S), ("y", S)], A.BinFormula("=>", both, A.Compare("=", x, y)))


def _functional(r, D, R):
    return A.forall([("x", D)], A.Mult("lone", _join(_x("x"), r)))


def _total(r, D, R):
    return A.forall([("x", D)], A.Mult("some", _join(_x("x"), r)))


def _injective(r, D, R):
    return A.forall([("y", R)], A.Mult("lone", _join(r, _x("y"))))


def _surjective(r, D, R):
    return A.forall([("y", R)], A.Mult("some", _join(r, _x("y"))))


def _complete(r, D, R):
    x, y = _x("x"), _x("y")
    related = A.BinFormula("||", _in(x, _join(y, r)), _in(y, _join(x, r)))
    return A.forall([("x", D), ("y", D)], A.BinFormula("=>", A.Not(A.Compare("=", x, y)), related))


_BASIC = {
    "acyclic": _acyclic,
    "transitive": _transitive,
    "reflexive": _reflexive,
    "irreflexive": _irreflexive,
    "symmetric": _symmetric,
    "asymmetric": _asymmetric,
    "antisymmetric": _antisymmetric,
    "functional": _functional,
    "total": _total,
    "injective": _injective,
    "surjective": _surjective,
    "complete": _complete,
}

COMPOSITES = {
    "bijective": ("functional", "injective", "surjective"),
    "bijection": ("bijective", "total"),
    "preorder": ("reflexive", "transitive"),
    "equivalence": ("preorder", "symmetric"),
    "partialorder": ("preorder", "antisymmetric"),
    "totalorder": ("partialorder", "complete"),
}

KEYWORDS = tuple(sorted(set(_BASIC) | set(COMPOSITES)))


def expand_qualifier(keyword: str, r: Union[Relation, A.Expr], D: A.Expr, R: A.Expr) -> A.Formula:
    """Formula stating that ``r`` (from ``D`` to ``R``) has property ``keyword``."""
    if isinstance(r, Relation):
        if r.arity != 2:
            raise NonBinaryQualifier(keyword, r.arity)
        r = A.RelRef(r.name)
    if keyword in _BASIC:
        return _BASIC[keyword](r, D, R)
    if keyword in COMPOSITES:
        return A.conj(*(expand_qualifier(k, r, D, R) for k in COMPOSITES[keyword]))
    raise KeyError(f"unknown qualifier {keyword!r}")

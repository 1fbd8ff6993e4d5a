"""Hash-consed AND/NOT circuits emitted to CNF by the Tseitin encoding.

A circuit value is either a Python bool (a constant) or a non-zero int literal.
Negation is arithmetic negation; every gate gets its own variable the first
time a structurally new AND is requested.
"""
from __future__ import annotations

from typing import Iterable, Union

Value = Union[bool, int]


def neg(x: Value) -> Value:
    if x is True:
        return False
    if x is False:
        return True
    return -x


class Circuit:
    def __init__(self, next_var: int = 1):
        self.next_var = next_var
        self.clauses: list[tuple[int, ...]] = []
        self._gates: dict[tuple[int, ...], int] = {}

    @property
    def num_vars(self) -> int:
        return self.next_var - 1

    @property
    def num_gates(self) -> int:
        return len(self._gates)

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def and_all(self, xs: Iterable[Value]) -> Value:
        lits = set()
        for x in xs:
            if x is False:
                return False
            if x is True:
                continue
            if -x in lits:
                return False
            lits.add(x)
        if not lits:
            return True
        if len(lits) == 1:
            return next(iter(lits))
        key = tuple(sorted(lits))
        g = self._gates.get(key)
        if g is None:
            g = self.fresh()
            self._gates[key] = g
            clauses = self.clauses
            for c in key:
                clauses.append((-g, c))
            clauses.append((g,) + tuple(-c for c in key))
        return g

    def or_all(self, xs: Iterable[Value]) -> Value:
        return neg(self.and_all(neg(x) for x in xs))

    def and_(self, a: Value, b: Value) -> Value:
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        return self.and_all((a, b))

    def or_(self, a: Value, b: Value) -> Value:
        if a is True or b is True:
            return True
        if a is False:
            return b
        if b is False:
            return a
        return self.or_all((a, b))

    def implies(self, a: Value, b: Value) -> Value:
        return self.or_(neg(a), b)

    def ite(self, c: Value, a: Value, b: Value) -> Value:
        if c is True:
            return a
        if c is False:
            return b
        if a == b and type(a) is type(b):
            return a
        return self.or_(self.and_(c, a), self.and_(neg(c), b))

    def xor(self, a: Value, b: Value) -> Value:
        if isinstance(a, bool) and isinstance(b, bool):
            return a != b
        if a is False:
            return b
        if b is False:
            return a
        if a is True:
            return neg(b)
        if b is True:
            return neg(a)
        if a == b:
            return False
        if a == -b:
            return True
        return self.or_(self.and_(a, neg(b)), self.and_(neg(a), b))

    def iff(self, a: Value, b: Value) -> Value:
        return neg(self.xor(a, b))

    def at_most_one(self, xs: list[Value]) -> Value:
        xs = [x for x in xs if x is not False]
        if sum(1 for x in xs if x is True) > 1:
            return False
        if len(xs) <= 1:
            return True
        parts = []
        seen: Value = False
        for x in reversed(xs):
            parts.append(neg(self.and_(x, seen)))
            seen = self.or_(x, seen)
        return self.and_all(parts)


def evaluate_value(x: Value, assignment) -> bool:
    """Value of a circuit output under a full assignment of its variables."""
    if x is True or x is False:
        return x
    v = assignment[abs(x)]
    return v if x > 0 else not v

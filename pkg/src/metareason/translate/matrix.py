"""Sparse boolean matrices: one circuit value per tuple, absent means false."""
from __future__ import annotations

import math
from collections import defaultdict

from .circuit import Circuit, Value, neg


class BoolMatrix:
    __slots__ = ("arity", "cells")

    def __init__(self, arity: int, cells: dict | None = None):
        self.arity = arity
        self.cells: dict[tuple, Value] = {k: v for k, v in (cells or {}).items() if v is not False}

    def __repr__(self) -> str:
        return f"BoolMatrix({self.arity}, {self.cells!r})"

    def get(self, t) -> Value:
        return self.cells.get(t, False)

    def items(self):
        return sorted(self.cells.items())

    def values(self):
        return [v for _, v in self.items()]


def singleton(t: tuple) -> BoolMatrix:
    return BoolMatrix(len(t), {t: True})


def union(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    cells = dict(a.cells)
    for k, v in b.cells.items():
        cells[k] = c.or_(cells[k], v) if k in cells else v
    return BoolMatrix(a.arity, cells)


def intersection(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    return BoolMatrix(a.arity, {k: c.and_(v, b.cells[k]) for k, v in a.cells.items() if k in b.cells})


def difference(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    return BoolMatrix(a.arity, {k: c.and_(v, neg(b.get(k))) for k, v in a.cells.items()})


def join(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    by_first = defaultdict(list)
    for t, v in b.cells.items():
        by_first[t[0]].append((t[1:], v))
    acc: dict[tuple, list] = defaultdict(list)
    for s, v in a.cells.items():
        for rest, w in by_first.get(s[-1], ()):
            acc[s[:-1] + rest].append(c.and_(v, w))
    return BoolMatrix(a.arity + b.arity - 2, {k: c.or_all(vs) for k, vs in acc.items()})


def product(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    return BoolMatrix(
        a.arity + b.arity,
        {s + t: c.and_(v, w) for s, v in a.cells.items() for t, w in b.cells.items()},
    )


def transpose(a: BoolMatrix) -> BoolMatrix:
    return BoolMatrix(2, {(y, x): v for (x, y), v in a.cells.items()})


def closure(c: Circuit, a: BoolMatrix) -> BoolMatrix:
    """Transitive closure by iterative squaring.

    Paths never revisit a node, so ceil(log2 n) squarings suffice where n is
    the number of atoms that occur in the operand.
    """
    atoms = {x for t in a.cells for x in t}
    n = len(atoms)
    if n == 0:
        return BoolMatrix(2)
    steps = math.ceil(math.log2(n)) if n > 1 else 1
    cur = a
    for _ in range(steps):
        cur = union(c, cur, join(c, cur, cur))
    return cur


def ite(c: Circuit, cond: Value, a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    keys = set(a.cells) | set(b.cells)
    return BoolMatrix(a.arity, {k: c.ite(cond, a.get(k), b.get(k)) for k in keys})


def some(c: Circuit, a: BoolMatrix) -> Value:
    return c.or_all(a.cells.values())


def subset(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> Value:
    return c.and_all(c.implies(v, b.get(k)) for k, v in a.cells.items())


def equal(c: Circuit, a: BoolMatrix, b: BoolMatrix) -> Value:
    keys = set(a.cells) | set(b.cells)
    return c.and_all(c.iff(a.get(k), b.get(k)) for k in keys)

"""Brute-force model finding over bounds, independent of the SAT pipeline.

``enumerate_instances`` walks every bound-respecting instance. ``count_models``
does the same walk but cuts a branch as soon as a three-valued evaluation of a
constraint over the partial instance is definitely false; surviving leaves are
confirmed with the reference evaluator.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from . import ast as A
from .evaluate import Evaluator, closure, wrap
from .universe import Bounds, ConcreteInstance, Relation, TupleSet


def optional_tuples(bounds: Bounds, relations: Iterable[Relation] | None = None) -> list[tuple[Relation, tuple]]:
    out = []
    for r in relations if relations is not None else bounds.relations:
        lower, upper = bounds.entries[r]
        out.extend((r, t) for t in sorted(upper.tuples - lower.tuples))
    return out


def enumerate_instances(bounds: Bounds, bitwidth: int = 8) -> Iterator[ConcreteInstance]:
    free = optional_tuples(bounds)
    u = bounds.universe
    for bits in itertools.product((False, True), repeat=len(free)):
        val = {r: set(bounds.lower(r).tuples) for r in bounds.relations}
        for (r, t), b in zip(free, bits):
            if b:
                val[r].add(t)
        yield ConcreteInstance(u, {r: TupleSet(u, r.arity, frozenset(ts)) for r, ts in val.items()}, bitwidth)


def exists_model(formulas: list[A.Formula], bounds: Bounds, bitwidth: int = 8) -> bool:
    for inst in enumerate_instances(bounds, bitwidth):
        ev = Evaluator(inst)
        if all(ev.formula(f, {}) for f in formulas):
            return True
    return False


# ----------------------------------------------------- three-valued evaluation


def _join(a, b):
    index: dict = {}
    for t in b:
        index.setdefault(t[0], []).append(t[1:])
    return frozenset(s[:-1] + rest for s in a for rest in index.get(s[-1], ()))


class PartialEvaluator:
    """Kleene evaluation over intervals [lower, upper] of relation values."""

    def __init__(self, universe, bitwidth: int, lower: dict, upper: dict):
        self.universe = universe
        self.bitwidth = bitwidth
        self.lower = lower
        self.upper = upper
        self._univ = frozenset((i,) for i in range(len(universe)))
        self._maxcard = 1 << (bitwidth - 1)

    def expr(self, n, env):
        if isinstance(n, A.Var):
            s = env[n.name]
            return s, s
        if isinstance(n, A.RelRef):
            return self.lower[n.name], self.upper[n.name]
        if isinstance(n, A.Univ):
            return self._univ, self._univ
        if isinstance(n, A.UnaryExpr):
            lo, hi = self.expr(n.expr, env)
            if n.op == "~":
                return frozenset((b, a) for a, b in lo), frozenset((b, a) for a, b in hi)
            return closure(frozenset(lo)), closure(frozenset(hi))
        if isinstance(n, A.BinExpr):
            l1, u1 = self.expr(n.left, env)
            l2, u2 = self.expr(n.right, env)
            op = n.op
            if op == "+":
                return l1 | l2, u1 | u2
            if op == "&":
                return l1 & l2, u1 & u2
            if op == "-":
                return l1 - u2, u1 - l2
            if op == ".":
                return _join(l1, l2), _join(u1, u2)
            return frozenset(s + t for s in l1 for t in l2), frozenset(s + t for s in u1 for t in u2)
        if isinstance(n, A.IfExpr):
            c = self.formula(n.cond, env)
            if c is True:
                return self.expr(n.then, env)
            if c is False:
                return self.expr(n.other, env)
            l1, u1 = self.expr(n.then, env)
            l2, u2 = self.expr(n.other, env)
            return l1 & l2, u1 | u2
        if isinstance(n, A.Comprehension):
            lo, hi = set(), set()
            for binding, definite, atoms in self._bindings(n.decls, env):
                b = self.formula(n.body, binding)
                if b is False:
                    continue
                hi.add(atoms)
                if b is True and definite:
                    lo.add(atoms)
            return frozenset(lo), frozenset(hi)
        if isinstance(n, A.Projection):
            lo, hi = self.expr(n.expr, env)
            cols = [A.constant_int(c) for c in n.columns]
            return frozenset(tuple(t[c] for c in cols) for t in lo), frozenset(tuple(t[c] for c in cols) for t in hi)
        if isinstance(n, A.IntToExpr):
            iv = self.int(n.value, env)
            ints = self.universe.int_ordinals
            if iv is not None and iv[0] == iv[1]:
                o = self.universe.int_atom(iv[0])
                s = frozenset({(o,)}) if o is not None else frozenset()
                return s, s
            return frozenset(), frozenset((o,) for o in ints)
        raise TypeError(n)

    def _bindings(self, decls, env):
        def go(i, cur, definite, atoms):
            if i == len(decls):
                yield cur, definite, atoms
                return
            d = decls[i]
            lo, hi = self.expr(d.expr, cur)
            for t in sorted(hi):
                inner = dict(cur)
                inner[d.name] = frozenset({t})
                yield from go(i + 1, inner, definite and t in lo, atoms + t)

        yield from go(0, dict(env), True, ())

    def int(self, n, env):
        """Closed interval (lo, hi) of possible values, or None when unknown."""
        bw = self.bitwidth
        if isinstance(n, A.IntLit):
            v = wrap(n.value, bw)
            return v, v
        if isinstance(n, A.Card):
            lo, hi = self.expr(n.expr, env)
            if len(lo) == len(hi):
                v = wrap(len(lo), bw)
                return v, v
            if len(hi) < self._maxcard:
                return len(lo), len(hi)
            return None
        if isinstance(n, A.Sum):
            lo, hi = self.expr(n.expr, env)
            ints = self.universe.int_ordinals
            if {t for t in lo if t[0] in ints} != {t for t in hi if t[0] in ints}:
                return None
            v = wrap(sum(ints[t[0]] for t in lo if t[0] in ints), bw)
            return v, v
        if isinstance(n, A.Arith):
            a = self.int(n.left, env)
            b = self.int(n.right, env)
            if a is None or b is None or a[0] != a[1] or b[0] != b[1]:
                return None
            from .evaluate import arith

            if n.op == "/" and b[0] == 0:
                return None
            v = arith(n.op, a[0], b[0], bw)
            return v, v
        raise TypeError(n)

    def formula(self, n, env):
        if isinstance(n, A.Compare):
            l1, u1 = self.expr(n.left, env)
            l2, u2 = self.expr(n.right, env)
            if n.op == "in":
                if u1 <= l2:
                    return True
                if not l1 <= u2:
                    return False
                return None
            if l1 == u1 == l2 == u2:
                return True
            if not l1 <= u2 or not l2 <= u1:
                return False
            return None
        if isinstance(n, A.Mult):
            lo, hi = self.expr(n.expr, env)
            m = n.mult
            if m == "some":
                return True if lo else (False if not hi else None)
            if m == "no":
                return True if not hi else (False if lo else None)
            if m == "lone":
                return True if len(hi) <= 1 else (False if len(lo) >= 2 else None)
            if len(lo) >= 2 or not hi:
                return False
            if len(lo) == 1 and len(hi) == 1:
                return True
            return None
        if isinstance(n, A.Not):
            v = self.formula(n.formula, env)
            return None if v is None else not v
        if isinstance(n, A.BinFormula):
            a = self.formula(n.left, env)
            if n.op == "&&":
                if a is False:
                    return False
                b = self.formula(n.right, env)
                if b is False:
                    return False
                return True if a is True and b is True else None
            if n.op == "||":
                if a is True:
                    return True
                b = self.formula(n.right, env)
                if b is True:
                    return True
                return False if a is False and b is False else None
            if a is False:
                return True
            b = self.formula(n.right, env)
            if b is True:
                return True
            return False if a is True and b is False else None
        if isinstance(n, A.Quant):
            unknown = False
            if n.quant == "all":
                for binding, definite, _ in self._bindings(n.decls, env):
                    b = self.formula(n.body, binding)
                    if b is True:
                        continue
                    if b is False and definite:
                        return False
                    unknown = True
                return None if unknown else True
            for binding, definite, _ in self._bindings(n.decls, env):
                b = self.formula(n.body, binding)
                if b is False:
                    continue
                if b is True and definite:
                    return True
                unknown = True
            return None if unknown else False
        if isinstance(n, A.IntCompare):
            a = self.int(n.left, env)
            b = self.int(n.right, env)
            if a is None or b is None:
                return None
            if n.op == "=":
                if a[0] == a[1] == b[0] == b[1]:
                    return True
                if a[1] < b[0] or b[1] < a[0]:
                    return False
                return None
            if n.op == ">":
                a, b = b, a
            if a[1] < b[0]:
                return True
            if a[0] >= b[1]:
                return False
            return None
        raise TypeError(n)


def count_models(
    formulas: list[A.Formula],
    bounds: Bounds,
    bitwidth: int = 8,
    projection: Iterable[Relation] | None = None,
    limit: int | None = None,
) -> int:
    """Number of bound-respecting instances satisfying every formula.

    Instances are counted as distinct valuations of ``projection`` (default:
    all relations). Relations outside the projection must be functionally
    determined by the formulas for the count to equal the projected count; the
    search still explores them and deduplicates projected valuations.
    """
    u = bounds.universe
    rels = bounds.relations
    free = optional_tuples(bounds)
    lower = {r.name: set(bounds.lower(r).tuples) for r in rels}
    upper = {r.name: set(bounds.upper(r).tuples) for r in rels}
    mentions = [A.relations_of(f) for f in formulas]
    by_rel: dict[str, list[int]] = {}
    for i, names in enumerate(mentions):
        for name in names:
            by_rel.setdefault(name, []).append(i)
    proj = [r.name for r in (projection if projection is not None else rels)]
    seen: set = set()
    count = 0

    def snapshot():
        return (
            {k: frozenset(v) for k, v in lower.items()},
            {k: frozenset(v) for k, v in upper.items()},
        )

    def check(idx: Iterable[int]) -> bool:
        lo, hi = snapshot()
        pe = PartialEvaluator(u, bitwidth, lo, hi)
        return all(pe.formula(formulas[i], {}) is not False for i in idx)

    def leaf():
        nonlocal count
        val = {r: TupleSet(u, r.arity, frozenset(lower[r.name])) for r in rels}
        inst = ConcreteInstance(u, val, bitwidth)
        ev = Evaluator(inst)
        if all(ev.formula(f, {}) for f in formulas):
            key = tuple(frozenset(lower[name]) for name in proj)
            if key not in seen:
                seen.add(key)
                count += 1

    def go(i: int):
        if limit is not None and count >= limit:
            return
        if i == len(free):
            leaf()
            return
        r, t = free[i]
        affected = by_rel.get(r.name, ())
        # tuple absent
        upper[r.name].discard(t)
        if check(affected):
            go(i + 1)
        upper[r.name].add(t)
        # tuple present
        lower[r.name].add(t)
        if check(affected):
            go(i + 1)
        lower[r.name].discard(t)

    if check(range(len(formulas))):
        go(0)
    return count

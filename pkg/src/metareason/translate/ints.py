"""Two's-complement bit-vector circuits (LSB first, fixed width)."""
from __future__ import annotations

from .circuit import Circuit, Value, neg

BitVec = list  # list[Value], least significant bit first


def const(value: int, width: int) -> BitVec:
    value &= (1 << width) - 1
    return [bool((value >> i) & 1) for i in range(width)]


def _full_add(c: Circuit, a: Value, b: Value, cin: Value) -> tuple[Value, Value]:
    s = c.xor(c.xor(a, b), cin)
    carry = c.or_(c.and_(a, b), c.and_(cin, c.or_(a, b)))
    return s, carry


def add(c: Circuit, a: BitVec, b: BitVec, cin: Value = False) -> BitVec:
    out = []
    carry = cin
    for x, y in zip(a, b):
        s, carry = _full_add(c, x, y, carry)
        out.append(s)
    return out


def negate(c: Circuit, a: BitVec) -> BitVec:
    return add(c, [neg(x) for x in a], const(0, len(a)), True)


def sub(c: Circuit, a: BitVec, b: BitVec) -> BitVec:
    return add(c, a, [neg(x) for x in b], True)


def mul(c: Circuit, a: BitVec, b: BitVec) -> BitVec:
    width = len(a)
    acc = const(0, width)
    for i, bi in enumerate(b):
        partial = [False] * i + [c.and_(x, bi) for x in a[: width - i]]
        acc = add(c, acc, partial)
    return acc


def ite(c: Circuit, cond: Value, a: BitVec, b: BitVec) -> BitVec:
    return [c.ite(cond, x, y) for x, y in zip(a, b)]


def is_zero(c: Circuit, a: BitVec) -> Value:
    return c.and_all(neg(x) for x in a)


def ult(c: Circuit, a: BitVec, b: BitVec) -> Value:
    lt: Value = False
    for x, y in zip(a, b):
        lt = c.or_(c.and_(neg(x), y), c.and_(c.iff(x, y), lt))
    return lt


def slt(c: Circuit, a: BitVec, b: BitVec) -> Value:
    a = a[:-1] + [neg(a[-1])]
    b = b[:-1] + [neg(b[-1])]
    return ult(c, a, b)


def equal(c: Circuit, a: BitVec, b: BitVec) -> Value:
    return c.and_all(c.iff(x, y) for x, y in zip(a, b))


def _udiv(c: Circuit, a: BitVec, b: BitVec) -> BitVec:
    """Unsigned restoring division, quotient only."""
    width = len(a)
    rem = const(0, width + 1)
    d = b + [False]
    q: list[Value] = [False] * width
    for i in reversed(range(width)):
        rem = [a[i]] + rem[:-1]
        ge = neg(ult(c, rem, d))
        diff = sub(c, rem, d)
        rem = ite(c, ge, diff, rem)
        q[i] = ge
    return q


def sdiv(c: Circuit, a: BitVec, b: BitVec) -> BitVec:
    """Signed division truncating toward zero; division by zero yields 0."""
    sa, sb = a[-1], b[-1]
    ua = ite(c, sa, negate(c, a), a)
    ub = ite(c, sb, negate(c, b), b)
    q = _udiv(c, ua, ub)
    q = ite(c, c.xor(sa, sb), negate(c, q), q)
    return ite(c, is_zero(c, b), const(0, len(a)), q)


def popcount(c: Circuit, bits: list[Value], width: int) -> BitVec:
    """Number of true bits, wrapped to ``width``."""
    known = sum(1 for x in bits if x is True)
    vecs = [[x] + [False] * (width - 1) for x in bits if x is not True and x is not False]
    vecs.append(const(known, width))
    while len(vecs) > 1:
        nxt = []
        for i in range(0, len(vecs) - 1, 2):
            nxt.append(add(c, vecs[i], vecs[i + 1]))
        if len(vecs) % 2:
            nxt.append(vecs[-1])
        vecs = nxt
    return vecs[0]


def value_of(bits: BitVec, assignment) -> int:
    """Signed integer denoted by ``bits`` under ``assignment``."""
    from .circuit import evaluate_value

    width = len(bits)
    u = sum(1 << i for i, x in enumerate(bits) if evaluate_value(x, assignment))
    return u - (1 << width) if u >> (width - 1) else u

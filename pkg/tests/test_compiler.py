import itertools
from pathlib import Path

import pytest

from metareason.compiler import KEYWORDS, NonBinaryQualifier, compile, expand_qualifier
from metareason.frontend import parse, resolve_and_typecheck
from metareason.kernel import ConcreteInstance, Relation, evaluate, mk_tupleset, mk_universe, show
from metareason.kernel import ast as A
from metareason.kernel.ast import relations_of
from metareason.pipeline import Analysis
from metareason.instance import ScopeConfig

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
ATOMS = ("a", "b", "c")
PAIRS = list(itertools.product(ATOMS, ATOMS))


def _props(r):
    """Textbook definitions, written directly over a set of pairs on ATOMS."""
    dom = ATOMS
    rel = lambda x, y: (x, y) in r
    succ = lambda x: {y for y in dom if rel(x, y)}
    pred = lambda y: {x for x in dom if rel(x, y)}
    reach = set(r)
    while True:
        more = {(x, z) for (x, y) in reach for (y2, z) in reach if y == y2} - reach
        if not more:
            break
        reach |= more
    refl = all(rel(x, x) for x in dom)
    trans = all(rel(x, z) for x, y, z in itertools.product(dom, dom, dom) if rel(x, y) and rel(y, z))
    sym = all(rel(y, x) for x, y in r)
    anti = all(x == y for x, y in r if rel(y, x))
    func = all(len(succ(x)) <= 1 for x in dom)
    inj = all(len(pred(y)) <= 1 for y in dom)
    surj = all(pred(y) for y in dom)
    total = all(succ(x) for x in dom)
    comp = all(rel(x, y) or rel(y, x) for x in dom for y in dom if x != y)
    out = {
        "acyclic": all((x, x) not in reach for x in dom),
        "transitive": trans,
        "reflexive": refl,
        "irreflexive": all(not rel(x, x) for x in dom),
        "symmetric": sym,
        "asymmetric": all(not rel(y, x) for x, y in r),
        "antisymmetric": anti,
        "functional": func,
        "total": total,
        "injective": inj,
        "surjective": surj,
        "complete": comp,
        "preorder": refl and trans,
    }
    out["bijective"] = func and inj and surj
    out["bijection"] = out["bijective"] and total
    out["equivalence"] = out["preorder"] and sym
    out["partialorder"] = out["preorder"] and anti
    out["totalorder"] = out["partialorder"] and comp
    return out


def test_keyword_table_matches_oracle():
    assert set(KEYWORDS) == set(_props(frozenset()))


def test_qualifiers_exhaustively_on_three_atoms():
    u = mk_universe(ATOMS)
    D = Relation("D", 1)
    r = Relation("r", 2)
    dom = mk_tupleset(u, 1, [(a,) for a in ATOMS])
    formulas = {k: expand_qualifier(k, r, A.RelRef("D"), A.RelRef("D")) for k in KEYWORDS}
    for bits in range(1 << len(PAIRS)):
        pairs = frozenset(p for i, p in enumerate(PAIRS) if bits >> i & 1)
        inst = ConcreteInstance(u, {D: dom, r: mk_tupleset(u, 2, pairs)})
        expected = _props(pairs)
        for k, f in formulas.items():
            assert evaluate(inst, f) == expected[k], (k, sorted(pairs))


def test_acyclic_formula_text():
    f = expand_qualifier("acyclic", A.RelRef("cdr"), A.RelRef("List"), A.RelRef("List"))
    assert show(f) == "all x : List | !(x in x.^cdr)"


def test_equivalence_is_a_conjunction():
    args = (A.RelRef("eq"), A.RelRef("List"), A.RelRef("List"))
    got = expand_qualifier("equivalence", *args)
    parts = [expand_qualifier(k, *args) for k in ("reflexive", "transitive", "symmetric")]
    assert show(got) == show(A.conj(*parts))


def test_non_binary_qualifier():
    with pytest.raises(NonBinaryQualifier):
        expand_qualifier("acyclic", Relation("C", 1), A.RelRef("C"), A.RelRef("C"))


def test_tol_has_acyclic_and_singleton(tol_problem):
    acyc = tol_problem.constraint("qualifier/cdr/acyclic")
    assert acyc.category == "qualifier" and "^cdr" in show(acyc.formula)
    nil = tol_problem.constraint("cardinality/Nil/one")
    assert show(nil.formula) == "one Nil"
    assert "#List" in show(tol_problem.constraint("cardinality/List/bound").formula)


def test_minimal_lowering():
    p = compile(resolve_and_typecheck(parse("package p { class C { } }")))
    assert [r.name for r in p.relations if r.kind == "class"] == ["C"]
    assert [r.name for r in p.relations if r.kind == "builtin"] == ["class"]
    assert not [c for c in p.constraints if c.category == "qualifier"]
    assert not [c for c in p.constraints if c.id.startswith("structure/disjoint")]


def test_contradictory_core():
    mm = resolve_and_typecheck(parse((FIXTURES / "contradictory.aie").read_text(), "contradictory.aie"))
    out = Analysis(mm).solve()
    assert not out.sat
    assert out.diagnosis.ids == {"cardinality/C/no", "invariant/inv1"}
    assert all(item.span is not None for item in out.diagnosis.core)


@pytest.mark.parametrize("name", ["tol.aie", "coverage.aie", "empty.aie", "contradictory.aie"])
def test_housing_and_spans(name):
    text = (FIXTURES / name).read_text()
    mm = resolve_and_typecheck(parse(text, name))
    p = compile(mm, 5)
    p.check()
    declared = {r.name for r in p.relations}
    for c in p.constraints:
        assert relations_of(c.formula) <= declared, c.id
        assert c.span is not None and c.span.file == name, c.id
    assert len({c.id for c in p.constraints}) == len(p.constraints)
    for cls in mm.classes:
        assert sum(r.name == cls for r in p.relations) == 1
    for f in mm.features.values():
        assert sum(r.name == f.name for r in p.relations) == (0 if f.ghost else 1)


def test_abstract_classes_are_unions(tol):
    an = Analysis(tol, scope=ScopeConfig(default_scope=2))
    subs = {}
    for name, c in tol.classes.items():
        for s in c.supers:
            subs.setdefault(s, []).append(name)
    seen = 0
    for report in an.completions(8):
        inst = report.completed
        for name, c in tol.classes.items():
            if c.abstract:
                union = set()
                for s in subs.get(name, []):
                    union |= inst[s].tuples
                assert inst[name].tuples == union, name
        seen += 1
    assert seen == 8

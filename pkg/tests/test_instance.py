from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import REPAIRED_SCOPES
from metareason.frontend import DslSyntaxError, TypeMismatch, parse, resolve_and_typecheck
from metareason.frontend.diagnostics import DuplicateName
from metareason.instance import (
    AbstractInstantiation,
    CardinalityScopeConflict,
    ScopeBelowAssertion,
    ScopeConfig,
    UnknownClass,
    UnknownFeature,
    parse_instance,
    serialize_instance,
)
from metareason.instance.bounds import effective_scopes, prepare
from metareason.instance.ais import _quote
from metareason.instance.completion import _unquote
from metareason.pipeline import Analysis, empty_instance

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def inst(body, mm):
    return parse_instance("instance m of tol {\n" + body + "\n}", mm, "m.ais")


def test_parse_cyclic_fixture(tol):
    i = parse_instance((FIXTURES / "cyclic.ais").read_text(), tol, "cyclic.ais")
    assert i.object_names == ["t0"]
    assert [str(l) for l in i.links] == ["t0.cdr = t0"]
    assert i.links[0].span.line == 4


def test_string_and_literal_targets(tol):
    i = inst('object v : EnginedVehicle\n v.name = "Ford F-150 XLT"', tol)
    assert i.links[0].kind == "string" and i.links[0].value == "Ford F-150 XLT"


@pytest.mark.parametrize(
    "body, err",
    [
        ("object l : List", AbstractInstantiation),
        ("object l : Vehicle", AbstractInstantiation),
        ("object x : Nope", UnknownClass),
        ("object t : TruckList\n t.wheels = t", UnknownFeature),
        ("object t : TruckList\n t.car = t", TypeMismatch),
        ("object t : TruckList\n t.name = \"x\"", UnknownFeature),
        ("object v : EnginedVehicle\n v.name = 3", TypeMismatch),
        ("object t : TruckList\n object t : CarList", DuplicateName),
        ("object Nil : Nil", DuplicateName),
        ("object t : TruckList\n t.cdr", DslSyntaxError),
    ],
)
def test_instance_errors(tol, body, err):
    with pytest.raises(err):
        inst(body, tol)


def test_empty_instance_uses_default_scopes(tol):
    scopes = effective_scopes(tol, empty_instance(tol), ScopeConfig(default_scope=3))
    assert scopes["TruckList"] == 3
    assert scopes["Nil"] == 1 and scopes["Memory"] == 1


def test_one_class_keeps_an_atom_at_scope_zero(tol):
    scopes = effective_scopes(tol, empty_instance(tol), ScopeConfig(default_scope=0))
    assert scopes["Nil"] == 1 and scopes["TruckList"] == 0


def test_scope_below_assertion(tol):
    i = inst("object a : TruckList\n object b : TruckList", tol)
    with pytest.raises(ScopeBelowAssertion):
        effective_scopes(tol, i, ScopeConfig(per_class={"TruckList": 1}))


def test_cardinality_scope_conflict(tol):
    i = inst("object n1 : Nil\n object n2 : Nil", tol)
    with pytest.raises(CardinalityScopeConflict):
        effective_scopes(tol, i, ScopeConfig())


def test_bounds_shape(tol_problem, tol):
    i = parse_instance((FIXTURES / "cyclic.ais").read_text(), tol, "cyclic.ais")
    prep = prepare(tol_problem, i, ScopeConfig())
    b = prep.bounds
    for r in b.relations:
        assert b.lower(r) <= b.upper(r), r.name
    cdr = b.relation("cdr")
    assert ("t0", "t0") in b.upper(cdr).names()
    assert ("t0",) in b.lower(b.relation("TruckList")).names()
    assert any(c.category == "fact" for c in prep.problem.constraints)
    hard = prepare(tol_problem, i, ScopeConfig(), hard_facts=True)
    assert ("t0", "t0") in hard.bounds.lower(hard.bounds.relation("cdr")).names()
    assert not any(c.category == "fact" for c in hard.problem.constraints)


def _repaired(tol, limit):
    i = parse_instance((FIXTURES / "repaired.ais").read_text(), tol, "repaired.ais")
    an = Analysis(tol, i, ScopeConfig(**REPAIRED_SCOPES))
    return i, list(an.completions(limit))


def test_diff_partitions_the_completion(tol):
    base, reports = _repaired(tol, 5)
    assert reports
    asserted = {str(l) for l in base.links}
    for rep in reports:
        links = {str(l): inferred for l, inferred, _ in rep.links()}
        assert all(not links[s] for s in asserted)
        assert {s for s, inf in links.items() if inf} == {str(l) for l in rep.inferred_links | rep.inferred_model_facts}
        objs = {n: inf for n, _, inf in rep.objects()}
        assert all(not objs[o] for o in base.object_names)


def test_completions_are_distinct_and_round_trip(tol):
    _, reports = _repaired(tol, 20)
    keys = set()
    for rep in reports:
        keys.add((rep.all_objects, rep.all_links))
        text = serialize_instance(rep)
        back = parse_instance(text, tol, "back.ais")
        assert {(o.name, o.cls) for o in back.objects} == set(rep.all_objects)
        assert {str(l) for l in back.links} == {str(l) for l in rep.all_links}
    assert len(keys) == len(reports) == 20


@settings(max_examples=200, deadline=None)
@given(st.text())
def test_string_quoting_round_trips(s):
    assert _unquote(_quote(s)) == s


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20))
def test_string_links_round_trip(tol, s):
    text = f"instance m of tol {{\n object v : EnginedVehicle\n v.name = {_quote(s)}\n}}"
    i = parse_instance(text, tol, "s.ais")
    assert i.links[0].value == s

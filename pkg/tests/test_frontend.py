from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metareason.frontend import (
    ArityError,
    CyclicInheritance,
    DslSyntaxError,
    DuplicateFeature,
    GhostReference,
    TypeMismatch,
    UnknownName,
    UnsatisfiedParameterBound,
    parse,
    parse_formula,
    pretty,
    render_error,
    resolve_and_typecheck,
)
from metareason.compiler.qualifiers import KEYWORDS
from metareason.frontend.lexer import tokenize
from metareason.kernel import ast as A

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
CORPUS = sorted(FIXTURES.glob("*.aie"))


def resolve(text):
    return resolve_and_typecheck(parse(text, "t.aie"))


def test_tol_has_ten_classifiers(tol_text):
    ast = parse(tol_text, "tol.aie")
    classes = {c.name: c for c in ast.packages[0].classifiers}
    assert len(classes) == 10
    assert all(classes[n].abstract for n in ("Object", "List", "Vehicle"))
    assert classes["Nil"].cardinality.word == "one"
    assert classes["Memory"].cardinality.word == "one"


def test_minimal_package():
    ast = parse("package p { }")
    assert len(ast.packages) == 1 and not ast.packages[0].classifiers


def test_extends_without_type():
    with pytest.raises(DslSyntaxError) as exc:
        parse("package p { class C extends { } }")
    err = exc.value
    assert "type identifier" in err.message and err.span.column == 29


def test_recovery_reports_each_error():
    with pytest.raises(DslSyntaxError) as exc:
        parse("package p { class C extends { } class D { ] } }")
    assert len(exc.value.errors) == 2


def test_wildcard_resolves_to_instantiations(tol):
    lists = tol.features["lists"]
    assert set(lists.target) == {"List<EnginedVehicle>", "List<NonEnginedVehicle>"}
    assert {"TruckList", "CarList"} <= tol.descendants("List<EnginedVehicle>")
    assert "BicycleList" in tol.descendants("List<NonEnginedVehicle>")


def test_no_type_parameter_survives(tol):
    for c in tol.classes.values():
        for s in c.supers:
            assert s in tol.classes
    for f in tol.features.values():
        assert all(t in tol.classes or t in tol.datatypes for t in f.target)


def test_cyclic_inheritance():
    with pytest.raises(CyclicInheritance) as exc:
        resolve("package p { class A extends B {} class B extends A {} }")
    assert "A -> B -> A" in str(exc.value)


def test_second_join_is_a_type_mismatch():
    src = "package p { class L { property car : V [?] } class V { } all x : L | some x.car.car }"
    with pytest.raises(TypeMismatch) as exc:
        resolve(src)
    span = exc.value.span
    assert src[span.offset:span.offset + span.length].endswith("car")
    assert span.offset > src.index("x.car.car") + 2


@pytest.mark.parametrize(
    "src, err",
    [
        ("package p { class C { property f : D [*] } }", UnknownName),
        ("package p { class C { property f : C [*] property f : C [*] } }", DuplicateFeature),
        ("package p { class C { } class G<T extends C> { } class D { property g : G<D> [?] } }", UnsatisfiedParameterBound),
        ("package p { class C { ghost property g : C [*] } some C.g }", GhostReference),
        ("package p { class C { } some ~C }", ArityError),
        ("package p { class C { attribute a : C [?] } }", TypeMismatch),
    ],
)
def test_resolution_errors(src, err):
    with pytest.raises(err) as exc:
        resolve(src)
    assert exc.value.span is not None
    assert render_error(exc.value, src).startswith("error[")


def test_rendered_diagnostic_has_caret():
    src = "package p {\n  class C extends Nope { }\n}"
    with pytest.raises(UnknownName) as exc:
        resolve(src)
    text = render_error(exc.value, src)
    assert "--> t.aie:2:19" in text and "^^^^" in text


def test_precedence_and_aliases():
    f = parse_formula("all x : A | x in x.r => some x.r && no x.s || lone x.t")
    assert isinstance(f, A.Quant)
    body = f.body
    assert isinstance(body, A.BinFormula) and body.op == "=>"
    assert isinstance(body.right, A.BinFormula) and body.right.op == "||"
    assert parse_formula("some a => b in c => some d").right.op == "=>"
    assert parse_formula("∀ x : A | x ⊆ B ∪ C") == parse_formula("all x : A | x in B + C")
    assert parse_formula("some x : A | x ∉ B") == parse_formula("some x : A | !(x in B)")


def test_all_keywords_lex():
    kinds = {t.kind for t in tokenize("package class extends attribute property model ghost one lone some no", "k")}
    assert {"package", "class", "extends", "attribute", "property", "model", "ghost", "one", "lone", "some", "no"} <= kinds


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_round_trip_corpus(path):
    text = path.read_text()
    ast = parse(text, path.name)
    again = parse(pretty(ast), path.name)
    assert again == ast


def test_coverage_fixture_exercises_grammar():
    text = (FIXTURES / "coverage.aie").read_text()
    for needle in ("? ", "pi(", "int2expr(", "sum(", "{ s : Shelf |", "? super", "? extends", "datatype", "enum",
                   "model property", "ghost attribute", "{ id }", "composes", "derived", "lone class", "no class",
                   "some class", "one class", "[0, 5]", "[0..3]", "[+]"):
        assert needle in text
    for kw in KEYWORDS:
        assert kw in text
    mm = resolve(text)
    assert "Box<Book, Named>" in mm.classes


# ------------------------------------------------------------- generated input

NAMES = ["A", "B", "C", "D", "E"]


@st.composite
def metamodels(draw):
    n = draw(st.integers(1, 5))
    names = NAMES[:n]
    classes = []
    for i, name in enumerate(names):
        supers = draw(st.sets(st.sampled_from(names[:i]), max_size=2)) if i else set()
        abstract = draw(st.booleans())
        feats = []
        for j in range(draw(st.integers(0, 2))):
            tgt = draw(st.sampled_from(names))
            mult = draw(st.sampled_from(["[?]", "[*]", "[1]", "[+]", "[0..2]"]))
            props = draw(st.sets(st.sampled_from(sorted(KEYWORDS)), max_size=2))
            body = " { " + ", ".join(sorted(props)) + " }" if props else ""
            feats.append(f"property f{name}{j} : {tgt} {mult}{body}")
        ext = " extends " + ", ".join(sorted(supers)) if supers else ""
        classes.append((name, f"{'abstract ' if abstract else ''}class {name}{ext} {{ {' '.join(feats)} }}", feats))
    invs = []
    if draw(st.booleans()):
        a = draw(st.sampled_from(names))
        invs.append(f"all x : {a} | some x.class")
    order = draw(st.permutations(range(n)))
    return [classes[i][1] for i in order], invs, [classes[i][1] for i in range(n)]


@settings(max_examples=60, deadline=None)
@given(metamodels())
def test_generated_round_trip_and_order_independence(data):
    shuffled, invs, ordered = data
    t1 = "package p { " + " ".join(shuffled + invs) + " }"
    t2 = "package p { " + " ".join(ordered + invs) + " }"
    ast = parse(t1)
    assert parse(pretty(ast)) == ast
    m1, m2 = resolve(t1), resolve(t2)
    assert list(m1.classes) == list(m2.classes)
    assert [(c.name, c.supers, c.abstract) for c in m1.classes.values()] == \
        [(c.name, c.supers, c.abstract) for c in m2.classes.values()]
    assert list(m1.features) == list(m2.features)

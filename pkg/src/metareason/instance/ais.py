"""The textual instance format.

    instance m of tol {
      object t0 : TruckList
      t0.cdr = t0
      t0.name = "Ford"
    }

Lines starting with ``--`` are comments. Output may prefix objects and links
with ``inferred`` and group inferred facts of model features in an
``inferred model { ... }`` block; on input both markers are accepted and
ignored, so a serialized completion reads back as a plain instance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend.diagnostics import DslSyntaxError, DuplicateName, FrontendError, TypeMismatch, UnknownName, Warning_
from ..frontend.lexer import Token, tokenize
from ..frontend.resolve import ResolvedMetamodel
from ..kernel.ast import SourceSpan

KEYWORDS = frozenset({"instance", "of", "object", "inferred", "model"})


class UnknownClass(FrontendError):
    code = "unknown-class"


class UnknownFeature(FrontendError):
    code = "unknown-feature"


class AbstractInstantiation(FrontendError):
    code = "abstract-instantiation"


class UnknownObject(UnknownName):
    code = "unknown-object"


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    cls: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


# target kinds: object, string, int, literal (enum or boolean)
@dataclass(frozen=True)
class Link:
    source: str
    feature: str
    kind: str
    value: object
    span: Optional[SourceSpan] = field(default=None, compare=False)

    @property
    def target_text(self) -> str:
        if self.kind == "string":
            return _quote(self.value)
        return str(self.value)

    def __str__(self):
        return f"{self.source}.{self.feature} = {self.target_text}"


@dataclass
class PartialInstance:
    name: str
    package: str
    objects: tuple[ObjectDecl, ...] = ()
    links: tuple[Link, ...] = ()
    file: str = "<instance>"
    source: str = ""
    warnings: list[Warning_] = field(default_factory=list)

    def object(self, name: str) -> ObjectDecl:
        for o in self.objects:
            if o.name == name:
                return o
        raise KeyError(name)

    @property
    def object_names(self) -> list[str]:
        return [o.name for o in self.objects]


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def _quote(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in s) + '"'


class _Reader:
    def __init__(self, text: str, file: str):
        self.toks = tokenize(text, file, KEYWORDS)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def at(self, *kinds) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        if not self.at(kind):
            found = "end of input" if self.tok.kind == "eof" else f"'{self.tok.value}'"
            raise DslSyntaxError(f"expected {what}, found {found}", self.tok.span, [kind])
        return self.advance()

    def class_name(self) -> tuple[str, SourceSpan]:
        start = self.expect("ident", "class name")
        name = start.value
        if self.at("<"):
            self.advance()
            args = [self.class_name()[0]]
            while self.at(","):
                self.advance()
                args.append(self.class_name()[0])
            self.expect(">", "'>'")
            name += "<" + ", ".join(args) + ">"
        return name, start.span

    def link(self) -> Link:
        src = self.expect("ident", "object name")
        self.expect(".", "'.'")
        feat = self.advance()
        if feat.kind not in ("ident", "model", "object", "of", "instance"):
            raise DslSyntaxError(f"expected feature name, found '{feat.value}'", feat.span, ["identifier"])
        self.expect("=", "'='")
        t = self.tok
        if t.kind == "string":
            kind, value = "string", t.value
            self.advance()
        elif t.kind == "int":
            kind, value = "int", int(t.value)
            self.advance()
        elif t.kind == "-":
            self.advance()
            kind, value = "int", -int(self.expect("int", "integer").value)
        elif t.kind == "ident":
            kind, value = "object", t.value
            self.advance()
        else:
            raise DslSyntaxError(f"expected link target, found '{t.value}'", t.span, ["identifier", "string", "integer"])
        last = self.toks[self.pos - 1].span
        s = src.span
        span = SourceSpan(s.file, s.line, s.column, max(1, last.offset + last.length - s.offset), s.offset)
        self.accept_semicolon()
        return Link(src.value, feat.value, kind, value, span)

    def accept_semicolon(self):
        if self.at(";"):
            self.advance()

    def read(self):
        self.expect("instance", "'instance'")
        name = self.expect("ident", "instance name").value
        self.expect("of", "'of'")
        pkg = self.expect("ident", "package name").value
        self.expect("{", "'{'")
        objects, links = [], []
        while not self.at("}"):
            if self.at("inferred"):
                self.advance()
                if self.at("model"):
                    self.advance()
                    self.expect("{", "'{'")
                    while not self.at("}"):
                        links.append(self.link())
                    self.advance()
                    continue
            if self.at("object"):
                start = self.advance()
                oname = self.expect("ident", "object name")
                self.expect(":", "':'")
                cname, _ = self.class_name()
                last = self.toks[self.pos - 1].span
                span = SourceSpan(start.span.file, start.span.line, start.span.column,
                                  last.offset + last.length - start.span.offset, start.span.offset)
                objects.append(ObjectDecl(oname.value, cname, span))
                self.accept_semicolon()
            elif self.at("ident"):
                links.append(self.link())
            else:
                raise DslSyntaxError(
                    f"expected object, link or '}}', found {'end of input' if self.at('eof') else repr(self.tok.value)}",
                    self.tok.span, ["object", "identifier", "}"],
                )
        self.advance()
        if not self.at("eof"):
            raise DslSyntaxError(f"expected end of input, found '{self.tok.value}'", self.tok.span, ["eof"])
        return name, pkg, objects, links


def reserved_atoms(mm: ResolvedMetamodel) -> set[str]:
    """Atom names taken by class atoms and literals; objects may not reuse them."""
    out = set(mm.concrete_classes)
    for dt in mm.datatypes.values():
        out.update(dt.literals)
    return out


def parse_instance(text: str, mm: ResolvedMetamodel, file: str = "<instance>") -> PartialInstance:
    name, pkg, objects, links = _Reader(text, file).read()
    inst = PartialInstance(name, pkg, (), (), file, text)
    seen: dict[str, ObjectDecl] = {}
    reserved = reserved_atoms(mm)
    for o in objects:
        if o.name in seen:
            raise DuplicateName(f"object {o.name} is declared twice", o.span)
        if o.name in reserved:
            raise DuplicateName(f"object name {o.name} clashes with a class or literal name", o.span)
        if o.cls not in mm.classes:
            raise UnknownClass(f"unknown class {o.cls}", o.span)
        if mm.classes[o.cls].abstract:
            raise AbstractInstantiation(f"cannot instantiate abstract class {o.cls}", o.span)
        seen[o.name] = o
    checked = []
    enum_of = {lit: dt.name for dt in mm.datatypes.values() for lit in dt.literals}
    for link in links:
        if link.source not in seen:
            raise UnknownObject(f"unknown object {link.source}", link.span)
        cls = seen[link.source].cls
        f = mm.features.get(link.feature)
        if f is None or f.owner not in mm.ancestors(cls):
            raise UnknownFeature(f"class {cls} has no feature {link.feature}", link.span)
        if f.ghost:
            inst.warnings.append(Warning_(f"link on ghost feature {f.name} ignored", link.span, "ghost-link"))
            continue
        kind = link.kind
        if kind == "object" and link.value not in seen:
            if link.value in enum_of:
                kind = "literal"
            else:
                raise UnknownObject(f"unknown object {link.value}", link.span)
        link = Link(link.source, link.feature, kind, link.value, link.span)
        _check_target(mm, f, link, seen, enum_of)
        checked.append(link)
    inst.objects = tuple(objects)
    inst.links = tuple(checked)
    return inst


def _check_target(mm, f, link: Link, seen, enum_of):
    targets = f.target
    if link.kind == "object":
        tcls = seen[link.value].cls
        if f.target_is_data or not any(mm.is_subtype(tcls, t) for t in targets):
            raise TypeMismatch(f"{link.feature} cannot point to {link.value} : {tcls}", link.span)
        return
    if not f.target_is_data:
        raise TypeMismatch(f"{link.feature} expects an object, got {link.target_text}", link.span)
    kinds = {mm.datatypes[t].kind for t in targets}
    if link.kind == "string" and not kinds & {"string", "datatype"}:
        raise TypeMismatch(f"{link.feature} does not take strings", link.span)
    if link.kind == "int" and "int" not in kinds:
        raise TypeMismatch(f"{link.feature} does not take integers", link.span)
    if link.kind == "literal" and enum_of.get(link.value) not in targets:
        raise TypeMismatch(f"{link.value} is not a value of {' + '.join(targets)}", link.span)


def serialize_instance(report) -> str:
    """Render a completion report; inferred facts carry the ``inferred`` marker."""
    base = report.base
    lines = [f"instance {base.name} of {base.package} {{"]
    for name, cls, inferred in report.objects():
        lines.append(f"  {'inferred ' if inferred else ''}object {name} : {cls}")
    model_lines = []
    for link, inferred, is_model in report.links():
        if inferred and is_model:
            model_lines.append(f"    {link}")
        else:
            lines.append(f"  {'inferred ' if inferred else ''}{link}")
    if model_lines:
        lines.append("  inferred model {")
        lines.extend(model_lines)
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"

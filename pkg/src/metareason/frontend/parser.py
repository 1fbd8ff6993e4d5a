"""Recursive-descent parser for metamodel files.

Errors are collected with panic-mode recovery: after a bad class member,
feature or invariant the parser skips to the next ``;`` or closing ``}`` at
the same nesting depth and carries on, so one run reports every independent
mistake. ``parse`` raises a single DslSyntaxError holding all of them.
"""
from __future__ import annotations

from typing import Optional

from ..kernel import ast as A
from ..kernel.ast import SourceSpan
from .diagnostics import DslSyntaxError
from .lexer import Token, tokenize
from .syntax import (
    ClassDecl,
    DataTypeDecl,
    EnumDecl,
    Feature,
    Invariant,
    Keyword,
    Metamodel,
    Multiplicity,
    Name,
    Package,
    Param,
    StringLit,
    TypeRef,
    Wildcard,
)

CARDINALITIES = ("one", "lone", "some", "no")
QUALIFIERS = ("model", "ghost", "nullable")
ATTRIBUTE_FLAGS = ("id", "derived")
REFERENCE_FLAGS = ("derived", "composes")
PROPS = (
    "acyclic", "transitive", "reflexive", "irreflexive", "symmetric",
    "asymmetric", "antisymmetric", "total", "functional", "surjective",
    "injective", "bijective", "complete", "bijection", "preorder",
    "equivalence", "partialorder", "totalorder",
)
SYNC = ("package", "class", "abstract", "datatype", "enum", "attribute", "property", "model", "ghost")


def _describe(tok: Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    if tok.kind == "string":
        return f'string "{tok.value}"'
    return f"'{tok.value}'"


def _kind(node) -> str:
    if isinstance(node, A.Formula):
        return "formula"
    if isinstance(node, A.IntExpr):
        return "int"
    return "expr"


class Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.text = text
        self.file = file
        self.toks = tokenize(text, file)
        self.pos = 0
        self.depth = 0
        self.errors: list[DslSyntaxError] = []

    # ------------------------------------------------------------ plumbing

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def at_word(self, *words: str) -> bool:
        return self.tok.kind == "ident" and self.tok.value in words

    def advance(self) -> Token:
        t = self.tok
        if t.kind == "{":
            self.depth += 1
        elif t.kind == "}":
            self.depth -= 1
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, kind: str) -> Optional[Token]:
        return self.advance() if self.at(kind) else None

    def fail(self, expected, what: Optional[str] = None, tok: Optional[Token] = None):
        tok = tok or self.tok
        expected = (expected,) if isinstance(expected, str) else tuple(expected)
        desc = what or " or ".join(f"'{e}'" if e not in ("identifier", "integer", "string") else e for e in expected)
        raise DslSyntaxError(f"expected {desc}, found {_describe(tok)}", tok.span, expected)

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        if not self.at(kind):
            self.fail("identifier" if kind == "ident" else kind, what)
        return self.advance()

    def span_from(self, start: Token) -> SourceSpan:
        last = self.toks[self.pos - 1] if self.pos > 0 else start
        s = start.span
        end = last.span.offset + last.span.length
        return SourceSpan(s.file, s.line, s.column, max(1, end - s.offset), s.offset)

    def recover(self, depth: int) -> None:
        """Skip to the next ';' (consumed) or '}' (left in place) at ``depth``.

        Keywords that can only begin a new member also stop the skip.
        """
        first = True
        while not self.at("eof"):
            if not first and self.depth == depth and self.at(*SYNC):
                return
            first = False
            if self.depth == depth and self.at(";"):
                self.advance()
                return
            if self.depth == depth and self.at("}"):
                return
            if self.depth < depth:
                return
            self.advance()

    def guarded(self, depth: int, fn):
        try:
            return fn()
        except DslSyntaxError as e:
            self.errors.append(e)
            before = self.pos
            self.recover(depth)
            if self.pos == before and not self.at("}", "eof"):
                self.advance()
            return None

    # ----------------------------------------------------------- structure

    def parse_metamodel(self) -> Metamodel:
        packages = []
        while not self.at("eof"):
            if not self.at("package"):
                self.errors.append(self._error_here("package"))
                break
            p = self.guarded(0, self.parse_package)
            if p is not None:
                packages.append(p)
        if self.errors:
            first = self.errors[0]
            raise DslSyntaxError(first.message, first.span, first.expected, list(self.errors))
        return Metamodel(tuple(packages), self.file, self.text)

    def _error_here(self, *expected) -> DslSyntaxError:
        try:
            self.fail(expected)
        except DslSyntaxError as e:
            return e

    def parse_package(self) -> Package:
        start = self.expect("package")
        name = self.expect("ident", "package name").value
        self.expect("{")
        depth = self.depth
        packages, classifiers, invariants = [], [], []
        phase = 0
        while not self.at("}", "eof"):
            if self.at("package"):
                if phase > 0:
                    self.guarded(depth, lambda: self.fail(("classifier", "invariant"), "classifier or invariant (nested packages come first)"))
                    continue
                p = self.guarded(depth, self.parse_package)
                if p is not None:
                    packages.append(p)
            elif self.starts_classifier():
                if phase > 1:
                    self.guarded(depth, lambda: self.fail("invariant", "invariant (classifiers precede package invariants)"))
                    continue
                phase = 1
                c = self.guarded(depth, self.parse_classifier)
                if c is not None:
                    classifiers.append(c)
            else:
                phase = 2
                inv = self.guarded(depth, self.parse_invariant)
                if inv is not None:
                    invariants.append(inv)
        self.expect("}")
        return Package(name, tuple(packages), tuple(classifiers), tuple(invariants), self.span_from(start))

    def starts_classifier(self) -> bool:
        if self.at("abstract", "class", "datatype", "enum"):
            return True
        return self.tok.kind in CARDINALITIES and self.peek().kind in ("class", "abstract")

    def parse_classifier(self):
        if self.at("datatype"):
            start = self.advance()
            name = self.expect("ident", "datatype name").value
            self.accept(";")
            return DataTypeDecl(name, self.span_from(start))
        if self.at("enum"):
            start = self.advance()
            name = self.expect("ident", "enum name").value
            self.expect("{")
            lits = []
            if not self.at("}"):
                lits.append(self.expect("ident", "enum literal").value)
                while self.accept(","):
                    lits.append(self.expect("ident", "enum literal").value)
            self.expect("}")
            return EnumDecl(name, tuple(lits), self.span_from(start))
        return self.parse_class()

    def parse_class(self) -> ClassDecl:
        start = self.tok
        abstract = bool(self.accept("abstract"))
        card = None
        if self.tok.kind in CARDINALITIES:
            t = self.advance()
            card = Keyword(t.value, t.span)
        if not abstract and card is not None and self.at("abstract"):
            abstract = bool(self.advance())
        self.expect("class")
        name_tok = self.expect("ident", "class name")
        params = self.parse_template() if self.at("<") else ()
        extends = []
        if self.accept("extends"):
            extends.append(self.parse_type("type identifier"))
            while self.accept(","):
                extends.append(self.parse_type("type identifier"))
        bound = bound_span = None
        if self.at("["):
            bstart = self.advance()
            lo = int(self.expect("int", "integer").value)
            self.expect(",")
            if self.accept("*"):
                hi = None
            else:
                hi = int(self.expect("int", "integer or '*'").value)
            self.expect("]")
            bound = (lo, hi)
            bound_span = self.span_from(bstart)
        self.expect("{")
        depth = self.depth
        features, invariants = [], []
        while not self.at("}", "eof"):
            if self.starts_feature():
                if invariants:
                    self.guarded(depth, lambda: self.fail("invariant", "invariant (features precede class invariants)"))
                    continue
                f = self.guarded(depth, self.parse_feature)
                if f is not None:
                    features.append(f)
            else:
                inv = self.guarded(depth, self.parse_invariant)
                if inv is not None:
                    invariants.append(inv)
        self.expect("}")
        return ClassDecl(
            name_tok.value, abstract, card, tuple(params), tuple(extends), bound,
            tuple(features), tuple(invariants), self.span_from(start), name_tok.span, bound_span,
        )

    def parse_template(self) -> tuple[Param, ...]:
        self.expect("<")
        params = [self.parse_param()]
        while self.accept(","):
            params.append(self.parse_param())
        self.expect(">")
        return tuple(params)

    def parse_param(self) -> Param:
        start = self.expect("ident", "type parameter")
        bounds = []
        if self.accept("extends"):
            bounds.append(self.parse_type())
            while self.accept("&"):
                bounds.append(self.parse_type())
        return Param(start.value, tuple(bounds), self.span_from(start))

    def parse_type(self, what: str = "type") -> TypeRef:
        start = self.expect("ident", what)
        args = []
        if self.accept("<"):
            args.append(self.parse_type_arg())
            while self.accept(","):
                args.append(self.parse_type_arg())
            self.expect(">")
        return TypeRef(start.value, tuple(args), self.span_from(start))

    def parse_type_arg(self):
        if self.at("?"):
            start = self.advance()
            if self.at("extends", "super"):
                kind = self.advance().kind
                return Wildcard(kind, self.parse_type(), self.span_from(start))
            return Wildcard(None, None, self.span_from(start))
        return self.parse_type()

    def starts_feature(self) -> bool:
        if self.at("attribute", "property", "model", "ghost"):
            return True
        return self.at_word("nullable") and self.peek().kind in ("attribute", "property", "model", "ghost")

    def parse_feature(self) -> Feature:
        start = self.tok
        quals = []
        while self.at("model", "ghost") or self.at_word("nullable"):
            t = self.advance()
            quals.append(Keyword(t.value, t.span))
        if not self.at("attribute", "property"):
            self.fail(("attribute", "property"))
        kind = self.advance().kind
        card = None
        if self.tok.kind in CARDINALITIES:
            t = self.advance()
            card = Keyword(t.value, t.span)
        name_tok = self.expect("ident", "feature name")
        self.expect(":")
        ftype = self.parse_type()
        mult = self.parse_multiplicity()
        flags, props = [], []
        if self.at("{"):
            self.advance()
            allowed = ATTRIBUTE_FLAGS if kind == "attribute" else REFERENCE_FLAGS
            while not self.at("}"):
                t = self.tok
                if t.kind == "ident" and t.value in allowed:
                    flags.append(Keyword(t.value, t.span))
                elif t.kind == "ident" and kind == "property" and t.value in PROPS:
                    props.append(Keyword(t.value, t.span))
                else:
                    self.fail(allowed + (PROPS if kind == "property" else ()) + ("}",),
                              f"{kind} flag or '}}'")
                self.advance()
                self.accept(",")
            self.expect("}")
        self.accept(";")
        return Feature(kind, name_tok.value, ftype, mult, tuple(quals), card, tuple(flags), tuple(props),
                       self.span_from(start), name_tok.span)

    def parse_multiplicity(self) -> Multiplicity:
        start = self.expect("[", "multiplicity '['")
        if self.at("*", "+", "?"):
            sym = self.advance().kind
            lo, hi = {"*": (0, None), "+": (1, None), "?": (0, 1)}[sym]
            text = sym
        else:
            lo = int(self.expect("int", "multiplicity").value)
            hi = lo
            text = str(lo)
            if self.accept(".."):
                if self.accept("*"):
                    hi = None
                    text += "..*"
                else:
                    hi = int(self.expect("int", "integer or '*'").value)
                    text += f"..{hi}"
        self.expect("]")
        return Multiplicity(lo, hi, text, self.span_from(start))

    def parse_invariant(self) -> Invariant:
        start = self.tok
        f = self.parse_formula()
        self.require(f, "formula", start)
        self.accept(";")
        return Invariant(f, self.span_from(start))

    # ------------------------------------------------------------ formulas

    def require(self, node, kind: str, start: Token):
        if _kind(node) != kind:
            names = {"formula": "a formula", "int": "an integer expression", "expr": "a relational expression"}
            raise DslSyntaxError(
                f"expected {names[kind]}, found {names[_kind(node)]}", self.span_from(start), [kind]
            )
        return node

    def parse_formula(self):
        return self.parse_implies()

    def starts_quant(self) -> bool:
        if self.at("all", "exists"):
            return True
        return self.at("some") and self.peek().kind == "ident" and self.peek(2).kind in (":", ",")

    def parse_quant(self):
        start = self.advance()
        quant = "all" if start.kind == "all" else "exists"
        decls = self.parse_decls()
        self.expect("|")
        body_start = self.tok
        body = self.require(self.parse_formula(), "formula", body_start)
        return A.Quant(quant, decls, body, self.span_from(start))

    def parse_decls(self) -> tuple[A.Decl, ...]:
        decls = []
        while True:
            names = [self.expect("ident", "variable name")]
            while self.accept(","):
                names.append(self.expect("ident", "variable name"))
            self.expect(":")
            estart = self.tok
            e = self.require(self.parse_additive(), "expr", estart)
            for n in names:
                decls.append(A.Decl(n.value, e, n.span))
            if self.at(",") and self.peek().kind == "ident":
                self.advance()
                continue
            return tuple(decls)

    def parse_implies(self):
        start = self.tok
        left = self.parse_or()
        if self.at("=>"):
            self.require(left, "formula", start)
            self.advance()
            rstart = self.tok
            right = self.require(self.parse_implies(), "formula", rstart)
            return A.BinFormula("=>", left, right, self.span_from(start))
        return left

    def parse_or(self):
        start = self.tok
        left = self.parse_and()
        while self.at("||"):
            self.require(left, "formula", start)
            self.advance()
            rstart = self.tok
            right = self.require(self.parse_and(), "formula", rstart)
            left = A.BinFormula("||", left, right, self.span_from(start))
        return left

    def parse_and(self):
        start = self.tok
        left = self.parse_not()
        while self.at("&&"):
            self.require(left, "formula", start)
            self.advance()
            rstart = self.tok
            right = self.require(self.parse_not(), "formula", rstart)
            left = A.BinFormula("&&", left, right, self.span_from(start))
        return left

    def parse_not(self):
        if self.starts_quant():
            return self.parse_quant()
        if self.at("!") and self.peek().kind not in ("in", "="):
            start = self.advance()
            fstart = self.tok
            inner = self.require(self.parse_not(), "formula", fstart)
            return A.Not(inner, self.span_from(start))
        return self.parse_compare()

    def parse_compare(self):
        start = self.tok
        if self.tok.kind in CARDINALITIES:
            mult = self.advance().kind
            estart = self.tok
            e = self.require(self.parse_additive(), "expr", estart)
            return A.Mult(mult, e, self.span_from(start))
        left = self.parse_additive()
        negate = False
        if self.at("!") and self.peek().kind in ("in", "="):
            self.advance()
            negate = True
        if self.at("in"):
            self.require(left, "expr", start)
            self.advance()
            rstart = self.tok
            right = self.require(self.parse_additive(), "expr", rstart)
            node = A.Compare("in", left, right, self.span_from(start))
        elif self.at("="):
            self.advance()
            rstart = self.tok
            right = self.parse_additive()
            if _kind(left) == "int" or _kind(right) == "int":
                self.require(left, "int", start)
                self.require(right, "int", rstart)
                node = A.IntCompare("=", left, right, self.span_from(start))
            else:
                self.require(left, "expr", start)
                self.require(right, "expr", rstart)
                node = A.Compare("=", left, right, self.span_from(start))
        elif self.at("<", ">") and not negate:
            op = self.advance().kind
            self.require(left, "int", start)
            rstart = self.tok
            right = self.require(self.parse_additive(), "int", rstart)
            node = A.IntCompare(op, left, right, self.span_from(start))
        else:
            if negate:
                self.fail(("in", "="))
            return left
        return A.Not(node, self.span_from(start)) if negate else node

    def parse_additive(self):
        start = self.tok
        left = self.parse_mul()
        while self.at("+", "-"):
            op = self.advance().kind
            rstart = self.tok
            right = self.parse_mul()
            if _kind(left) == "int":
                self.require(right, "int", rstart)
                left = A.Arith(op, left, right, self.span_from(start))
            else:
                self.require(left, "expr", start)
                self.require(right, "expr", rstart)
                left = A.BinExpr(op, left, right, self.span_from(start))
        return left

    def parse_mul(self):
        start = self.tok
        left = self.parse_inter()
        while self.at("*", "/"):
            op = self.advance().kind
            self.require(left, "int", start)
            rstart = self.tok
            right = self.require(self.parse_inter(), "int", rstart)
            left = A.Arith(op, left, right, self.span_from(start))
        return left

    def _rel_binary(self, ops, sub, name=None):
        start = self.tok
        left = sub()
        while self.at(*ops):
            op = self.advance().kind
            self.require(left, "expr", start)
            rstart = self.tok
            right = self.require(sub(), "expr", rstart)
            left = A.BinExpr(name or op, left, right, self.span_from(start))
        return left

    def parse_inter(self):
        return self._rel_binary(("&",), self.parse_product)

    def parse_product(self):
        return self._rel_binary(("->",), self.parse_join)

    def parse_join(self):
        start = self.tok
        left = self.parse_unary()
        while self.at("."):
            self.advance()
            self.require(left, "expr", start)
            rstart = self.tok
            if self.at("class"):
                t = self.advance()
                right = Name("class", t.span)
            else:
                right = self.require(self.parse_unary(), "expr", rstart)
            left = A.BinExpr(".", left, right, self.span_from(start))
        return left

    def parse_unary(self):
        start = self.tok
        if self.at("~", "^"):
            op = self.advance().kind
            estart = self.tok
            e = self.require(self.parse_unary(), "expr", estart)
            return A.UnaryExpr(op, e, self.span_from(start))
        if self.at("#"):
            self.advance()
            estart = self.tok
            e = self.require(self.parse_inter(), "expr", estart)
            return A.Card(e, self.span_from(start))
        if self.at("-") and self.peek().kind == "int":
            self.advance()
            t = self.advance()
            return A.IntLit(-int(t.value), self.span_from(start))
        return self.parse_primary()

    def parse_primary(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Name(t.value, t.span)
        if t.kind == "class":
            self.advance()
            return Name("class", t.span)
        if t.kind == "univ":
            self.advance()
            return A.Univ(t.span)
        if t.kind == "int":
            self.advance()
            return A.IntLit(int(t.value), t.span)
        if t.kind == "string":
            self.advance()
            return StringLit(t.value, t.span)
        if t.kind == "(":
            self.advance()
            inner = self.parse_formula()
            if self.at("?"):
                self.require(inner, "formula", t)
                self.advance()
                s1 = self.tok
                then = self.require(self.parse_additive(), "expr", s1)
                self.expect(":")
                s2 = self.tok
                other = self.require(self.parse_additive(), "expr", s2)
                self.expect(")")
                return A.IfExpr(inner, then, other, self.span_from(t))
            self.expect(")")
            return inner
        if t.kind == "{":
            self.advance()
            decls = self.parse_decls()
            self.expect("|")
            bstart = self.tok
            body = self.require(self.parse_formula(), "formula", bstart)
            self.expect("}")
            return A.Comprehension(decls, body, self.span_from(t))
        if t.kind == "pi":
            self.advance()
            self.expect("(")
            estart = self.tok
            e = self.require(self.parse_additive(), "expr", estart)
            cols = []
            while self.accept(","):
                cstart = self.tok
                cols.append(self.require(self.parse_additive(), "int", cstart))
            self.expect(")")
            return A.Projection(e, tuple(cols), self.span_from(t))
        if t.kind == "int2expr":
            self.advance()
            self.expect("(")
            istart = self.tok
            v = self.require(self.parse_additive(), "int", istart)
            self.expect(")")
            return A.IntToExpr(v, self.span_from(t))
        if t.kind == "sum":
            self.advance()
            self.expect("(")
            estart = self.tok
            e = self.require(self.parse_additive(), "expr", estart)
            self.expect(")")
            return A.Sum(e, self.span_from(t))
        self.fail(("identifier", "(", "{", "univ", "integer", "string"), "expression")


def parse(text: str, file: str = "<input>") -> Metamodel:
    """Parse a metamodel file; raises DslSyntaxError listing every error found."""
    return Parser(text, file).parse_metamodel()


def parse_formula(text: str, file: str = "<formula>"):
    """Parse a standalone formula (used by tests and the REPL-style helpers)."""
    p = Parser(text, file)
    start = p.tok
    f = p.require(p.parse_formula(), "formula", start)
    if not p.at("eof"):
        p.fail("end of input")
    return f


def parse_expr(text: str, file: str = "<expr>"):
    p = Parser(text, file)
    node = p.parse_formula()
    if not p.at("eof"):
        p.fail("end of input")
    return node

"""Name resolution, generic expansion and type checking.

Generic classes are expanded over the instantiations that actually occur in
the text. The raw class ``List`` stays as an abstract class whose direct
subclasses are its instantiations (``List<A>``, ``List<B>``, ...), and its
features are declared once on the raw class with the parameter erased to its
bound. Each instantiation then narrows the feature targets through a
refinement, so ``car`` on ``List<A>`` only reaches ``A``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from ..kernel import ast as A
from ..kernel.ast import SourceSpan
from .diagnostics import (
    ArityError,
    CyclicInheritance,
    DuplicateFeature,
    DuplicateName,
    GhostReference,
    TypeMismatch,
    UnknownName,
    UnsatisfiedParameterBound,
    Warning_,
)
from .syntax import ClassDecl, DataTypeDecl, EnumDecl, Feature, Keyword, Metamodel, Name, Package, StringLit, TypeRef, Wildcard

BUILTIN_DATATYPES = {"String": "string", "Int": "int", "Boolean": "boolean"}
BOOLEAN_ATOMS = ("true", "false")
MAX_INSTANTIATIONS = 256
CLASS_ATOM_TAG = "$class"


@dataclass
class ClassInfo:
    name: str
    qualified: str
    abstract: bool
    supers: tuple[str, ...] = ()
    cardinality: Optional[Keyword] = None
    bound: Optional[tuple[int, Optional[int]]] = None
    bound_span: Optional[SourceSpan] = None
    decl: Optional[ClassDecl] = None
    generic: Optional[str] = None  # raw generic class for an instantiation
    args: tuple[str, ...] = ()
    raw_generic: bool = False
    span: Optional[SourceSpan] = None

    @property
    def concrete(self) -> bool:
        return not self.abstract


@dataclass
class FeatureInfo:
    name: str
    kind: str  # "attribute" or "property"
    owner: str
    target: tuple[str, ...]  # union of classifier names
    lower: int
    upper: Optional[int]
    decl: Feature
    target_is_data: bool = False
    refinements: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)

    @property
    def model(self) -> bool:
        return self.decl.has_qualifier("model")

    @property
    def ghost(self) -> bool:
        return self.decl.has_qualifier("ghost")

    @property
    def derived(self) -> bool:
        return self.decl.has_flag("derived")

    @property
    def composes(self) -> bool:
        return self.decl.has_flag("composes")

    @property
    def is_id(self) -> bool:
        return self.decl.has_flag("id")

    @property
    def inferred_only(self) -> bool:
        return self.model or self.derived

    @property
    def props(self) -> tuple[Keyword, ...]:
        return self.decl.props

    @property
    def span(self):
        return self.decl.span


@dataclass
class DataTypeInfo:
    name: str
    kind: str  # string, int, boolean, datatype, enum
    literals: tuple[str, ...] = ()
    span: Optional[SourceSpan] = None


@dataclass
class InvariantInfo:
    id: str
    formula: A.Formula
    span: Optional[SourceSpan]
    owner: str


@dataclass
class ResolvedMetamodel:
    ast: Metamodel
    package: str
    classes: dict[str, ClassInfo]
    features: dict[str, FeatureInfo]
    datatypes: dict[str, DataTypeInfo]
    invariants: list[InvariantInfo]
    string_literals: tuple[str, ...]
    uses_ints: bool
    referenced_datatypes: tuple[str, ...] = ()
    warnings: list[Warning_] = field(default_factory=list)

    def __post_init__(self):
        self._subs: dict[str, list[str]] = {c: [] for c in self.classes}
        for c in self.classes.values():
            for s in c.supers:
                self._subs[s].append(c.name)
        for v in self._subs.values():
            v.sort()
        self._desc: dict[str, frozenset[str]] = {}
        self._anc: dict[str, frozenset[str]] = {}

    @property
    def source(self) -> str:
        return self.ast.source

    @property
    def file(self) -> str:
        return self.ast.file

    def subclasses(self, name: str) -> list[str]:
        return self._subs[name]

    def descendants(self, name: str) -> frozenset[str]:
        """``name`` and every class below it."""
        got = self._desc.get(name)
        if got is None:
            out = {name}
            for s in self._subs[name]:
                out |= self.descendants(s)
            got = self._desc[name] = frozenset(out)
        return got

    def ancestors(self, name: str) -> frozenset[str]:
        got = self._anc.get(name)
        if got is None:
            out = {name}
            for s in self.classes[name].supers:
                out |= self.ancestors(s)
            got = self._anc[name] = frozenset(out)
        return got

    def leaves(self, name: str) -> frozenset[str]:
        """Concrete classes whose objects may belong to ``name``."""
        if name in self.datatypes:
            return frozenset({name})
        return frozenset(d for d in self.descendants(name) if self.classes[d].concrete)

    def is_subtype(self, a: str, b: str) -> bool:
        if a in self.datatypes or b in self.datatypes:
            return a == b
        return b in self.ancestors(a)

    @property
    def concrete_classes(self) -> list[str]:
        return sorted(c for c, info in self.classes.items() if info.concrete)

    def feature_relations(self) -> list[FeatureInfo]:
        return [f for f in self.features.values() if not f.ghost]

    def features_of(self, cls: str) -> list[FeatureInfo]:
        """Non-ghost features declared on ``cls`` or any of its ancestors."""
        anc = self.ancestors(cls)
        return [f for f in self.feature_relations() if f.owner in anc]


# ---------------------------------------------------------------------------


class _Resolver:
    def __init__(self, mm: Metamodel):
        self.mm = mm
        self.warnings: list[Warning_] = []
        self.decls: dict[str, tuple[object, str]] = {}  # simple name -> (decl, qualified)
        self.package_invariants: list[tuple[object, str]] = []
        self.classes: dict[str, ClassInfo] = {}
        self.datatypes: dict[str, DataTypeInfo] = {}
        self.pending: list[tuple[str, str, tuple[str, ...], Optional[SourceSpan]]] = []
        self.bound_checks: list[tuple[str, tuple[str, ...], TypeRef]] = []
        self.literals: set[str] = set()
        self.uses_ints = False
        self.ref_datatypes: set[str] = set()

    # ----------------------------------------------------------- collection

    def collect(self, pkg: Package, path: str):
        q = f"{path}.{pkg.name}" if path else pkg.name
        for sub in pkg.packages:
            self.collect(sub, q)
        for c in pkg.classifiers:
            if c.name in self.decls or c.name in BUILTIN_DATATYPES and not isinstance(c, DataTypeDecl):
                raise DuplicateName(f"classifier {c.name} is declared twice", getattr(c, "name_span", None) or c.span)
            self.decls[c.name] = (c, f"{q}.{c.name}")
        for inv in pkg.invariants:
            self.package_invariants.append((inv, q))

    def run(self) -> ResolvedMetamodel:
        if not self.mm.packages:
            top = ""
        else:
            top = self.mm.packages[0].name
        for p in self.mm.packages:
            self.collect(p, "")
        for name, kind in BUILTIN_DATATYPES.items():
            lits = BOOLEAN_ATOMS if kind == "boolean" else ()
            self.datatypes[name] = DataTypeInfo(name, kind, lits)
        for name, (d, q) in sorted(self.decls.items()):
            if isinstance(d, DataTypeDecl):
                self.datatypes[name] = DataTypeInfo(name, "datatype", (), d.span)
            elif isinstance(d, EnumDecl):
                self.datatypes[name] = DataTypeInfo(name, "enum", d.literals, d.span)
        self.enum_literals: dict[str, str] = {}
        for dt in self.datatypes.values():
            if dt.kind in ("enum", "boolean"):
                for lit in dt.literals:
                    if lit in self.enum_literals:
                        raise DuplicateName(f"enum literal {lit} is declared twice", dt.span)
                    self.enum_literals[lit] = dt.name

        class_decls = {n: d for n, (d, _) in self.decls.items() if isinstance(d, ClassDecl)}
        self.class_decls = class_decls
        for name, d in sorted(class_decls.items()):
            q = self.decls[name][1]
            if d.params:
                self.classes[name] = ClassInfo(
                    name, q, True, (), d.cardinality, d.bound, d.bound_span, d, raw_generic=True, span=d.name_span
                )
            else:
                self.classes[name] = ClassInfo(name, q, d.abstract, (), d.cardinality, d.bound, d.bound_span, d, span=d.name_span)
        # supertypes of non-generic classes, discovering instantiations on the way
        for name, d in sorted(class_decls.items()):
            if d.params:
                erase = {p.name: _Erased(p) for p in d.params}
                self.classes[name].supers = tuple(self.resolve_super(t, erase) for t in d.extends)
            else:
                self.classes[name].supers = tuple(self.resolve_super(t, {}) for t in d.extends)
        # non-generic feature types can also mention instantiations
        for name, d in sorted(class_decls.items()):
            if not d.params:
                for f in d.features:
                    self.resolve_type(f.type, {}, f.span)
        self.expand_instantiations()
        self.check_cycles()
        rm = ResolvedMetamodel(self.mm, top, dict(sorted(self.classes.items())), {}, self.datatypes, [], (), False)
        self.rm = rm
        self.check_bounds()
        rm.features = self.build_features()
        self.features = rm.features
        for name in rm.classes:
            if name in rm.features:
                raise DuplicateName(f"{name} names both a class and a feature", rm.features[name].decl.name_span)
        rm.invariants = self.build_invariants()
        rm.string_literals = tuple(sorted(self.literals))
        rm.uses_ints = self.uses_ints
        rm.referenced_datatypes = tuple(sorted(self.ref_datatypes))
        rm.warnings = self.warnings
        return rm

    # -------------------------------------------------------------- types

    def lookup_class(self, name: str, span) -> ClassDecl:
        if name not in self.decls:
            raise UnknownName(f"unknown type {name}", span)
        d = self.decls[name][0]
        if not isinstance(d, ClassDecl):
            raise TypeMismatch(f"{name} is not a class", span)
        return d

    def resolve_super(self, t: TypeRef, subst: dict) -> str:
        if t.name in subst:
            raise TypeMismatch(f"cannot extend type parameter {t.name}", t.span)
        self.lookup_class(t.name, t.span)
        if any(isinstance(a, Wildcard) for a in t.args):
            raise TypeMismatch("wildcards are not allowed in extends clauses", t.span)
        names = self.resolve_type(t, subst, t.span)
        assert len(names) == 1
        return names[0]

    def depends_on_erased(self, t, subst) -> bool:
        if isinstance(t, Wildcard):
            return t.bound is not None and self.depends_on_erased(t.bound, subst)
        if isinstance(subst.get(t.name), _Erased):
            return True
        return any(self.depends_on_erased(a, subst) for a in t.args)

    def resolve_type(self, t: TypeRef, subst: dict, span) -> tuple:
        """Union of classifier names denoted by ``t`` under ``subst``.

        ``subst`` maps parameter names to a classifier name, or to an _Erased
        marker in the raw view of a generic class.
        """
        if t.name in subst:
            if t.args:
                raise TypeMismatch(f"type parameter {t.name} takes no arguments", t.span)
            v = subst[t.name]
            if isinstance(v, _Erased):
                if v.param.bounds:
                    return self.resolve_type(v.param.bounds[0], subst, v.param.span)
                return self.roots()
            return (v,)
        if t.name in self.datatypes and t.name not in self.class_decls:
            if t.args:
                raise TypeMismatch(f"datatype {t.name} takes no arguments", t.span)
            return (t.name,)
        d = self.lookup_class(t.name, t.span)
        if not t.args:
            return (t.name,)
        if len(t.args) != len(d.params):
            raise TypeMismatch(
                f"{t.name} expects {len(d.params)} type argument(s), got {len(t.args)}", t.span
            )
        if self.depends_on_erased(t, subst):
            return (t.name,)
        if any(isinstance(a, Wildcard) for a in t.args):
            return self.wildcard_union(t, d, subst)
        args = []
        for a in t.args:
            r = self.resolve_type(a, subst, a.span)
            if len(r) != 1 or isinstance(r[0], tuple):
                raise TypeMismatch("type arguments must name a single type", a.span)
            args.append(r[0])
        return (self.instantiate(t.name, tuple(args), t),)

    def roots(self) -> tuple[str, ...]:
        return tuple(sorted(
            n for n, d in self.class_decls.items() if not d.extends
        ))

    def instantiate(self, gname: str, args: tuple[str, ...], t: TypeRef) -> str:
        name = f"{gname}<{', '.join(args)}>"
        if name not in self.classes:
            if len(self.classes) > MAX_INSTANTIATIONS + len(self.class_decls):
                raise TypeMismatch(f"generic expansion of {gname} does not terminate", t.span)
            g = self.class_decls[gname]
            self.classes[name] = ClassInfo(
                name, self.decls[gname][1] + "<" + ", ".join(args) + ">", g.abstract, (), None, None, None, g,
                generic=gname, args=args, span=t.span,
            )
            self.pending.append((name, gname, args, t.span))
            self.bound_checks.append((gname, args, t))
        return name

    def wildcard_union(self, t: TypeRef, d: ClassDecl, subst) -> tuple[str, ...]:
        # resolved lazily: the instantiation set is only complete after expansion
        key = ("wild", t, tuple(sorted(subst.items())))
        self.wildcards = getattr(self, "wildcards", {})
        self.wildcards[key] = (t, d, subst)
        return (key,)  # placeholder, replaced in finish_type

    def finish_type(self, names) -> tuple[str, ...]:
        out = []
        for n in names:
            if isinstance(n, tuple):
                t, d, subst = self.wildcards[n]
                out.extend(self.match_wildcard(t, d, subst))
            else:
                out.append(n)
        return tuple(sorted(set(out)))

    def match_wildcard(self, t: TypeRef, d: ClassDecl, subst) -> list[str]:
        fixed = []
        for a in t.args:
            if isinstance(a, Wildcard):
                if a.kind is None:
                    fixed.append(("any", None))
                else:
                    b = self.resolve_type(a.bound, subst, a.span)
                    if len(b) != 1 or isinstance(b[0], tuple):
                        raise TypeMismatch("wildcard bound must name a single type", a.span)
                    fixed.append((a.kind, b[0]))
            else:
                r = self.resolve_type(a, subst, a.span)
                fixed.append(("exact", r[0]))
        out = []
        for c in self.rm.classes.values():
            if c.generic != t.name:
                continue
            ok = True
            for (kind, b), arg in zip(fixed, c.args):
                if kind == "exact" and arg != b:
                    ok = False
                elif kind == "extends" and not self.rm.is_subtype(arg, b):
                    ok = False
                elif kind == "super" and not self.rm.is_subtype(b, arg):
                    ok = False
            if ok:
                out.append(c.name)
        return out

    def expand_instantiations(self):
        done = 0
        while self.pending:
            name, gname, args, span = self.pending.pop(0)
            g = self.class_decls[gname]
            subst = {p.name: a for p, a in zip(g.params, args)}
            supers = [gname]
            for t in g.extends:
                supers.append(self.resolve_super(t, subst))
            self.classes[name].supers = tuple(dict.fromkeys(supers))
            for f in g.features:
                self.resolve_type(f.type, subst, f.span)
            done += 1
            if done > MAX_INSTANTIATIONS:
                raise TypeMismatch(f"generic expansion of {gname} does not terminate", span)

    def check_cycles(self):
        state: dict[str, int] = {}
        stack: list[str] = []

        def visit(n):
            state[n] = 1
            stack.append(n)
            for s in self.classes[n].supers:
                if state.get(s) == 1:
                    cycle = stack[stack.index(s):]
                    raise CyclicInheritance(cycle, self.classes[s].span)
                if s not in state:
                    visit(s)
            stack.pop()
            state[n] = 2

        for n in sorted(self.classes):
            if n not in state:
                visit(n)

    def check_bounds(self):
        for gname, args, t in self.bound_checks:
            g = self.class_decls[gname]
            subst = dict(zip((p.name for p in g.params), args))
            for p, arg in zip(g.params, args):
                for b in p.bounds:
                    bn = self.resolve_type(b, subst, b.span)
                    if not any(self.rm.is_subtype(arg, x) for x in bn):
                        raise UnsatisfiedParameterBound(
                            f"{arg} does not satisfy bound {p.name} extends {b} of {gname}", t.span
                        )

    # ----------------------------------------------------------- features

    def build_features(self) -> dict[str, FeatureInfo]:
        feats: dict[str, FeatureInfo] = {}
        for cname, d in sorted(self.class_decls.items()):
            erase = {p.name: _Erased(p) for p in d.params}
            for f in d.features:
                if f.name in feats:
                    raise DuplicateFeature(f"feature {f.name} is declared more than once", f.name_span)
                target = self.finish_type(self.resolve_type(f.type, erase, f.span))
                is_data = all(t in self.datatypes for t in target) and bool(target)
                if f.kind == "attribute" and target and not is_data:
                    raise TypeMismatch(f"attribute {f.name} must have a datatype type, not {f.type}", f.type.span)
                if f.kind == "property" and any(t in self.datatypes for t in target):
                    raise TypeMismatch(f"property {f.name} must have a class type, not {f.type}", f.type.span)
                if any(t == "Int" for t in target) and not f.has_qualifier("ghost"):
                    self.uses_ints = True
                lower, upper = f.mult.lower, f.mult.upper
                if f.has_qualifier("nullable"):
                    self.warnings.append(Warning_(
                        "'nullable' is not part of the core grammar; read as lower multiplicity 0", f.span, "extra-grammatical"
                    ))
                    lower = 0
                if f.kind == "attribute" and f.cardinality is not None:
                    self.warnings.append(Warning_(
                        f"cardinality '{f.cardinality.word}' on attribute {f.name} constrains its overall value set",
                        f.cardinality.span, "attribute-cardinality",
                    ))
                info = FeatureInfo(f.name, f.kind, cname, target, lower, upper, f, is_data)
                if d.params:
                    for inst in self.rm.classes.values():
                        if inst.generic != cname:
                            continue
                        subst = dict(zip((p.name for p in d.params), inst.args))
                        narrowed = self.finish_type(self.resolve_type(f.type, subst, f.span))
                        if narrowed != target:
                            info.refinements.append((inst.name, narrowed))
                feats[f.name] = info
        return dict(sorted(feats.items()))

    # --------------------------------------------------------- invariants

    def build_invariants(self) -> list[InvariantInfo]:
        out = []
        n = 0
        for cname, d in sorted(self.class_decls.items(), key=lambda kv: (kv[1].span.offset if kv[1].span else 0)):
            for inv in d.invariants:
                n += 1
                f = self.formula(inv.formula, {})
                out.append(InvariantInfo(f"inv{n}", f, inv.span, cname))
        for inv, pkg in self.package_invariants:
            n += 1
            f = self.formula(inv.formula, {})
            out.append(InvariantInfo(f"inv{n}", f, inv.span, pkg))
        out.sort(key=lambda i: i.span.offset if i.span else 0)
        return [replace(inv, id=f"inv{k + 1}") for k, inv in enumerate(out)]

    # Column types are frozensets of leaf tags (concrete classes, datatype
    # names, "$class"); None stands for "anything" (univ).

    def _meet(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        return a & b

    def _join_cols(self, a, b):
        if a is None or b is None:
            return None
        return a | b

    def rel_type(self, name: str, span):
        rm = self.rm
        if name in rm.classes:
            return (rm.leaves(name),)
        f = self.features[name]
        tgt = frozenset().union(*(rm.leaves(t) for t in f.target)) if f.target else frozenset()
        return (rm.leaves(f.owner), tgt)

    def expr(self, node, env):
        """Resolve ``node``; returns (resolved node, column types)."""
        span = node.span
        rm = self.rm
        if isinstance(node, Name):
            n = node.name
            if n in env:
                return A.Var(n, span), env[n]
            if n == "class":
                objs = frozenset(rm.concrete_classes)
                return A.RelRef("class", span), (objs, frozenset({CLASS_ATOM_TAG}))
            if n in rm.classes:
                return A.RelRef(n, span), self.rel_type(n, span)
            if n in self.features:
                if self.features[n].ghost:
                    raise GhostReference(f"ghost feature {n} cannot be used in reasoning", span)
                return A.RelRef(n, span), self.rel_type(n, span)
            if n in self.enum_literals:
                self.ref_datatypes.add(self.enum_literals[n])
                return A.RelRef(n, span), (frozenset({self.enum_literals[n]}),)
            if n in self.datatypes:
                self.ref_datatypes.add(n)
                if n == "Int":
                    self.uses_ints = True
                return A.RelRef(n, span), (frozenset({n}),)
            raise UnknownName(f"unknown name {n}", span)
        if isinstance(node, StringLit):
            self.literals.add(node.value)
            return A.RelRef(string_relation(node.value), span), (frozenset({"String"}),)
        if isinstance(node, A.Univ):
            return node, (None,)
        if isinstance(node, A.UnaryExpr):
            e, t = self.expr(node.expr, env)
            if len(t) != 2:
                raise ArityError(f"{node.op} needs a binary operand, got arity {len(t)}", span)
            if node.op == "~":
                return replace(node, expr=e), (t[1], t[0])
            both = self._join_cols(t[0], t[1])
            return replace(node, expr=e), (both, both)
        if isinstance(node, A.BinExpr):
            l, lt = self.expr(node.left, env)
            r, rt = self.expr(node.right, env)
            op = node.op
            out = replace(node, left=l, right=r)
            if op in ("+", "&", "-"):
                if len(lt) != len(rt):
                    raise ArityError(f"operands of {op} have arities {len(lt)} and {len(rt)}", span)
                if op == "+":
                    return out, tuple(self._join_cols(a, b) for a, b in zip(lt, rt))
                if op == "&":
                    return out, tuple(self._meet(a, b) for a, b in zip(lt, rt))
                return out, lt
            if op == ".":
                if len(lt) + len(rt) - 2 < 1:
                    raise ArityError(f"join of arities {len(lt)} and {len(rt)} is empty", span)
                a, b = lt[-1], rt[0]
                if a is not None and b is not None and a and b and not (a & b):
                    where = node.right.span or span
                    raise TypeMismatch(
                        f"join is always empty: left side yields {_fmt(a)} but right side starts at {_fmt(b)}", where
                    )
                return out, lt[:-1] + rt[1:]
            return out, lt + rt
        if isinstance(node, A.IfExpr):
            c = self.formula(node.cond, env)
            a, at = self.expr(node.then, env)
            b, bt = self.expr(node.other, env)
            if len(at) != len(bt):
                raise ArityError(f"branches of conditional have arities {len(at)} and {len(bt)}", span)
            return replace(node, cond=c, then=a, other=b), tuple(self._join_cols(x, y) for x, y in zip(at, bt))
        if isinstance(node, A.Comprehension):
            decls, inner = self.resolve_decls(node.decls, env)
            body = self.formula(node.body, inner)
            return replace(node, decls=decls, body=body), tuple(inner[d.name][0] for d in decls)
        if isinstance(node, A.Projection):
            e, t = self.expr(node.expr, env)
            cols = []
            types = []
            for c in node.columns:
                ci = self.int(c, env)
                k = A.constant_int(ci)
                if k is None:
                    raise ArityError("projection columns must be integer constants", c.span or span)
                if not 0 <= k < len(t):
                    raise ArityError(f"projection column {k} out of range for arity {len(t)}", c.span or span)
                cols.append(ci)
                types.append(t[k])
            return replace(node, expr=e, columns=tuple(cols)), tuple(types)
        if isinstance(node, A.IntToExpr):
            self.uses_ints = True
            return replace(node, value=self.int(node.value, env)), (frozenset({"Int"}),)
        if isinstance(node, A.Var):
            return node, env[node.name]
        if isinstance(node, A.RelRef):
            return node, self.rel_type(node.name, span)
        raise ArityError(f"expected a relational expression, found {type(node).__name__}", span)

    def resolve_decls(self, decls, env):
        inner = dict(env)
        out = []
        for d in decls:
            e, t = self.expr(d.expr, inner)
            if len(t) != 1:
                raise ArityError(f"variable {d.name} must range over a unary expression", d.expr.span or d.span)
            inner[d.name] = t
            out.append(replace(d, expr=e))
        return tuple(out), inner

    def int(self, node, env):
        span = node.span
        if isinstance(node, A.IntLit):
            return node
        if isinstance(node, A.Card):
            e, _ = self.expr(node.expr, env)
            return replace(node, expr=e)
        if isinstance(node, A.Sum):
            self.uses_ints = True
            e, t = self.expr(node.expr, env)
            if len(t) != 1:
                raise ArityError("sum needs a unary operand", span)
            if t[0] is not None and t[0] - {"Int"}:
                raise TypeMismatch(f"sum over non-integer atoms ({_fmt(t[0])})", span)
            return replace(node, expr=e)
        if isinstance(node, A.Arith):
            return replace(node, left=self.int(node.left, env), right=self.int(node.right, env))
        raise ArityError(f"expected an integer expression, found {type(node).__name__}", span)

    def formula(self, node, env):
        span = node.span
        if isinstance(node, A.Compare):
            l, lt = self.expr(node.left, env)
            r, rt = self.expr(node.right, env)
            if len(lt) != len(rt):
                raise ArityError(f"operands of {node.op} have arities {len(lt)} and {len(rt)}", span)
            return replace(node, left=l, right=r)
        if isinstance(node, A.Mult):
            e, _ = self.expr(node.expr, env)
            return replace(node, expr=e)
        if isinstance(node, A.Not):
            return replace(node, formula=self.formula(node.formula, env))
        if isinstance(node, A.BinFormula):
            return replace(node, left=self.formula(node.left, env), right=self.formula(node.right, env))
        if isinstance(node, A.Quant):
            decls, inner = self.resolve_decls(node.decls, env)
            return replace(node, decls=decls, body=self.formula(node.body, inner))
        if isinstance(node, A.IntCompare):
            return replace(node, left=self.int(node.left, env), right=self.int(node.right, env))
        raise ArityError(f"expected a formula, found {type(node).__name__}", span)


@dataclass(frozen=True)
class _Erased:
    param: object


def _fmt(tags) -> str:
    return "{" + ", ".join(sorted(tags)) + "}"


def string_relation(value: str) -> str:
    """Name of the internal singleton relation (and atom) for a string literal."""
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def resolve_and_typecheck(mm: Metamodel) -> ResolvedMetamodel:
    return _Resolver(mm).run()

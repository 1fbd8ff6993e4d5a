"""Universes, tuple sets, relations and bounds."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, BoundViolation, DuplicateAtom, EmptyUniverse, UnknownAtom

Tuple = tuple  # a tuple of atom ordinals


class Universe:
    """An ordered, immutable set of atoms.

    Integer atoms are ordinary atoms named by their decimal value; ``int_value``
    tells them apart from object and literal atoms.
    """

    __slots__ = ("_atoms", "_index", "_ints")

    def __init__(self, atoms: Sequence[str], integers: Iterable[int] = ()):
        atoms = tuple(atoms)
        index: dict[str, int] = {}
        ints: dict[int, int] = {}
        for i, a in enumerate(atoms):
            if a in index:
                raise DuplicateAtom(a)
            index[a] = i
        for v in integers:
            name = str(v)
            if name in index:
                raise DuplicateAtom(name)
            index[name] = len(atoms)
            ints[index[name]] = v
            atoms += (name,)
        if not atoms:
            raise EmptyUniverse()
        object.__setattr__(self, "_atoms", atoms)
        object.__setattr__(self, "_index", MappingProxyType(index))
        object.__setattr__(self, "_ints", MappingProxyType(ints))

    def __setattr__(self, name, value):
        raise AttributeError("Universe is immutable")

    @property
    def atoms(self) -> tuple[str, ...]:
        return self._atoms

    @property
    def index(self) -> Mapping[str, int]:
        return self._index

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self._atoms)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self._atoms == other._atoms and dict(self._ints) == dict(other._ints)

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __repr__(self) -> str:
        return f"Universe({list(self._atoms)!r})"

    def ordinal(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAtom(name) from None

    def atom(self, ordinal: int) -> str:
        return self._atoms[ordinal]

    def int_value(self, ordinal: int) -> int | None:
        return self._ints.get(ordinal)

    def int_atom(self, value: int) -> int | None:
        """Ordinal of the integer atom for ``value``, or None when absent."""
        o = self._index.get(str(value))
        if o is not None and o in self._ints:
            return o
        return None

    @property
    def int_ordinals(self) -> Mapping[int, int]:
        """Map from integer-atom ordinal to its value."""
        return self._ints

    def has_ints(self) -> bool:
        return bool(self._ints)


def mk_universe(atom_names: Sequence[str], integers: Iterable[int] = ()) -> Universe:
    return Universe(atom_names, integers)


@dataclass(frozen=True)
class TupleSet:
    universe: Universe
    arity: int
    tuples: frozenset = frozenset()

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch(f"arity must be positive, got {self.arity}")
        n = len(self.universe)
        for t in self.tuples:
            if len(t) != self.arity:
                raise ArityMismatch(f"tuple {t} does not have arity {self.arity}")
            for o in t:
                if not 0 <= o < n:
                    raise UnknownAtom(o)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(sorted(self.tuples))

    def __contains__(self, t) -> bool:
        return t in self.tuples

    def __le__(self, other: TupleSet) -> bool:
        return self.tuples <= other.tuples

    def names(self) -> list[tuple[str, ...]]:
        atom = self.universe.atom
        return [tuple(atom(o) for o in t) for t in sorted(self.tuples)]

    def __repr__(self) -> str:
        inner = ", ".join("(" + ", ".join(t) + ")" for t in self.names())
        return "{" + inner + "}"


def mk_tupleset(universe: Universe, arity: int, tuples: Iterable[Sequence[str]]) -> TupleSet:
    out = set()
    for t in tuples:
        t = tuple(t)
        if len(t) != arity:
            raise ArityMismatch(f"tuple {t} does not have arity {arity}")
        out.add(tuple(universe.ordinal(a) for a in t))
    return TupleSet(universe, arity, frozenset(out))


RELATION_KINDS = ("class", "feature", "builtin", "internal")


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    kind: str = "internal"

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch(f"relation {self.name} must have positive arity")
        if self.kind not in RELATION_KINDS:
            raise ValueError(f"unknown relation kind {self.kind!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Bounds:
    """Lower and upper tuple sets per relation, over one universe."""

    universe: Universe
    entries: Mapping[Relation, tuple[TupleSet, TupleSet]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def lower(self, r: Relation) -> TupleSet:
        return self.entries[r][0]

    def upper(self, r: Relation) -> TupleSet:
        return self.entries[r][1]

    @property
    def relations(self) -> list[Relation]:
        return list(self.entries)

    def relation(self, name: str) -> Relation:
        for r in self.entries:
            if r.name == name:
                return r
        raise KeyError(name)


def set_bounds(bounds: Bounds, relation: Relation, lower: TupleSet, upper: TupleSet) -> Bounds:
    for ts in (lower, upper):
        if ts.arity != relation.arity:
            raise ArityMismatch(f"bound of arity {ts.arity} for relation {relation} of arity {relation.arity}")
        if ts.universe != bounds.universe:
            raise ArityMismatch(f"bound for {relation} is over a different universe")
    extra = lower.tuples - upper.tuples
    if extra:
        atom = bounds.universe.atom
        raise BoundViolation(relation.name, [tuple(atom(o) for o in t) for t in extra])
    entries = dict(bounds.entries)
    entries[relation] = (lower, upper)
    return Bounds(bounds.universe, entries)


@dataclass(frozen=True)
class ConcreteInstance:
    universe: Universe
    valuation: Mapping[Relation, TupleSet]
    bitwidth: int = 8

    def __post_init__(self):
        for r, ts in self.valuation.items():
            if ts.arity != r.arity:
                raise ArityMismatch(f"value of {r} has arity {ts.arity}")
        object.__setattr__(self, "valuation", MappingProxyType(dict(self.valuation)))
        object.__setattr__(self, "_by_name", {r.name: ts for r, ts in self.valuation.items()})

    def lookup(self, name: str) -> TupleSet:
        return self._by_name[name]

    def has(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, r: Relation | str) -> TupleSet:
        if isinstance(r, str):
            return self._by_name[r]
        return self.valuation[r]

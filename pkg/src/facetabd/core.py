"""Relations, atoms, formulas and abduction instances.

Variables are plain strings. A formula keeps an explicit, ordered variable
tuple so that conditioning (``restrict``) can drop a variable's atoms while
keeping the remaining variables in scope; the position of a name in
``Formula.vars`` is its dense index.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import PartialAssignment, ScopeError

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Kind(enum.Enum):
    CLAUSE = "clause"
    XOR = "xor"
    EQUALITY = "eq"
    UNIT = "unit"
    TABLE = "table"


@dataclass(frozen=True)
class Relation:
    """A Boolean relation, optionally carrying a syntactic form.

    ``signs`` (CLAUSE/UNIT) holds one bool per position, True for a positive
    literal. ``parity`` (XOR) is the right-hand side of the equation.
    ``table`` is only set for TABLE relations.
    """

    name: str
    arity: int
    kind: Kind
    signs: tuple | None = None
    parity: int | None = None
    table: frozenset | None = field(default=None, repr=False)

    def contains(self, values) -> bool:
        kind = self.kind
        if kind is Kind.CLAUSE or kind is Kind.UNIT:
            return any(bool(v) == s for v, s in zip(values, self.signs))
        if kind is Kind.XOR:
            return sum(values) % 2 == self.parity
        if kind is Kind.EQUALITY:
            return values[0] == values[1]
        return tuple(values) in self.table

    @cached_property
    def tuples(self) -> frozenset:
        if self.kind is Kind.TABLE:
            return self.table
        return frozenset(t for t in itertools.product((0, 1), repeat=self.arity)
                         if self.contains(t))

    @property
    def is_syntactic(self):
        return self.kind is not Kind.TABLE

    def __str__(self):
        return self.name


def clause_rel(signs) -> Relation:
    signs = tuple(bool(s) for s in signs)
    if len(signs) == 0:
        return FALSE
    if len(signs) == 1:
        return POS_UNIT if signs[0] else NEG_UNIT
    return Relation("or_" + "".join("p" if s else "n" for s in signs), len(signs),
                    Kind.CLAUSE, signs=signs)


def xor_rel(arity: int, parity: int) -> Relation:
    parity = int(parity) & 1
    if arity == 0:
        return FALSE if parity else TRUE
    if arity == 1:
        return POS_UNIT if parity else NEG_UNIT
    return Relation(f"xor{arity}_{parity}", arity, Kind.XOR, parity=parity)


def table_rel(name: str, arity: int, tuples: Iterable) -> Relation:
    tuples = frozenset(tuple(int(b) for b in t) for t in tuples)
    for t in tuples:
        if len(t) != arity or any(b not in (0, 1) for b in t):
            raise ValueError(f"tuple {t} does not fit arity {arity}")
    return Relation(name, arity, Kind.TABLE, table=tuples)


FALSE = Relation("false", 0, Kind.CLAUSE, signs=())
TRUE = Relation("true", 0, Kind.TABLE, table=frozenset({()}))
POS_UNIT = Relation("pos", 1, Kind.UNIT, signs=(True,))
NEG_UNIT = Relation("neg", 1, Kind.UNIT, signs=(False,))
EQUALITY = Relation("eq", 2, Kind.EQUALITY)

_CANONICAL = re.compile(r"(?:or_([pn]*)|xor(\d+)_([01]))\Z")


def canonical_relation(name: str) -> Relation | None:
    """Resolve the reserved names of syntactic relations (``or_pnp``, ``xor3_1``, ...)."""
    fixed = {"false": FALSE, "true": TRUE, "pos": POS_UNIT, "neg": NEG_UNIT, "eq": EQUALITY}
    if name in fixed:
        return fixed[name]
    m = _CANONICAL.match(name)
    if not m:
        return None
    if m.group(1) is not None:
        return clause_rel(c == "p" for c in m.group(1))
    return xor_rel(int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True)
class Atom:
    relation: Relation
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.relation.arity:
            raise ValueError(f"{self.relation.name} expects {self.relation.arity} "
                             f"arguments, got {len(self.args)}")

    def holds(self, assignment: Mapping) -> bool:
        return self.relation.contains([assignment[v] for v in self.args])

    def literals(self):
        """(var, sign) pairs of a clause or unit atom."""
        return list(zip(self.args, self.relation.signs))

    def __str__(self):
        rel = self.relation
        if rel.kind in (Kind.CLAUSE, Kind.UNIT):
            lits = [a if s else "-" + a for a, s in self.literals()]
            return "(" + " v ".join(lits) + ")" if lits else "(false)"
        if rel.kind is Kind.XOR:
            return "(" + " + ".join(self.args) + f" = {rel.parity})"
        if rel.kind is Kind.EQUALITY:
            return f"({self.args[0]} = {self.args[1]})"
        return f"{rel.name}(" + ", ".join(self.args) + ")"


# Convenience constructors, mostly for tests and hand-built fixtures.

def lit(token: str):
    return (token[1:], False) if token.startswith("-") else (token, True)


def clause(*tokens: str) -> Atom:
    pairs = [lit(t) for t in tokens]
    return Atom(clause_rel(s for _, s in pairs), tuple(v for v, _ in pairs))


def imp(a: str, b: str) -> Atom:
    return clause("-" + a, b)


def unit(token: str) -> Atom:
    return clause(token)


def xor(*names: str, parity: int = 1) -> Atom:
    return Atom(xor_rel(len(names), parity), names)


def eq(a: str, b: str) -> Atom:
    return Atom(EQUALITY, (a, b))


def app(relation: Relation, *args: str) -> Atom:
    return Atom(relation, args)


@dataclass(frozen=True)
class Formula:
    atoms: tuple = ()
    vars: tuple = None

    def __post_init__(self):
        atoms = tuple(self.atoms)
        order = dict.fromkeys(self.vars or ())
        for a in atoms:
            for v in a.args:
                if v not in order:
                    order[v] = None
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "vars", tuple(order))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vars)}

    @cached_property
    def atom_vars(self) -> frozenset:
        return frozenset(v for a in self.atoms for v in a.args)

    def relations(self) -> set:
        return {a.relation for a in self.atoms}

    def conj(self, *more) -> "Formula":
        """Conjoin with further atoms or formulas, keeping all variables."""
        atoms = list(self.atoms)
        names = list(self.vars)
        for item in more:
            if isinstance(item, Formula):
                atoms.extend(item.atoms)
                names.extend(item.vars)
            else:
                atoms.append(item)
        return Formula(tuple(atoms), tuple(names))

    def rename(self, mapping: Mapping) -> "Formula":
        atoms = tuple(Atom(a.relation, tuple(mapping.get(v, v) for v in a.args))
                      for a in self.atoms)
        names = tuple(dict.fromkeys(mapping.get(v, v) for v in self.vars))
        return Formula(atoms, names)

    def __len__(self):
        return len(self.atoms)

    def __str__(self):
        return " & ".join(str(a) for a in self.atoms) or "(true)"


def _dedupe(names) -> tuple:
    return tuple(dict.fromkeys(names))


@dataclass(frozen=True)
class AbductionInstance:
    kb: Formula
    hyps: tuple
    mans: tuple

    def __post_init__(self):
        object.__setattr__(self, "hyps", _dedupe(self.hyps))
        object.__setattr__(self, "mans", _dedupe(self.mans))
        scope = self.kb.index
        for role, names in (("hypothesis", self.hyps), ("manifestation", self.mans)):
            for v in names:
                if v not in scope:
                    raise ScopeError(f"{role} {v!r} does not occur in the knowledge base")

    @property
    def vars(self):
        return self.kb.vars


@dataclass(frozen=True)
class FacetInstance:
    base: AbductionInstance
    query: str

    def __post_init__(self):
        if self.query not in self.base.hyps:
            raise ScopeError(f"query {self.query!r} is not a hypothesis")

    kb = property(lambda self: self.base.kb)
    hyps = property(lambda self: self.base.hyps)
    mans = property(lambda self: self.base.mans)


@dataclass(frozen=True)
class DivInstance:
    base: AbductionInstance
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")


@dataclass(frozen=True)
class Resolved:
    """A query answered during preprocessing, without a reduced instance."""

    answer: bool


def evaluate(f: Formula, assignment: Mapping) -> bool:
    missing = [v for v in f.vars if v not in assignment]
    if missing:
        raise PartialAssignment(f"assignment undefined on {missing}")
    return all(a.holds(assignment) for a in f.atoms)


def _restrict_atom(atom: Atom, v: str, b: int):
    """Condition one atom on v=b. Returns an Atom, or None when it became trivially true."""
    rel, args = atom.relation, atom.args
    if v not in args:
        return atom
    kind = rel.kind
    if kind in (Kind.CLAUSE, Kind.UNIT):
        rest = []
        for a, s in zip(args, rel.signs):
            if a == v:
                if s == bool(b):
                    return None
            else:
                rest.append((a, s))
        return Atom(clause_rel(s for _, s in rest), tuple(a for a, _ in rest))
    if kind is Kind.XOR:
        hits = args.count(v)
        rest = tuple(a for a in args if a != v)
        parity = rel.parity ^ (b & hits & 1)
        if not rest and parity == 0:
            return None
        return Atom(xor_rel(len(rest), parity), rest)
    if kind is Kind.EQUALITY:
        p, q = args
        if p == q:
            return None
        other = q if p == v else p
        return Atom(clause_rel((bool(b),)), (other,))
    keep = [i for i, a in enumerate(args) if a != v]
    hit = [i for i, a in enumerate(args) if a == v]
    tuples = {tuple(t[i] for i in keep) for t in rel.tuples if all(t[i] == b for i in hit)}
    if not tuples:
        return Atom(FALSE, ())
    if not keep:
        return None
    return Atom(table_rel(f"{rel.name}_{b}", len(keep), tuples), tuple(args[i] for i in keep))


def restrict(f: Formula, v: str, b: int) -> Formula:
    """Condition ``f`` on ``v = b``; the result ranges over var(f) minus v."""
    atoms = []
    for a in f.atoms:
        r = _restrict_atom(a, v, int(b))
        if r is not None:
            atoms.append(r)
    return Formula(tuple(atoms), tuple(u for u in f.vars if u != v))

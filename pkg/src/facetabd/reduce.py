"""Answer-preserving instance transformers.

Hardness arguments compose these: an ABD instance goes through
``abd_to_isfacet`` (or ``neg_unit_to_facet`` for 1-valid languages with a
negative unit), then ``elim_pos_units`` drops positive units, and
``efpp_substitute`` rewrites the result into the target language.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels, lattice
from .core import (EQUALITY, NEG_UNIT, POS_UNIT, AbductionInstance, Atom, DivInstance,
                   FacetInstance, Formula, Kind, Relation, Resolved, clause, clause_rel, imp)
from .engines import compile_formula
from .errors import (InvalidDefinition, MissingDefinition, NoEquality, NoNegUnit,
                     NotOneValid, NotPos2CNF)

MAX_DEFINITION_VARS = 20


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    for i in itertools.count(1):
        name = f"{base}_{i}"
        if name not in taken:
            return name


@dataclass(frozen=True)
class EfppDefinition:
    """target(free) holds iff some values of ``exist`` satisfy ``body``."""

    target: Relation
    free: tuple
    exist: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "exist", tuple(self.exist))
        names = self.free + self.exist
        if len(self.free) != self.target.arity:
            raise InvalidDefinition(f"{self.target.name} has arity {self.target.arity}, "
                                    f"definition lists {len(self.free)} free variables")
        if len(set(names)) != len(names):
            raise InvalidDefinition("free and existential variables must be distinct")
        stray = set(self.body.vars) - set(names)
        if stray:
            raise InvalidDefinition(f"body mentions undeclared variables {sorted(stray)}")
        if EQUALITY in self.body.relations():
            raise InvalidDefinition("efpp definitions may not use the equality relation")
        if len(names) > MAX_DEFINITION_VARS:
            raise InvalidDefinition(f"definition over {len(names)} variables is too large "
                                    "to validate")
        got = _projection(self.body, names, len(self.free))
        if got != self.target.tuples:
            raise InvalidDefinition(f"body does not define {self.target.name}: projection "
                                    f"has {len(got)} tuples, relation has "
                                    f"{len(self.target.tuples)}")


def _projection(body, names, r):
    comp = compile_formula(body, names)
    models = np.flatnonzero(kernels.model_mask(*comp.arrays()))
    shift = len(names) - r
    return frozenset(tuple((int(a) >> (r - 1 - i)) & 1 for i in range(r))
                     for a in set((models >> shift).tolist()))


def split_clause_definition(signs=(True, True, True, True)) -> EfppDefinition:
    """A 4-clause as two 3-clauses sharing a fresh variable."""
    lits = [("" if s else "-") + f"l{i + 1}" for i, s in enumerate(signs)]
    body = Formula((clause(lits[0], lits[1], "s"), clause(lits[2], lits[3], "-s")),
                   ("l1", "l2", "l3", "l4", "s"))
    return EfppDefinition(clause_rel(signs), ("l1", "l2", "l3", "l4"), ("s",), body)


def horn4_definition() -> EfppDefinition:
    """(-x | -y | -z | v) as exists w. (-x | -y | w) & (-w | -z | v)."""
    body = Formula((clause("-x", "-y", "w"), clause("-w", "-z", "v")),
                   ("x", "y", "z", "v", "w"))
    return EfppDefinition(clause_rel((False, False, False, True)), ("x", "y", "z", "v"),
                          ("w",), body)


def identity_definition(rel: Relation) -> EfppDefinition:
    free = tuple(f"a{i}" for i in range(rel.arity))
    return EfppDefinition(rel, free, (), Formula((Atom(rel, free),), free))


def _parts(inst):
    """(base instance, rebuild function) for the three instance shapes."""
    if isinstance(inst, FacetInstance):
        return inst.base, lambda b: FacetInstance(b, inst.query)
    if isinstance(inst, DivInstance):
        return inst.base, lambda b: DivInstance(b, inst.k)
    return inst, lambda b: b


def efpp_substitute(inst, defs, base=None):
    """Replace every defined relation by its body, with fresh existential variables.

    Relations that have no definition must belong to ``base`` (default: the
    relations used inside the definition bodies).
    """
    src, rebuild = _parts(inst)
    defs = dict(defs)
    if base is None:
        base = {r for d in defs.values() for r in d.body.relations()}
    base = set(base)
    taken = set(src.kb.vars)
    atoms, extra = [], []
    for a in src.kb.atoms:
        d = defs.get(a.relation)
        if d is None:
            if a.relation not in base:
                raise MissingDefinition(f"no definition for relation {a.relation.name}")
            atoms.append(a)
            continue
        mapping = dict(zip(d.free, a.args))
        for e in d.exist:
            name = fresh_name(f"_{e}", taken)
            taken.add(name)
            extra.append(name)
            mapping[e] = name
        atoms.extend(Atom(b.relation, tuple(mapping[v] for v in b.args)) for b in d.body.atoms)
    kb = Formula(tuple(atoms), src.kb.vars + tuple(extra))
    return rebuild(AbductionInstance(kb, src.hyps, src.mans))


def _equality_atoms(p, q, equality, taken):
    if equality is None:
        return [Atom(EQUALITY, (p, q))], []
    mapping = dict(zip(equality.free, (p, q)))
    extra = []
    for e in equality.exist:
        name = fresh_name(f"_{e}", taken)
        taken.add(name)
        extra.append(name)
        mapping[e] = name
    return [Atom(b.relation, tuple(mapping[v] for v in b.args))
            for b in equality.body.atoms], extra


def _check_equality(kb, equality):
    if equality is not None:
        if equality.target.tuples != EQUALITY.tuples:
            raise NoEquality(f"definition of {equality.target.name} is not equality")
        return
    rels = kb.relations()
    if any(lattice._is_eq(r) for r in rels):
        return
    if lattice.fits(rels, "en") or lattice.fits(rels, "ep"):
        raise NoEquality("the language neither contains nor expresses equality; "
                         "supply a definition")


def _with_fresh_eq(inst: AbductionInstance, equality=None):
    _check_equality(inst.kb, equality)
    taken = set(inst.kb.vars)
    x = fresh_name("x", taken)
    taken.add(x)
    y = fresh_name("y", taken)
    taken.add(y)
    m = fresh_name("m", taken)
    taken.add(m)
    ax, ex = _equality_atoms(x, m, equality, taken)
    ay, ey = _equality_atoms(y, m, equality, taken)
    kb = Formula(inst.kb.atoms + tuple(ax + ay), inst.kb.vars + (x, y, m) + tuple(ex + ey))
    return AbductionInstance(kb, inst.hyps + (x, y), inst.mans + (m,)), x


def abd_to_isfacet(inst: AbductionInstance, equality: EfppDefinition | None = None):
    """Add fresh x = m and y = m; x is a facet iff the source has an explanation."""
    base, x = _with_fresh_eq(inst, equality)
    return FacetInstance(base, x)


def abd_to_div(inst: AbductionInstance, equality: EfppDefinition | None = None):
    """As abd_to_isfacet, asking for two explanations at distance 2."""
    base, _ = _with_fresh_eq(inst, equality)
    return DivInstance(base, 2)


def elim_pos_units(fi: FacetInstance):
    """Merge all positive-unit variables into a fresh t that joins H and M."""
    units = [a.args[0] for a in fi.kb.atoms if a.relation == POS_UNIT]
    if fi.query in units:
        return Resolved(False)
    if not units:
        return fi
    unit_vars = set(units)
    t = fresh_name("t", set(fi.kb.vars))
    ren = {u: t for u in unit_vars}
    atoms = tuple(Atom(a.relation, tuple(ren.get(v, v) for v in a.args))
                  for a in fi.kb.atoms if a.relation != POS_UNIT)
    names = tuple(dict.fromkeys(ren.get(v, v) for v in fi.kb.vars))
    hyps = tuple(dict.fromkeys(ren.get(h, h) for h in fi.hyps)) + (t,)
    mans = tuple(dict.fromkeys(ren.get(m, m) for m in fi.mans)) + (t,)
    return FacetInstance(AbductionInstance(Formula(atoms, names), hyps, mans), fi.query)


def neg_unit_to_facet(inst: AbductionInstance) -> FacetInstance:
    """Simulate the negative unit of a 1-valid KB with implications.

    All negative-unit variables are identified into one z; then every
    variable in scope is made to follow z, so z = 1 admits only the all-ones
    model.
    """
    negs = [a.args[0] for a in inst.kb.atoms if a.relation == NEG_UNIT]
    if not negs:
        raise NoNegUnit("the knowledge base has no negative unit clause")
    phi_atoms = [a for a in inst.kb.atoms if a.relation != NEG_UNIT]
    bad = [a for a in phi_atoms if (1,) * a.relation.arity not in a.relation.tuples]
    if bad:
        raise NotOneValid(f"atom {bad[0]} is not 1-valid")
    z = negs[0]
    ren = {u: z for u in negs}

    def r(v):
        return ren.get(v, v)

    phi = [Atom(a.relation, tuple(r(v) for v in a.args)) for a in phi_atoms]
    hyps = tuple(dict.fromkeys(r(h) for h in inst.hyps))
    mans = tuple(dict.fromkeys(r(m) for m in inst.mans))
    scope = list(dict.fromkeys(r(v) for v in inst.kb.vars))
    taken = set(scope)
    x = fresh_name("x", taken)
    taken.add(x)
    y = fresh_name("y", taken)
    taken.add(y)
    m = fresh_name("m", taken)
    phi_vars = [v for v in scope if any(v in a.args for a in phi)]
    V = list(dict.fromkeys(phi_vars + list(hyps) + list(mans) + [x, y, m]))
    atoms = phi + [imp(z, v) for v in V if v != z] + [imp(x, m), imp(y, m)]
    kb = Formula(tuple(atoms), tuple(scope) + (x, y, m))
    return FacetInstance(AbductionInstance(kb, hyps + (x, y), mans + (m,)), x)


def pos2sat_to_div(phi: Formula, k: int) -> DivInstance:
    """Positive 2-CNF models become explanations with equal pairwise distances."""
    for a in phi.atoms:
        rel = a.relation
        if not (rel.kind is Kind.CLAUSE and rel.arity == 2 and all(rel.signs)
                and a.args[0] != a.args[1]):
            raise NotPos2CNF(f"atom {a} is not a positive clause over two variables")
    taken = set(phi.vars)
    atoms, cs = [], []
    for i, a in enumerate(phi.atoms, 1):
        c = fresh_name(f"c{i}", taken)
        taken.add(c)
        cs.append(c)
        atoms.extend(imp(v, c) for v in a.args)
    kb = Formula(tuple(atoms), phi.vars + tuple(cs))
    return DivInstance(AbductionInstance(kb, phi.vars, tuple(cs)), k)


def max_model_distance(phi: Formula):
    """Largest Hamming distance between two models of ``phi`` (None if unsatisfiable)."""
    comp = compile_formula(phi, phi.vars)
    models = np.flatnonzero(kernels.model_mask(*comp.arrays())).astype(np.int64)
    if models.size == 0:
        return None
    return int(np.bitwise_count(models[:, None] ^ models[None, :]).max())

"""Diverse explanation pairs.

For 2-affine and EP knowledge bases the explanation space factors into
independent equivalence classes (and, for 2-affine, clusters of two opposite
classes), so the maximum distance is a sum of per-component maxima and a
witness pair can be assembled component by component.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import lattice
from .core import DivInstance, Formula, Kind
from .engines import unit_propagate
from .errors import UnsatStructure, WrongFragment
from .oracle import NO_EXPLANATION, max_diverse_pair
from .polyfacet import build_clusters


@dataclass(frozen=True)
class DiversityWitness:
    e1: frozenset
    e2: frozenset
    d: int

    def as_dict(self, order=None):
        key = (order or []).index if order else None
        return {"e1": sorted(self.e1, key=key), "e2": sorted(self.e2, key=key), "d": self.d}


def distance(e1, e2) -> int:
    return len(set(e1) ^ set(e2))


def _witness(e1, e2):
    e1, e2 = frozenset(e1), frozenset(e2)
    return DiversityWitness(e1, e2, distance(e1, e2))


def div_oracle(di: DivInstance):
    """(answer, witness); the witness is a maximum-distance pair when one exists."""
    best = max_diverse_pair(di.base)
    if best is NO_EXPLANATION:
        return False, None
    d, e1, e2 = best
    return d >= di.k, DiversityWitness(e1, e2, d)


def _require(kb, shape, what):
    test = lattice.SHAPES[shape]
    for a in kb.atoms:
        if not test(a.relation):
            raise WrongFragment(f"{what} diversity construction cannot handle atom {a}")


def _assemble(hyps, forced_true, cs, m_classes, free_classes):
    """Build (E1, E2) from classes.

    ``m_classes`` must each be hit; ``free_classes`` are (side, other side or
    None) pairs of classes no manifestation depends on.
    """
    hset = set(hyps)
    e1, e2 = set(forced_true), set()
    for c in m_classes:
        reps = [v for v in cs.classes[c] if v in hset]
        e1.add(reps[0])
        e2.update(reps[1:] or reps[:1])
    for side, other in free_classes:
        a = [v for v in cs.classes[side] if v in hset]
        b = [v for v in cs.classes[other] if v in hset] if other is not None else []
        big, small = (a, b) if len(a) >= len(b) else (b, a)
        e1.update(big)
        e2.update(small)
    return _witness(e1, e2)


def _propagated(base):
    pr = unit_propagate(base.kb)
    if not pr.ok or any(pr.forced.get(m) == 0 for m in base.mans):
        return None
    forced_true = [h for h in base.hyps if pr.forced.get(h) == 1]
    hyps = [h for h in base.hyps if h not in pr.forced]
    mans = [m for m in base.mans if m not in pr.forced]
    return pr.residual, hyps, mans, forced_true


def max_pair_affine2(base):
    """Maximum-distance explanation pair of a 2-affine instance, or None."""
    _require(base.kb, "affine2", "2-affine")
    prop = _propagated(base)
    if prop is None:
        return None
    residual, hyps, mans, forced_true = prop
    try:
        cs = build_clusters(residual, mans)
    except UnsatStructure:
        return None
    m_set = set(cs.m_classes)
    hset = set(hyps)
    if any(cs.opposite[c] in m_set for c in m_set):
        return None
    if any(not hset.intersection(cs.classes[c]) for c in cs.m_classes):
        return None
    blocked = m_set | {cs.opposite[c] for c in m_set}
    free = []
    for c in range(len(cs.classes)):
        if c in blocked:
            continue
        o = cs.opposite[c]
        if o is None or c < o:
            free.append((c, o))
    return _assemble(hyps, forced_true, cs, cs.m_classes, free)


def max_pair_ep(base):
    """Maximum-distance explanation pair of an EP instance, or None.

    A positive clause whose variables all fall into one equality class
    forces that class true, so its manifestations need no hypothesis.
    """
    _require(base.kb, "ep", "EP")
    prop = _propagated(base)
    if prop is None:
        return None
    residual, hyps, mans, forced_true = prop
    eqs = Formula(tuple(a for a in residual.atoms if lattice._is_eq(a.relation)),
                  residual.vars)
    cs = build_clusters(eqs, mans)
    forced_classes = set()
    for a in residual.atoms:
        if a.relation.kind in (Kind.CLAUSE, Kind.UNIT):
            owners = {cs.class_of[v] for v in a.args}
            if len(owners) == 1:
                forced_classes |= owners
    need = [c for c in cs.m_classes if c not in forced_classes]
    hset = set(hyps)
    if any(not hset.intersection(cs.classes[c]) for c in need):
        return None
    free = [(c, None) for c in range(len(cs.classes)) if c not in need]
    return _assemble(hyps, forced_true, cs, need, free)


def _decide(di, builder):
    w = builder(di.base)
    if w is None:
        return False, None
    return w.d >= di.k, w


def div_affine2(di: DivInstance):
    return _decide(di, max_pair_affine2)


def div_ep(di: DivInstance):
    return _decide(di, max_pair_ep)

"""Polynomial IsFacet and relevance algorithms for the tractable fragments.

Every entry point checks its fragment syntactically and raises WrongFragment
on a mismatch; falling back to the oracle is the caller's business.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels, lattice
from .core import AbductionInstance, FacetInstance, Formula, Kind
from .engines import unit_propagate
from .errors import UnsatStructure, WrongFragment


class Fragment(enum.Enum):
    IMP = "imp"
    DUALHORN = "dualhorn"
    AFFINE2 = "affine2"
    EN = "en"


def _require(kb: Formula, shape: str, what: str):
    test = lattice.SHAPES[shape]
    for a in kb.atoms:
        if not test(a.relation):
            raise WrongFragment(f"{what} algorithm cannot handle atom {a}")


# --- unit preprocessing --------------------------------------------------

@dataclass(frozen=True)
class Preprocessed:
    instance: FacetInstance | None
    forced: dict = field(default_factory=dict)
    answer: bool | None = None

    @property
    def status(self):
        return "RESOLVED" if self.instance is None else "REDUCED"

    @property
    def resolved(self):
        return self.instance is None


def preprocess_units(fi: FacetInstance) -> Preprocessed:
    """Condition on all unit-propagated values.

    Resolves to False when the KB is inconsistent, a manifestation is forced
    false, or the query itself is forced either way.
    """
    pr = unit_propagate(fi.kb)
    if not pr.ok:
        return Preprocessed(None, pr.forced, False)
    forced = pr.forced
    if any(forced.get(m) == 0 for m in fi.mans) or fi.query in forced:
        return Preprocessed(None, forced, False)
    base = AbductionInstance(pr.residual,
                             tuple(h for h in fi.hyps if h not in forced),
                             tuple(m for m in fi.mans if m not in forced))
    return Preprocessed(FacetInstance(base, fi.query), forced)


# --- implication / dualHorn ----------------------------------------------

@dataclass(frozen=True)
class ImpAnalysis:
    """h(m) per manifestation, and M_x for the query.

    ``free`` lists manifestations the KB entails on its own; they are already
    explained by the empty set and take no part in the search.
    """

    h_map: dict
    m_x: frozenset
    free: frozenset = frozenset()


def _falsity_arrays(kb: Formula):
    """dualHorn clauses as (positive literals, at most one negative literal)."""
    idx = kb.index
    clauses = []
    for a in kb.atoms:
        rel = a.relation
        if rel.kind in (Kind.CLAUSE, Kind.UNIT):
            pos = {idx[v] for v, s in a.literals() if s}
            negs = {idx[v] for v, s in a.literals() if not s}
            if pos & negs:
                continue
            clauses.append((sorted(pos), negs.pop() if negs else -1))
        elif rel.kind is Kind.EQUALITY or rel.kind is Kind.XOR:
            p, q = (idx[v] for v in a.args)
            if p != q:
                clauses.append(([q], p))
                clauses.append(([p], q))
        # the nullary TRUE relation contributes nothing
    ptr = np.zeros(len(clauses) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(c[0]) for c in clauses])
    pos = np.array([v for c in clauses for v in c[0]], dtype=np.int64)
    neg = np.array([c[1] for c in clauses], dtype=np.int64)
    n = len(kb.vars)
    owner = np.repeat(np.arange(len(clauses), dtype=np.int64), np.diff(ptr))
    order = np.argsort(pos, kind="stable")
    occ = owner[order]
    occ_ptr = np.zeros(n + 1, dtype=np.int64)
    occ_ptr[1:] = np.cumsum(np.bincount(pos, minlength=n))
    return n, ptr, pos, neg, occ_ptr, occ


def _analyse(inst: AbductionInstance, x: str):
    """h-matrix over (non-free manifestations) x (hypotheses), plus ImpAnalysis.

    For a unit-free dualHorn KB the models of KB and (not m) are closed under
    OR, so they have a greatest model; E entails m iff E meets that model's
    zero set. The zero set is the falsity closure started at m.
    """
    kb = inst.kb
    n, ptr, pos, neg, occ_ptr, occ = _falsity_arrays(kb)
    mans = list(inst.mans)
    starts = np.array([kb.index[m] for m in mans], dtype=np.int64)
    z, conflict = kernels.falsity_closure(n, ptr, pos, neg, occ_ptr, occ, starts)
    hyp_idx = np.array([kb.index[h] for h in inst.hyps], dtype=np.int64)
    live = ~conflict.astype(bool)
    hmat = z[live][:, hyp_idx].astype(bool) if hyp_idx.size else np.zeros(
        (int(live.sum()), 0), dtype=bool)
    live_mans = [m for m, ok in zip(mans, live) if ok]
    free = frozenset(m for m, ok in zip(mans, live) if not ok)
    hyps = inst.hyps
    xi = hyps.index(x)
    h_map = {m: frozenset(hyps[j] for j in np.flatnonzero(row))
             for m, row in zip(live_mans, hmat)}
    m_x = frozenset(m for m, row in zip(live_mans, hmat) if row[xi])
    return hmat, xi, ImpAnalysis(h_map, m_x, free)


def _entails_all(hmat, rows, chosen):
    """KB and chosen |= every manifestation in ``rows``."""
    return bool((hmat[rows] & chosen).any(axis=1).all())


def _imp_search(inst: AbductionInstance, x: str, dispensability=True) -> bool:
    hmat, xi, _ = _analyse(inst, x)
    in_mx = hmat[:, xi]
    rest = ~in_mx
    candidate = None
    for i in np.flatnonzero(in_mx):
        others = ~hmat[i]  # H minus h(m)
        if _entails_all(hmat, rest, others):
            candidate = others  # candidate found
    if candidate is None:
        return False  # x can not be made relevant
    if not dispensability:
        return True
    without_x = np.ones(hmat.shape[1], dtype=bool)
    without_x[xi] = False
    # is there an explanation without x?
    return _entails_all(hmat, np.ones(hmat.shape[0], dtype=bool), without_x)


def imp_analysis(fi: FacetInstance) -> ImpAnalysis:
    return _analyse(fi.base, fi.query)[2]


def isfacet_imp(fi: FacetInstance) -> bool:
    _require(fi.kb, "imp", "implication")
    return _imp_search(fi.base, fi.query)


def isfacet_dualhorn(fi: FacetInstance, relevance=False) -> bool:
    _require(fi.kb, "dualhorn", "dualHorn")
    pre = preprocess_units(fi)
    if pre.resolved:
        return pre.answer
    return _imp_search(pre.instance.base, fi.query, dispensability=not relevance)


# --- 2-affine / EN via equivalence classes -------------------------------

@dataclass(frozen=True)
class ClusterStructure:
    """Equivalence classes under (dis)equalities.

    ``opposite[c]`` is the class forced to the contrary value of class ``c``,
    or None. ``m_classes`` are the classes that contain a manifestation and
    ``partners`` their opposite classes, aligned by position.
    """

    classes: tuple
    class_of: dict
    opposite: tuple
    m_classes: tuple = ()
    partners: tuple = ()

    @property
    def pairing(self):
        return tuple((c, d) for c, d in enumerate(self.opposite) if d is not None and c < d)


def build_clusters(f: Formula, manifestations=()) -> ClusterStructure:
    parent = {v: v for v in f.vars}
    parity = {v: 0 for v in f.vars}  # parity relative to parent

    def find(v):
        path = []
        while parent[v] != v:
            path.append(v)
            v = parent[v]
        root, acc = v, 0
        for u in reversed(path):
            acc ^= parity[u]
            parity[u] = acc
            parent[u] = root
        return root

    for a in f.atoms:
        rel = a.relation
        if rel.kind is Kind.EQUALITY:
            b = 0
        elif rel.kind is Kind.XOR and rel.arity == 2:
            b = rel.parity
        elif rel.arity == 0 and rel.kind is Kind.TABLE:
            continue
        elif rel.arity == 0:
            raise UnsatStructure("the formula contains the false relation")
        else:
            raise WrongFragment(f"cluster analysis cannot handle atom {a}")
        p, q = a.args
        rp, rq = find(p), find(q)
        if rp == rq:
            if parity[p] ^ parity[q] != b:
                raise UnsatStructure(f"atom {a} contradicts the equalities before it")
            continue
        parent[rq] = rp
        parity[rq] = parity[p] ^ parity[q] ^ b
    # class = (root, side); number them by first occurrence
    ids, members, side_of = {}, [], {}
    for v in f.vars:
        r = find(v)
        key = (r, parity[v])
        if key not in ids:
            ids[key] = len(members)
            members.append([])
        members[ids[key]].append(v)
        side_of[v] = ids[key]
    opposite = [None] * len(members)
    for (r, s), c in ids.items():
        opposite[c] = ids.get((r, 1 - s))
    m_classes = tuple(dict.fromkeys(side_of[m] for m in manifestations))
    return ClusterStructure(tuple(tuple(c) for c in members), side_of, tuple(opposite),
                            m_classes, tuple(opposite[c] for c in m_classes))


def _class_query(fi: FacetInstance, cs: ClusterStructure, relevance: bool) -> bool:
    hyps = set(fi.hyps)
    m_set = set(cs.m_classes)
    if any(cs.opposite[c] in m_set for c in m_set):
        return False  # two manifestation classes must take contrary values
    for c in cs.m_classes:
        if not hyps.intersection(cs.classes[c]):
            return False  # some manifestation cannot be explained
    cx = cs.class_of[fi.query]
    if cx not in m_set:
        return False
    if relevance:
        return True
    return any(h in hyps and h != fi.query for h in cs.classes[cx])


def isfacet_affine2(fi: FacetInstance, relevance=False) -> bool:
    _require(fi.kb, "affine2", "2-affine")
    pre = preprocess_units(fi)
    if pre.resolved:
        return pre.answer
    red = pre.instance
    try:
        cs = build_clusters(red.kb, red.mans)
    except UnsatStructure:
        return False
    return _class_query(red, cs, relevance)


def isfacet_en(fi: FacetInstance, relevance=False) -> bool:
    _require(fi.kb, "en", "essentially negative")
    pre = preprocess_units(fi)
    if pre.resolved:
        return pre.answer
    red = pre.instance
    eqs = Formula(tuple(a for a in red.kb.atoms if lattice._is_eq(a.relation)), red.kb.vars)
    cs = build_clusters(eqs, red.mans)
    hyps = set(red.hyps)
    for c in cs.m_classes:
        if not hyps.intersection(cs.classes[c]):
            return False
    # all manifestation classes true, everything else false
    true_vars = {v for c in cs.m_classes for v in cs.classes[c]}
    for a in red.kb.atoms:
        if not lattice._is_eq(a.relation) and all(v in true_vars for v in a.args):
            return False
    return _class_query(red, cs, relevance)


_ALGORITHMS = {
    Fragment.IMP: lambda fi, rel: (_require(fi.kb, "imp", "implication"),
                                   _imp_search(fi.base, fi.query, not rel))[1],
    Fragment.DUALHORN: lambda fi, rel: isfacet_dualhorn(fi, rel),
    Fragment.AFFINE2: lambda fi, rel: isfacet_affine2(fi, rel),
    Fragment.EN: lambda fi, rel: isfacet_en(fi, rel),
}


def relevance_poly(fi: FacetInstance, fragment) -> bool:
    """Is the query in some subset-minimal explanation?"""
    return _ALGORITHMS[Fragment(fragment)](fi, True)


def isfacet_poly(fi: FacetInstance, fragment) -> bool:
    return _ALGORITHMS[Fragment(fragment)](fi, False)


def licensed_fragment(kb: Formula):
    """First fragment whose algorithm applies to ``kb`` syntactically, or None."""
    for frag, shape in ((Fragment.IMP, "imp"), (Fragment.EN, "en"),
                        (Fragment.AFFINE2, "affine2"), (Fragment.DUALHORN, "dualhorn")):
        if lattice.fits(kb, shape):
            return frag
    return None

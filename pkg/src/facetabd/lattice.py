"""Constraint-language analysis.

Semantic flags come from polymorphism closure checks; syntactic tags come from
relation kinds and license the polynomial algorithms. ``verdict`` encodes the
complexity classification for the cells that are backed by a proven result
and answers UNKNOWN everywhere else.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (EQUALITY, FALSE, NEG_UNIT, POS_UNIT, Formula, Kind, Relation,
                   clause_rel, table_rel, xor_rel)


class PolyOp(enum.Enum):
    CONST0 = "const0"
    CONST1 = "const1"
    NOT = "not"
    AND2 = "and2"
    OR2 = "or2"
    MAJ3 = "maj3"
    XOR3 = "xor3"

    @property
    def arity(self) -> int:
        return _OP_ARITY[self.value]

    def apply(self, cols):
        """Coordinate-wise application to ``arity`` stacked uint8 arrays."""
        if self is PolyOp.NOT:
            return 1 - cols[0]
        if self is PolyOp.AND2:
            return cols[0] & cols[1]
        if self is PolyOp.OR2:
            return cols[0] | cols[1]
        if self is PolyOp.MAJ3:
            a, b, c = cols
            return (a & b) | (a & c) | (b & c)
        if self is PolyOp.XOR3:
            return cols[0] ^ cols[1] ^ cols[2]
        raise ValueError(self)


_OP_ARITY = {"const0": 0, "const1": 0, "not": 1, "and2": 2, "or2": 2,
              "maj3": 3, "xor3": 3}

# Above this many tuple combinations, syntactic relations use their
# closed-form answer instead of enumeration.
EXHAUSTIVE_LIMIT = 1 << 22


def _analytic(rel: Relation, op: PolyOp):
    if rel.kind in (Kind.CLAUSE, Kind.UNIT) and rel.arity >= 2:
        pos = sum(rel.signs)
        neg = rel.arity - pos
        return {PolyOp.CONST0: neg >= 1, PolyOp.CONST1: pos >= 1, PolyOp.NOT: False,
                PolyOp.AND2: pos <= 1, PolyOp.OR2: neg <= 1, PolyOp.MAJ3: rel.arity <= 2,
                PolyOp.XOR3: False}[op]
    if rel.kind is Kind.XOR and rel.arity >= 3:
        r, b = rel.arity, rel.parity
        return {PolyOp.CONST0: b == 0, PolyOp.CONST1: r % 2 == b, PolyOp.NOT: r % 2 == 0,
                PolyOp.AND2: False, PolyOp.OR2: False, PolyOp.MAJ3: False,
                PolyOp.XOR3: True}[op]
    return None


@lru_cache(maxsize=4096)
def _closed(rel: Relation, op: PolyOp) -> bool:
    if op is PolyOp.CONST0:
        return (0,) * rel.arity in rel.tuples if rel.arity or rel.tuples else False
    if op is PolyOp.CONST1:
        return (1,) * rel.arity in rel.tuples if rel.arity or rel.tuples else False
    n_tuples = (1 << rel.arity) - 1 if rel.kind is Kind.CLAUSE else None
    if n_tuples is not None and n_tuples ** op.arity > EXHAUSTIVE_LIMIT:
        return _analytic(rel, op)
    if rel.kind is Kind.XOR and (1 << (rel.arity - 1)) ** op.arity > EXHAUSTIVE_LIMIT:
        return _analytic(rel, op)
    tuples = rel.tuples
    if not tuples:
        return True
    arr = np.array(sorted(tuples), dtype=np.uint8).reshape(len(tuples), rel.arity)
    weights = (1 << np.arange(rel.arity - 1, -1, -1)).astype(np.int64)
    members = np.zeros(1 << rel.arity, dtype=bool)
    members[arr.astype(np.int64) @ weights] = True
    t = len(tuples)
    grids = np.meshgrid(*[np.arange(t)] * op.arity, indexing="ij")
    cols = [arr[g.ravel()] for g in grids]
    out = op.apply(cols).astype(np.int64) @ weights
    return bool(members[out].all())


def closed_under(rels, op: PolyOp) -> bool:
    """True iff every relation in ``rels`` is invariant under ``op``."""
    if isinstance(rels, Relation):
        rels = (rels,)
    return all(_closed(r, op) for r in rels)


# --- syntactic shape of single relations -------------------------------

def _counts(rel):
    pos = sum(rel.signs)
    return pos, rel.arity - pos


def _is_clause(rel):
    return rel.kind in (Kind.CLAUSE, Kind.UNIT)


def _is_eq(rel):
    return rel.kind is Kind.EQUALITY or (rel.kind is Kind.XOR and rel.arity == 2
                                         and rel.parity == 0)


def _trivial(rel):
    return rel.arity == 0


def is_implication(rel):
    return rel.kind is Kind.CLAUSE and rel.arity == 2 and _counts(rel) == (1, 1)


def is_horn(rel):
    return _trivial(rel) or _is_eq(rel) or (_is_clause(rel) and _counts(rel)[0] <= 1)


def is_dualhorn(rel):
    return _trivial(rel) or _is_eq(rel) or (_is_clause(rel) and _counts(rel)[1] <= 1)


def is_2cnf(rel):
    return (_trivial(rel) or rel.kind is Kind.EQUALITY or (_is_clause(rel) and rel.arity <= 2)
            or (rel.kind is Kind.XOR and rel.arity <= 2))


def is_xor(rel):
    return _trivial(rel) or rel.kind in (Kind.XOR, Kind.EQUALITY, Kind.UNIT)


def is_2affine(rel):
    return (_trivial(rel) or rel.kind in (Kind.UNIT, Kind.EQUALITY)
            or (rel.kind is Kind.XOR and rel.arity == 2))


def is_en(rel):
    return (rel is FALSE or rel == POS_UNIT or _is_eq(rel)
            or (_is_clause(rel) and _counts(rel)[0] == 0))


def is_ep(rel):
    return (rel is FALSE or rel == NEG_UNIT or _is_eq(rel)
            or (_is_clause(rel) and _counts(rel)[1] == 0))


SHAPES = {
    "imp": is_implication,
    "horn": is_horn,
    "dualhorn": is_dualhorn,
    "2cnf": is_2cnf,
    "xor": is_xor,
    "affine2": is_2affine,
    "en": is_en,
    "ep": is_ep,
}


def fits(f, shape: str) -> bool:
    """Does every atom of ``f`` (a Formula or relation set) have the given shape?"""
    rels = f.relations() if isinstance(f, Formula) else f
    test = SHAPES[shape]
    return all(test(r) for r in rels)


@lru_cache(maxsize=4096)
def in_ihsb_minus(rel: Relation) -> bool:
    """Is ``rel`` a conjunction of (x), (x -> y) and negative clauses?

    A tuple satisfies every implied negative clause iff its 1-set is
    contained in the 1-set of some tuple of the relation, so the clausal hull
    can be enumerated directly.
    """
    if _is_clause(rel) and rel.arity > 12:
        pos, neg = _counts(rel)
        return pos == 0 or (pos == 1 and neg <= 1)
    r = rel.arity
    tuples = rel.tuples
    if not tuples:
        return True
    units = [i for i in range(r) if all(t[i] for t in tuples)]
    imps = [(i, j) for i in range(r) for j in range(r)
            if i != j and not any(t[i] and not t[j] for t in tuples)]
    masks = [sum(b << i for i, b in enumerate(t)) for t in tuples]
    for t in itertools.product((0, 1), repeat=r):
        if t in tuples:
            continue
        if any(not t[i] for i in units) or any(t[i] and not t[j] for i, j in imps):
            continue
        m = sum(b << i for i, b in enumerate(t))
        if any(m & w == m for w in masks):
            return False
    return True


@dataclass(frozen=True)
class LanguageProfile:
    zero_valid: bool
    one_valid: bool
    complementive: bool
    horn: bool
    dualhorn: bool
    bijunctive: bool
    affine: bool
    all_implication: bool
    en_form: bool
    ep_form: bool
    affine2_form: bool
    horn_form: bool
    dualhorn_form: bool
    twocnf_form: bool
    xor_form: bool
    has_pos_unit: bool
    has_neg_unit: bool
    max_arity: int
    # Horn language whose co-clone contains x & y -> z (not IHS-B-)
    ie_inside: bool

    @property
    def schaefer(self):
        return self.horn or self.dualhorn or self.bijunctive or self.affine

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def profile(rels) -> LanguageProfile:
    if isinstance(rels, Formula):
        rels = rels.relations()
    rels = frozenset(rels)
    shape = {k: all(t(r) for r in rels) for k, t in SHAPES.items()}
    horn = closed_under(rels, PolyOp.AND2)
    return LanguageProfile(
        zero_valid=closed_under(rels, PolyOp.CONST0),
        one_valid=closed_under(rels, PolyOp.CONST1),
        complementive=closed_under(rels, PolyOp.NOT),
        horn=horn,
        dualhorn=closed_under(rels, PolyOp.OR2),
        bijunctive=closed_under(rels, PolyOp.MAJ3),
        affine=closed_under(rels, PolyOp.XOR3),
        all_implication=shape["imp"],
        en_form=shape["en"],
        ep_form=shape["ep"],
        affine2_form=shape["affine2"],
        horn_form=shape["horn"],
        dualhorn_form=shape["dualhorn"],
        twocnf_form=shape["2cnf"],
        xor_form=shape["xor"],
        has_pos_unit=POS_UNIT in rels,
        has_neg_unit=NEG_UNIT in rels,
        max_arity=max((r.arity for r in rels), default=0),
        ie_inside=horn and not all(in_ihsb_minus(r) for r in rels),
    )


# --- classification ----------------------------------------------------

class Problem(enum.Enum):
    ABD = "abd"
    ISFACET = "isfacet"
    RELEVANCE = "relevance"
    DIVABD = "divabd"


class Verdict(enum.Enum):
    P = "P"
    NP_COMPLETE = "NP-complete"
    SIGMA2P_COMPLETE = "Sigma2P-complete"
    OPEN_PAPER = "open"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ComplexityVerdict:
    problem: Problem
    verdict: Verdict
    justification: tuple = ()
    note: str = ""

    def as_dict(self):
        return {"problem": self.problem.value, "verdict": self.verdict.value,
                "justification": list(self.justification), "note": self.note}


# Short identifiers of the results a verdict rests on.
J = {
    "en": "facet-essentially-negative-poly",
    "units": "unit-clause-elimination-dualhorn",
    "dualhorn": "facet-dualhorn-poly",
    "affine2": "facet-2affine-poly",
    "imp": "facet-implication-poly",
    "efpp": "efpp-closure-invariance",
    "eq": "equality-expressible-outside-en-ep",
    "abd2facet": "abd-reduces-to-facet",
    "in_np": "facet-in-np-when-sat-gamma-plus-in-p",
    "ie": "facet-np-hard-above-ie",
    "in": "facet-sigma2p-hard-above-in",
    "open": "open-case-1valid-affine",
    "relevance": "relevance-follows-facet-classification",
    "div_poly": "div-2affine-and-ep-poly",
    "div_imp": "div-np-hard-for-implication",
    "verify": "explanation-verification-poly",
    "div_in": "div-sigma2p-hard-above-in",
    "abd_imp": "abd-implication-and-dualhorn-poly",
    "abd_enep": "abd-en-ep-poly",
    "abd_horn": "abd-horn-np-complete",
    "abd_br": "abd-all-relations-sigma2p-complete",
}

OPEN_NOTE = ("1-valid affine languages (even-length equations, optionally with positive "
             "units) are unresolved; this cell is read as the even-length one")


def _facet_verdict(p: LanguageProfile, problem: Problem) -> ComplexityVerdict:
    reasons = []
    if p.en_form:
        reasons.append(J["en"])
    if p.dualhorn:
        reasons += [J["units"], J["dualhorn"]]
    if p.affine2_form or (p.affine and p.bijunctive):
        reasons.append(J["affine2"])
    if p.all_implication:
        reasons.append(J["imp"])
    eq = [] if (p.en_form or p.ep_form) else [J["eq"]]
    if reasons:
        return ComplexityVerdict(problem, Verdict.P, tuple(reasons + [J["efpp"]]))
    if p.affine and p.one_valid:
        return ComplexityVerdict(problem, Verdict.OPEN_PAPER, (J["open"], J["in_np"]),
                                 OPEN_NOTE)
    if p.ie_inside:
        return ComplexityVerdict(problem, Verdict.NP_COMPLETE,
                                 (J["ie"], J["in_np"], J["efpp"], *eq))
    if p.bijunctive and not (p.horn or p.dualhorn or p.affine):
        return ComplexityVerdict(problem, Verdict.NP_COMPLETE,
                                 (J["abd2facet"], J["in_np"], J["efpp"], *eq))
    if not p.schaefer:
        return ComplexityVerdict(problem, Verdict.SIGMA2P_COMPLETE, (J["in"], *eq))
    return ComplexityVerdict(problem, Verdict.UNKNOWN)


def verdict(p: LanguageProfile, problem=Problem.ISFACET) -> ComplexityVerdict:
    problem = Problem(problem)
    if problem is Problem.ISFACET:
        return _facet_verdict(p, problem)
    if problem is Problem.RELEVANCE:
        v = _facet_verdict(p, problem)
        if v.verdict is Verdict.UNKNOWN:
            return v
        return ComplexityVerdict(problem, v.verdict, v.justification + (J["relevance"],),
                                 v.note)
    if problem is Problem.DIVABD:
        if p.affine2_form or p.ep_form or (p.affine and p.bijunctive):
            return ComplexityVerdict(problem, Verdict.P, (J["div_poly"], J["efpp"]))
        if p.all_implication:
            return ComplexityVerdict(problem, Verdict.NP_COMPLETE, (J["div_imp"], J["verify"]),
                                     "hardness shown for implication; membership via "
                                     "polynomial explanation verification")
        if not p.schaefer:
            return ComplexityVerdict(problem, Verdict.SIGMA2P_COMPLETE, (J["div_in"], J["eq"]))
        return ComplexityVerdict(problem, Verdict.UNKNOWN)
    # ABD: only cells stated outright
    if p.dualhorn:
        return ComplexityVerdict(problem, Verdict.P, (J["abd_imp"],))
    if p.en_form or p.ep_form:
        return ComplexityVerdict(problem, Verdict.P, (J["abd_enep"],))
    if p.ie_inside and not p.zero_valid and not p.one_valid:
        return ComplexityVerdict(problem, Verdict.NP_COMPLETE, (J["abd_horn"],))
    if not p.schaefer and not (p.zero_valid or p.one_valid or p.complementive):
        return ComplexityVerdict(problem, Verdict.SIGMA2P_COMPLETE, (J["abd_br"],))
    return ComplexityVerdict(problem, Verdict.UNKNOWN)


def classify(f, problems=tuple(Problem)) -> list:
    p = profile(f)
    return [verdict(p, pr) for pr in problems]


# --- base languages of the co-clone table --------------------------------

def _table(name, arity, bits):
    return table_rel(name, arity, [tuple(int(c) for c in b) for b in bits])


_all3 = ["".join(t) for t in itertools.product("01", repeat=3)]
ONE_IN_THREE = _table("one_in_three", 3, ["001", "010", "100"])
NAE = _table("nae", 3, [b for b in _all3 if b not in ("000", "111")])
DUP = _table("dup", 3, [b for b in _all3 if b not in ("101", "010")])
OR_XOR = _table("or_xor", 3, [b for b in _all3 if b[0] == "1" or b[1] != b[2]])
EVEN4 = xor_rel(4, 0)
IMP = clause_rel((False, True))
NEQ = xor_rel(2, 1)
HORN3 = clause_rel((False, False, True))
DUALHORN3 = clause_rel((True, True, False))
NEG2 = clause_rel((False, False))
POS2 = clause_rel((True, True))

BASE_LANGUAGES = {
    "BR": [ONE_IN_THREE],
    "II1": [OR_XOR],
    "II0": [DUP, IMP],
    "II": [EVEN4, IMP],
    "IN2": [NAE],
    "IN": [DUP],
    "IE2": [HORN3, POS_UNIT, NEG_UNIT],
    "IE1": [HORN3, POS_UNIT],
    "IE0": [HORN3, NEG_UNIT],
    "IE": [HORN3],
    "IV2": [DUALHORN3, POS_UNIT, NEG_UNIT],
    "IV1": [DUALHORN3, POS_UNIT],
    "IV0": [DUALHORN3, NEG_UNIT],
    "IV": [DUALHORN3],
    "IL2": [EVEN4, POS_UNIT, NEG_UNIT],
    "IL1": [EVEN4, POS_UNIT],
    "IL0": [EVEN4, NEG_UNIT],
    "IL3": [EVEN4, NEQ],
    "IL": [EVEN4],
    "ID2": [NEQ, IMP],
    "ID1": [NEQ, POS_UNIT, NEG_UNIT],
    "ID": [NEQ],
    "IM2": [IMP, POS_UNIT, NEG_UNIT],
    "IM1": [IMP, POS_UNIT],
    "IM0": [IMP, NEG_UNIT],
    "IM": [IMP],
    "IS10": [POS_UNIT, IMP, NEG2, clause_rel((False,) * 3)],
    "IS11": [IMP, NEG2, clause_rel((False,) * 3)],
    "IS12": [POS_UNIT, NEG2, clause_rel((False,) * 3), EQUALITY],
    "IS1": [NEG2, clause_rel((False,) * 3), EQUALITY],
    "IS00": [NEG_UNIT, IMP, POS2, clause_rel((True,) * 3)],
    "IS01": [IMP, POS2, clause_rel((True,) * 3)],
    "IS02": [NEG_UNIT, POS2, clause_rel((True,) * 3), EQUALITY],
    "IS0": [POS2, clause_rel((True,) * 3), EQUALITY],
    "IR2": [POS_UNIT, NEG_UNIT, EQUALITY],
    "IR1": [POS_UNIT, EQUALITY],
    "IR0": [NEG_UNIT, EQUALITY],
    "IBF": [EQUALITY],
}

# Cells of the facet classification that no encoded result decides.
UNENCODED = frozenset({"IL2", "IL0", "IL3", "IS10", "IS11"})

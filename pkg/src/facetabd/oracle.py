"""Exhaustive ground truth over the explanation space.

All models of the knowledge base are enumerated once. For a model, its
*hypothesis mask* records which hypotheses it makes true. A set E of
hypotheses is consistent iff some model's mask contains E, and E entails M iff
no model with a mask containing E falsifies a manifestation. Both are
superset-closure (zeta) transforms over the 2^|H| subset lattice.

Subsets are encoded as integers with bit j standing for ``hyps[j]``; the
public functions return frozensets in lexicographic order of their sorted
hypothesis positions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .core import AbductionInstance, FacetInstance
from .engines import compile_formula, verify_explanation
from .errors import BudgetExceeded

MAX_HYPS = 20
MAX_VARS = 22
PAIR_BUDGET = 1 << 26

NO_EXPLANATION = None


def _down(arr, h):
    """In place: arr[S] |= arr[T] for every T superset of S."""
    for j in range(h):
        view = arr.reshape(-1, 2, 1 << j)
        view[:, 0, :] |= view[:, 1, :]
    return arr


def _up(arr, h):
    """In place: arr[S] |= arr[T] for every T subset of S."""
    for j in range(h):
        view = arr.reshape(-1, 2, 1 << j)
        view[:, 1, :] |= view[:, 0, :]
    return arr


def configure(max_hyps=None, max_vars=None):
    """Change the oracle size limits; returns the previous (max_hyps, max_vars)."""
    global MAX_HYPS, MAX_VARS
    prev = MAX_HYPS, MAX_VARS
    if max_hyps is not None:
        MAX_HYPS = int(max_hyps)
    if max_vars is not None:
        MAX_VARS = int(max_vars)
    return prev


def _check_budget(inst, n_vars, max_hyps=None, max_vars=None):
    max_hyps = MAX_HYPS if max_hyps is None else max_hyps
    max_vars = MAX_VARS if max_vars is None else max_vars
    if len(inst.hyps) > max_hyps:
        raise BudgetExceeded(f"|H| = {len(inst.hyps)} exceeds the oracle limit {max_hyps}")
    if n_vars > max_vars:
        raise BudgetExceeded(f"{n_vars} variables exceed the oracle limit {max_vars}")


def _tables(inst: AbductionInstance):
    return _tables_cached(inst, MAX_HYPS, MAX_VARS)


@lru_cache(maxsize=128)
def _tables_cached(inst: AbductionInstance, max_hyps, max_vars):
    """(explanation table, minimal table) as bool arrays over subset masks."""
    kb = inst.kb
    keep = set(kb.atom_vars) | set(inst.hyps) | set(inst.mans)
    names = tuple(v for v in kb.vars if v in keep)
    _check_budget(inst, len(names), max_hyps, max_vars)
    comp = compile_formula(kb, names)
    n = comp.n
    models = np.flatnonzero(kernels.model_mask(*comp.arrays())).astype(np.int64)
    pos = {v: i for i, v in enumerate(names)}
    h = len(inst.hyps)
    hmask = np.zeros(models.shape[0], dtype=np.int64)
    for j, v in enumerate(inst.hyps):
        hmask |= ((models >> (n - 1 - pos[v])) & 1) << j
    mok = np.ones(models.shape[0], dtype=bool)
    for m in inst.mans:
        mok &= ((models >> (n - 1 - pos[m])) & 1).astype(bool)
    size = 1 << h
    consistent = np.zeros(size, dtype=bool)
    consistent[hmask] = True
    bad = np.zeros(size, dtype=bool)
    bad[hmask[~mok]] = True
    expl = _down(consistent, h) & ~_down(bad, h)
    below = _up(expl.copy(), h)
    strict = np.zeros(size, dtype=bool)
    for j in range(h):
        sv = strict.reshape(-1, 2, 1 << j)
        sv[:, 1, :] |= below.reshape(-1, 2, 1 << j)[:, 0, :]
    minimal = expl & ~strict
    expl.setflags(write=False)
    minimal.setflags(write=False)
    return expl, minimal


def _order_key(mask):
    bits = []
    j = 0
    while mask:
        if mask & 1:
            bits.append(j)
        mask >>= 1
        j += 1
    return tuple(bits)


def _ordered_masks(table):
    return sorted((int(m) for m in np.flatnonzero(table)), key=_order_key)


def _as_set(inst, mask):
    return frozenset(v for j, v in enumerate(inst.hyps) if mask >> j & 1)


def explanation_masks(inst: AbductionInstance) -> list:
    return _ordered_masks(_tables(inst)[0])


def all_explanations(inst: AbductionInstance) -> list:
    """Every explanation, as frozensets in lexicographic subset order."""
    inst = _base(inst)
    return [_as_set(inst, m) for m in explanation_masks(inst)]


def minimal_explanations(inst: AbductionInstance) -> list:
    inst = _base(inst)
    return [_as_set(inst, m) for m in _ordered_masks(_tables(inst)[1])]


def all_explanations_slow(inst: AbductionInstance, budget=None) -> list:
    """Reference route: one verify_explanation call per subset of H."""
    inst = _base(inst)
    _check_budget(inst, 0)
    h = len(inst.hyps)
    masks = sorted(range(1 << h), key=_order_key)
    return [_as_set(inst, m) for m in masks
            if verify_explanation(inst, _as_set(inst, m), budget=budget)]


@dataclass(frozen=True)
class ExplanationReport:
    explanations: tuple
    minimal: tuple
    relevant: frozenset
    necessary: frozenset
    facets: frozenset

    def as_dict(self, order=None):
        def ordered(s):
            return sorted(s, key=(order or []).index) if order else sorted(s)
        return {
            "explanations": [ordered(e) for e in self.explanations],
            "minimal": [ordered(e) for e in self.minimal],
            "relevant": ordered(self.relevant),
            "necessary": ordered(self.necessary),
            "facets": ordered(self.facets),
        }


def _base(inst):
    return inst.base if isinstance(inst, FacetInstance) else inst


def report(inst: AbductionInstance) -> ExplanationReport:
    inst = _base(inst)
    expl = all_explanations(inst)
    mins = minimal_explanations(inst)
    rel = frozenset().union(*mins) if mins else frozenset()
    # no minimal explanation: nothing is necessary
    nec = frozenset.intersection(*mins) if mins else frozenset()
    return ExplanationReport(tuple(expl), tuple(mins), rel, nec, rel - nec)


def is_facet_oracle(fi: FacetInstance) -> bool:
    return fi.query in report(fi.base).facets


def is_relevant_oracle(fi: FacetInstance) -> bool:
    return fi.query in report(fi.base).relevant


def max_diverse_pair(inst: AbductionInstance, minimal_only=False, pair_budget=PAIR_BUDGET):
    """(d, E1, E2) maximizing |E1 ^ E2| over explanation pairs, or NO_EXPLANATION.

    Ties go to the first pair in lexicographic order of (E1, E2).
    """
    inst = _base(inst)
    table = _tables(inst)[1 if minimal_only else 0]
    masks = _ordered_masks(table)
    if not masks:
        return NO_EXPLANATION
    k = len(masks)
    if k * k > pair_budget:
        raise BudgetExceeded(f"{k} explanations give {k * k} pairs, over budget {pair_budget}")
    arr = np.array(masks, dtype=np.int64)
    best, bi, bj = -1, 0, 0
    rows = max(1, (1 << 22) // k)
    for start in range(0, k, rows):
        block = np.bitwise_count(arr[start:start + rows, None] ^ arr[None, :])
        flat = int(np.argmax(block))
        d = int(block.flat[flat])
        if d > best:
            best, bi, bj = d, start + flat // k, flat % k
    return best, _as_set(inst, masks[bi]), _as_set(inst, masks[bj])

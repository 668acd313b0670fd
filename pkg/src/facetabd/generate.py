"""Seeded random instances for each syntactic fragment."""
from __future__ import annotations

import random

from .core import AbductionInstance, Atom, Formula, clause_rel, eq, xor_rel
from .syntax import render

FRAGMENTS = ("imp", "dualhorn", "horn", "affine2", "en", "ep", "pos2cnf")


def _clause(rng, names, n_pos, n_neg):
    picked = rng.sample(names, n_pos + n_neg)
    signs = [True] * n_pos + [False] * n_neg
    order = list(range(len(picked)))
    rng.shuffle(order)
    return Atom(clause_rel(signs[i] for i in order), tuple(picked[i] for i in order))


def _atom(fragment, rng, names, unit_rate, planted):
    n = len(names)
    if n >= 2 and rng.random() >= unit_rate:
        unit = False
    else:
        unit = True
    if fragment == "imp":
        return _clause(rng, names, 1, 1)
    if fragment == "pos2cnf":
        return _clause(rng, names, 2, 0)
    if fragment == "affine2":
        if unit:
            v = rng.choice(names)
            b = planted[v] if planted else rng.randint(0, 1)
            return Atom(clause_rel((bool(b),)), (v,))
        a, b = rng.sample(names, 2)
        parity = planted[a] ^ planted[b] if planted else rng.randint(0, 1)
        return eq(a, b) if parity == 0 and rng.random() < 0.5 else Atom(xor_rel(2, parity), (a, b))
    width = rng.randint(2, min(3, n)) if n >= 2 else 1
    if fragment in ("dualhorn", "horn"):
        if unit:
            return _clause(rng, names, *((1, 0) if rng.random() < 0.5 else (0, 1)))
        one = rng.randint(0, 1)
        major = width - one
        return _clause(rng, names, major, one) if fragment == "dualhorn" else \
            _clause(rng, names, one, major)
    if fragment in ("en", "ep"):
        sign = fragment == "ep"
        if unit:
            # the opposite unit is part of the language too
            return _clause(rng, names, *((1, 0) if rng.random() < 0.5 else (0, 1)))
        if rng.random() < 0.3:
            return eq(*rng.sample(names, 2))
        return _clause(rng, names, width if sign else 0, 0 if sign else width)
    raise ValueError(f"unknown fragment {fragment!r}; choose from {FRAGMENTS}")


def random_instance(fragment: str, n_vars: int, n_atoms: int, rng: random.Random,
                    unit_rate: float = 0.1, max_hyps: int = 8, max_mans: int = 3,
                    plant: float = 0.9) -> AbductionInstance:
    """Random instance with disjoint non-empty H and M taken from atom variables."""
    if n_vars < 2:
        raise ValueError("need at least two variables")
    if fragment in ("imp", "pos2cnf"):
        unit_rate = 0.0
    names = [f"v{i}" for i in range(n_vars)]
    planted = {v: rng.randint(0, 1) for v in names} if rng.random() < plant else None
    atoms = [_atom(fragment, rng, names, unit_rate, planted) for _ in range(n_atoms)]
    kb = Formula(tuple(atoms))
    pool = [v for v in names if v in kb.atom_vars]
    if len(pool) < 2:
        pool = names[:2]
        kb = Formula(tuple(atoms), tuple(names[:2]))
    rng.shuffle(pool)
    n_m = rng.randint(1, max(1, min(max_mans, len(pool) // 3)))
    n_h = rng.randint(1, max(1, min(max_hyps, len(pool) - n_m)))
    mans = tuple(sorted(pool[:n_m], key=names.index))
    hyps = tuple(sorted(pool[n_m:n_m + n_h], key=names.index))
    return AbductionInstance(kb, hyps, mans)


def generate(fragment: str, n_vars: int, n_atoms: int, seed: int, **kw) -> str:
    """Instance text; byte-identical for equal arguments."""
    return render(random_instance(fragment, n_vars, n_atoms, random.Random(seed), **kw))


def scale_instance(fragment: str, n_vars: int, n_atoms: int, seed: int = 0,
                   n_hyps: int = 1000, n_mans: int = 50) -> AbductionInstance:
    """Large instance for timing runs; few units so that most of it survives."""
    return random_instance(fragment, n_vars, n_atoms, random.Random(seed), unit_rate=0.001,
                           max_hyps=n_hyps, max_mans=n_mans)

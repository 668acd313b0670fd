"""Satisfiability and entailment for the tractable fragments.

Each fragment solver refuses input outside its fragment (WrongFragment);
``Engine.AUTO`` picks the first applicable one and falls back to bounded
brute force.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels, lattice
from .core import (FALSE, Atom, AbductionInstance, Formula, Kind, _restrict_atom,
                   clause_rel, evaluate)
from .errors import BudgetExceeded, NotSubsetOfH, WrongFragment

DEFAULT_BUDGET = 1 << 22


class Engine(enum.Enum):
    AUTO = "auto"
    HORN = "horn"
    DUALHORN = "dualhorn"
    TWOSAT = "twosat"
    XOR = "xor"
    BRUTE = "brute"


_SHAPE = {Engine.HORN: "horn", Engine.DUALHORN: "dualhorn", Engine.TWOSAT: "2cnf",
          Engine.XOR: "xor"}


# --- compilation for the enumeration kernels ----------------------------

@dataclass(frozen=True)
class Compiled:
    names: tuple
    kinds: np.ndarray
    arg_ptr: np.ndarray
    args: np.ndarray
    params: np.ndarray
    tables: np.ndarray

    @property
    def n(self):
        return len(self.names)

    def arrays(self):
        return (self.n, self.kinds, self.arg_ptr, self.args, self.params, self.tables)

    def decode(self, a: int) -> dict:
        n = self.n
        return {v: (a >> (n - 1 - i)) & 1 for i, v in enumerate(self.names)}


def compile_formula(f: Formula, names=None) -> Compiled:
    """Lower ``f`` to the flat arrays the kernels consume.

    ``names`` fixes the enumeration order; by default it is var(f) restricted
    to variables that occur in some atom.
    """
    if names is None:
        names = tuple(v for v in f.vars if v in f.atom_vars)
    pos = {v: i for i, v in enumerate(names)}
    kinds, ptr, args, params, tables = [], [0], [], [], []
    for a in f.atoms:
        rel = a.relation
        args.extend(pos[v] for v in a.args)
        ptr.append(len(args))
        if rel.kind in (Kind.CLAUSE, Kind.UNIT):
            falsifying = 0
            for s in rel.signs:
                falsifying = (falsifying << 1) | (0 if s else 1)
            kinds.append(0)
            params.append(falsifying)
        elif rel.kind is Kind.XOR:
            kinds.append(1)
            params.append(rel.parity)
        elif rel.kind is Kind.EQUALITY:
            kinds.append(1)
            params.append(0)
        else:
            kinds.append(2)
            params.append(len(tables))
            row = [0] * (1 << rel.arity)
            for t in rel.tuples:
                idx = 0
                for b in t:
                    idx = (idx << 1) | b
                row[idx] = 1
            tables.extend(row)
    i64 = np.int64
    return Compiled(tuple(names), np.array(kinds, dtype=i64), np.array(ptr, dtype=i64),
                    np.array(args, dtype=i64), np.array(params, dtype=i64),
                    np.array(tables or [0], dtype=np.uint8))


# --- unit propagation ---------------------------------------------------

OK, CONFLICT = "OK", "CONFLICT"


@dataclass(frozen=True)
class PropagationResult:
    residual: Formula
    forced: dict = field(default_factory=dict)
    status: str = OK

    @property
    def ok(self):
        return self.status == OK


def _check(atom: Atom, val: dict):
    """Inspect one atom under partial assignment ``val``.

    Returns (state, forced) with state in {"sat", "conflict", "open"} and
    ``forced`` a list of (var, bit) implied by the atom.
    """
    rel = atom.relation
    kind = rel.kind
    if kind is Kind.CLAUSE or kind is Kind.UNIT:
        free = {}
        for v, s in zip(atom.args, rel.signs):
            b = val.get(v)
            if b is None:
                if free.get(v, s) != s:
                    return "sat", ()
                free[v] = s
            elif b == s:
                return "sat", ()
        if not free:
            return "conflict", ()
        if len(free) == 1:
            (v, s), = free.items()
            return "open", ((v, int(s)),)
        return "open", ()
    if kind is Kind.XOR or kind is Kind.EQUALITY:
        parity = rel.parity if kind is Kind.XOR else 0
        odd = {}
        for v in atom.args:
            b = val.get(v)
            if b is None:
                odd[v] = not odd.get(v, False)
            else:
                parity ^= b
        free = [v for v, o in odd.items() if o]
        if not free:
            return ("sat" if parity == 0 else "conflict"), ()
        if len(free) == 1:
            return "open", ((free[0], parity),)
        return "open", ()
    # table: generalized arc consistency over the still-possible tuples
    args = atom.args
    alive = []
    for t in rel.tuples:
        seen = {}
        good = True
        for v, b in zip(args, t):
            known = val.get(v, seen.get(v))
            if known is not None and known != b:
                good = False
                break
            seen[v] = b
        if good:
            alive.append(seen)
    if not alive:
        return "conflict", ()
    free = [v for v in dict.fromkeys(args) if v not in val]
    if not free:
        return "sat", ()
    forced = []
    for v in free:
        bits = {s[v] for s in alive}
        if len(bits) == 1:
            forced.append((v, bits.pop()))
    if len({tuple(s[v] for v in free) for s in alive}) == 1 << len(free):
        return "sat", tuple(forced)
    return "open", tuple(forced)


def unit_propagate(f: Formula, assume=None) -> PropagationResult:
    """Propagate to a fixpoint; the residual is conditioned on the forced values."""
    val = {}
    occ = {}
    for i, a in enumerate(f.atoms):
        for v in set(a.args):
            occ.setdefault(v, []).append(i)
    done = [False] * len(f.atoms)
    queue = list(range(len(f.atoms)))
    queued = [True] * len(f.atoms)

    def assign(v, b):
        old = val.get(v)
        if old is not None:
            return old == b
        val[v] = b
        for j in occ.get(v, ()):
            if not done[j] and not queued[j]:
                queued[j] = True
                queue.append(j)
        return True

    for v, b in (assume or {}).items():
        if not assign(v, int(b)):
            return PropagationResult(Formula((Atom(FALSE, ()),), f.vars), dict(val), CONFLICT)
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        queued[i] = False
        state, forced = _check(f.atoms[i], val)
        if state == "conflict":
            return PropagationResult(Formula((Atom(FALSE, ()),), f.vars), dict(val), CONFLICT)
        if state == "sat":
            done[i] = True
        for v, b in forced:
            if not assign(v, b):
                return PropagationResult(Formula((Atom(FALSE, ()),), f.vars), dict(val),
                                         CONFLICT)
    atoms = []
    for i, a in enumerate(f.atoms):
        if done[i]:
            continue
        r = a
        for v in dict.fromkeys(a.args):
            if v in val:
                r = _restrict_atom(r, v, val[v])
                if r is None:
                    break
        if r is not None:
            atoms.append(r)
    residual = Formula(tuple(atoms), tuple(v for v in f.vars if v not in val))
    return PropagationResult(residual, val, OK)


# --- SAT ----------------------------------------------------------------

SAT, UNSAT = "SAT", "UNSAT"


@dataclass(frozen=True)
class SatResult:
    status: str
    model: dict | None = None

    @property
    def sat(self):
        return self.status == SAT


def _require(f, engine):
    if not lattice.fits(f, _SHAPE[engine]):
        bad = next(a for a in f.atoms if not lattice.SHAPES[_SHAPE[engine]](a.relation))
        raise WrongFragment(f"{engine.value} engine cannot handle atom {bad}")


def _fill(f, partial, default):
    return {v: partial.get(v, default) for v in f.vars}


def _sat_propagate(f, default):
    pr = unit_propagate(f)
    if not pr.ok:
        return SatResult(UNSAT)
    return SatResult(SAT, _fill(f, pr.forced, default))


def _sat_twosat(f):
    idx = f.index
    n = len(f.vars)
    lits = 2 * n
    graph = [[] for _ in range(lits)]

    def node(v, s):
        return 2 * idx[v] + (0 if s else 1)

    def add_clause(l1, l2):
        graph[l1 ^ 1].append(l2)
        graph[l2 ^ 1].append(l1)

    for a in f.atoms:
        rel = a.relation
        if rel.arity == 0:
            if rel.kind is Kind.CLAUSE:
                return SatResult(UNSAT)
            continue
        if rel.kind in (Kind.CLAUSE, Kind.UNIT):
            ls = [node(v, s) for v, s in a.literals()]
            add_clause(ls[0], ls[-1])
        else:
            p, q = a.args
            parity = 0 if rel.kind is Kind.EQUALITY else rel.parity
            if parity == 0:
                add_clause(node(p, False), node(q, True))
                add_clause(node(p, True), node(q, False))
            else:
                add_clause(node(p, True), node(q, True))
                add_clause(node(p, False), node(q, False))
    comp = _tarjan(graph)
    model = {}
    for v, i in idx.items():
        if comp[2 * i] == comp[2 * i + 1]:
            return SatResult(UNSAT)
        # Tarjan numbers components in reverse topological order
        model[v] = 1 if comp[2 * i] < comp[2 * i + 1] else 0
    return SatResult(SAT, model)


def _tarjan(graph):
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(graph[v]):
                work[-1] = (v, i + 1)
                w = graph[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def _sat_xor(f):
    idx = f.index
    rows = []
    for a in f.atoms:
        rel = a.relation
        if rel.kind is Kind.TABLE:  # TRUE
            continue
        mask = 0
        for v in a.args:
            mask ^= 1 << idx[v]
        if rel.kind is Kind.UNIT:
            rhs = int(rel.signs[0])
        elif rel.kind is Kind.EQUALITY:
            rhs = 0
        elif rel.kind is Kind.CLAUSE:  # nullary false
            rhs = 1
        else:
            rhs = rel.parity
        rows.append((mask, rhs))
    pivots = {}
    for mask, rhs in rows:
        while mask:
            p = mask.bit_length() - 1
            if p not in pivots:
                pivots[p] = (mask, rhs)
                break
            pm, pr = pivots[p]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return SatResult(UNSAT)
    bits = 0
    for p in sorted(pivots):
        mask, rhs = pivots[p]
        # free variables default to 0; lower pivots are already set
        rest = mask & ~(1 << p)
        b = rhs ^ (bin(rest & bits).count("1") & 1)
        if b:
            bits |= 1 << p
    return SatResult(SAT, {v: (bits >> i) & 1 for v, i in idx.items()})


def _sat_brute(f, budget):
    budget = DEFAULT_BUDGET if budget is None else budget
    comp = compile_formula(f)
    if (1 << comp.n) > budget:
        raise BudgetExceeded(f"brute force over {comp.n} variables exceeds budget {budget}")
    a = kernels.first_model(*comp.arrays())
    if a < 0:
        return SatResult(UNSAT)
    return SatResult(SAT, _fill(f, comp.decode(a), 0))


def sat(f: Formula, hint=Engine.AUTO, budget: int | None = None) -> SatResult:
    hint = Engine(hint)
    if hint is Engine.AUTO:
        for e in (Engine.HORN, Engine.DUALHORN, Engine.TWOSAT, Engine.XOR):
            if lattice.fits(f, _SHAPE[e]):
                hint = e
                break
        else:
            hint = Engine.BRUTE
    elif hint is not Engine.BRUTE:
        _require(f, hint)
    if hint is Engine.HORN:
        res = _sat_propagate(f, 0)
    elif hint is Engine.DUALHORN:
        res = _sat_propagate(f, 1)
    elif hint is Engine.TWOSAT:
        res = _sat_twosat(f)
    elif hint is Engine.XOR:
        res = _sat_xor(f)
    else:
        res = _sat_brute(f, budget)
    if res.sat:
        assert evaluate(f, res.model), f"{hint.value} engine returned a non-model"
    return res


def entails(f: Formula, m: str, hint=Engine.AUTO, budget: int | None = None) -> bool:
    """KB |= m, decided as unsatisfiability of KB and (not m).

    For dualHorn input the negative unit would leave the fragment's
    1-default model sound anyway, since propagation runs first.
    """
    neg = Atom(clause_rel((False,)), (m,))
    return not sat(f.conj(neg), hint, budget).sat


def verify_explanation(inst: AbductionInstance, E, hint=Engine.AUTO,
                       budget: int | None = None) -> bool:
    E = tuple(dict.fromkeys(E))
    hyps = set(inst.hyps)
    outside = [e for e in E if e not in hyps]
    if outside:
        raise NotSubsetOfH(f"{outside} not among the hypotheses")
    f = inst.kb.conj(*(Atom(clause_rel((True,)), (e,)) for e in E))
    if not sat(f, hint, budget).sat:
        return False
    return all(entails(f, m, hint, budget) for m in inst.mans)

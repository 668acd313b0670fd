"""Command-line front end.

Exit status: 0 answered (the answer is in the output), 64 usage or parse
error, 65 input outside the requested language, 66 budget exceeded, 67
internal invariant violated.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import diverse, engines, lattice, oracle, polyfacet, reduce
from .core import EQUALITY, DivInstance, FacetInstance, Formula, Resolved
from .errors import AbductionError, BudgetExceeded, ParseError, ScopeError, WrongFragment
from .generate import FRAGMENTS, generate
from .syntax import parse_document, parse_definitions, render

EXIT_OK, EXIT_USAGE, EXIT_LANGUAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 64, 65, 66, 67


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--engine", choices=("auto", "poly", "oracle"), default="auto")
    common.add_argument("--json", action="store_true")
    common.add_argument("--budget", type=int, default=None,
                        help="largest number of models brute force may enumerate")
    p = _Parser(prog="facetabd", description="Facet reasoning for propositional abduction.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sets", parents=[common]).add_argument("file")
    for name in ("facet", "relevant"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
        sp.add_argument("--var", required=True)
    sub.add_parser("minimal", parents=[common]).add_argument("file")
    sp = sub.add_parser("diverse", parents=[common])
    sp.add_argument("file")
    sp.add_argument("-k", type=int, default=None)
    sp.add_argument("--witness", action="store_true")
    sp = sub.add_parser("classify", parents=[common])
    sp.add_argument("file")
    sp.add_argument("--problem", choices=[pr.value for pr in lattice.Problem], default=None)
    sp = sub.add_parser("reduce", parents=[common])
    sp.add_argument("file")
    sp.add_argument("--rule", required=True,
                    choices=("efpp", "abd2facet", "elimpos", "negunit", "abd2div", "pos2div"))
    sp.add_argument("--defs")
    sp.add_argument("-k", type=int, default=None)
    sp = sub.add_parser("gen", parents=[common])
    sp.add_argument("--fragment", required=True, choices=FRAGMENTS)
    sp.add_argument("--vars", type=int, required=True)
    sp.add_argument("--atoms", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sub.add_parser("check", parents=[common]).add_argument("file")
    return p


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path):
    doc = parse_document(_read(path))
    return doc, doc.abduction()


def _engine_name(frag):
    return f"POLY({frag.value})" if frag is not None else "ORACLE"


def _pick(kb, engine):
    """Fragment to run polynomially, or None for the oracle."""
    if engine == "oracle":
        return None
    frag = polyfacet.licensed_fragment(kb)
    if frag is None and engine == "poly":
        raise WrongFragment("no polynomial algorithm applies to this knowledge base")
    return frag


def _verdicts(kb, problem):
    return [lattice.verdict(lattice.profile(kb), problem).as_dict()]


def _require_var(inst, var):
    if var not in inst.hyps:
        raise ScopeError(f"{var!r} is not a hypothesis")
    return FacetInstance(inst, var)


def cmd_sets(args):
    _, inst = _load(args.file)
    if args.engine == "poly":
        raise WrongFragment("the full explanation report is only computed by the oracle")
    rep = oracle.report(inst)
    return rep.as_dict(list(inst.hyps)), "ORACLE", [], {}


def cmd_query(args, relevance):
    _, inst = _load(args.file)
    fi = _require_var(inst, args.var)
    frag = _pick(inst.kb, args.engine)
    if frag is None:
        ans = (oracle.is_relevant_oracle if relevance else oracle.is_facet_oracle)(fi)
    elif relevance:
        ans = polyfacet.relevance_poly(fi, frag)
    else:
        ans = polyfacet.isfacet_poly(fi, frag)
    problem = lattice.Problem.RELEVANCE if relevance else lattice.Problem.ISFACET
    return ans, _engine_name(frag), _verdicts(inst.kb, problem), {}


def cmd_minimal(args):
    _, inst = _load(args.file)
    if args.engine == "poly":
        raise WrongFragment("minimal explanations are only enumerated by the oracle")
    order = list(inst.hyps)
    mins = [sorted(e, key=order.index) for e in oracle.minimal_explanations(inst)]
    return mins, "ORACLE", [], {}


def _div_route(kb, engine):
    if engine == "oracle":
        return None, diverse.div_oracle
    if lattice.fits(kb, "affine2"):
        return "affine2", diverse.div_affine2
    if lattice.fits(kb, "ep"):
        return "ep", diverse.div_ep
    if engine == "poly":
        raise WrongFragment("no polynomial diversity construction applies")
    return None, diverse.div_oracle


def cmd_diverse(args):
    doc, inst = _load(args.file)
    k = args.k if args.k is not None else doc.k
    if k is None:
        raise UsageError("diverse needs -k or a 'k' line in the file")
    name, fn = _div_route(inst.kb, args.engine)
    ans, w = fn(DivInstance(inst, k))
    extra = {}
    if args.witness or args.json:
        extra["witness"] = w.as_dict(list(inst.hyps)) if (w is not None and ans) else None
    engine = f"POLY({name})" if name else "ORACLE"
    return ans, engine, _verdicts(inst.kb, lattice.Problem.DIVABD), extra


def cmd_classify(args):
    _, inst = _load(args.file)
    prof = lattice.profile(inst.kb)
    problems = [lattice.Problem(args.problem)] if args.problem else list(lattice.Problem)
    verdicts = [lattice.verdict(prof, pr).as_dict() for pr in problems]
    return prof.as_dict(), "LATTICE", verdicts, {}


def cmd_reduce(args):
    text = _read(args.file)
    defs = parse_definitions(_read(args.defs)) if args.defs else {}
    doc = parse_document(text, relations={d.target.name: d.target for d in defs.values()})
    if args.rule == "pos2div":
        k = args.k if args.k is not None else doc.k
        if k is None:
            raise UsageError("pos2div needs -k")
        phi = Formula(tuple(doc.atoms), tuple(doc.extra_vars))
        out = reduce.pos2sat_to_div(phi, k)
    else:
        inst = doc.instance()
        base = inst.base if isinstance(inst, (FacetInstance, DivInstance)) else inst
        if args.rule == "efpp":
            out = reduce.efpp_substitute(inst, defs)
        elif args.rule == "abd2facet":
            out = reduce.abd_to_isfacet(base, defs.get(_eq_key(defs)))
        elif args.rule == "abd2div":
            out = reduce.abd_to_div(base, defs.get(_eq_key(defs)))
        elif args.rule == "negunit":
            out = reduce.neg_unit_to_facet(base)
        else:
            if not isinstance(inst, FacetInstance):
                raise UsageError("elimpos needs a 'query' line")
            out = reduce.elim_pos_units(inst)
    if isinstance(out, Resolved):
        return {"resolved": out.answer}, "REDUCE", [], {}
    return render(out), "REDUCE", [], {}


def _eq_key(defs):
    for rel, d in defs.items():
        if d.target.tuples == EQUALITY.tuples:
            return rel
    return None


def cmd_gen(args):
    if args.vars < 2 or args.atoms < 1:
        raise UsageError("gen needs --vars >= 2 and --atoms >= 1")
    return generate(args.fragment, args.vars, args.atoms, args.seed), "GENERATOR", [], {}


def cmd_check(args):
    """Compare every available polynomial route with the oracle."""
    _, inst = _load(args.file)
    frag = polyfacet.licensed_fragment(inst.kb)
    rep = oracle.report(inst)
    rows = []
    for x in inst.hyps:
        fi = FacetInstance(inst, x)
        row = {"var": x, "facet_oracle": x in rep.facets, "relevant_oracle": x in rep.relevant}
        if frag is not None:
            row["facet_poly"] = polyfacet.isfacet_poly(fi, frag)
            row["relevant_poly"] = polyfacet.relevance_poly(fi, frag)
        rows.append(row)
    best = oracle.max_diverse_pair(inst)
    div = {"oracle_max": None if best is None else best[0]}
    name, _ = _div_route(inst.kb, "auto")
    if name:
        w = (diverse.max_pair_affine2 if name == "affine2" else diverse.max_pair_ep)(inst)
        div["poly_max"] = None if w is None else w.d
    ok = all(r.get("facet_poly", r["facet_oracle"]) == r["facet_oracle"]
             and r.get("relevant_poly", r["relevant_oracle"]) == r["relevant_oracle"]
             for r in rows) and div.get("poly_max", div["oracle_max"]) == div["oracle_max"]
    payload = {"agree": ok, "fragment": None if frag is None else frag.value,
               "queries": rows, "diversity": div}
    if not ok:
        raise InvariantViolation(json.dumps(payload))
    return payload, _engine_name(frag) + "+ORACLE", [], {}


COMMANDS = {
    "sets": cmd_sets,
    "facet": lambda a: cmd_query(a, False),
    "relevant": lambda a: cmd_query(a, True),
    "minimal": cmd_minimal,
    "diverse": cmd_diverse,
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
    "check": cmd_check,
}


def _apply_budget(budget):
    if budget is None:
        return
    if budget < 1:
        raise UsageError("--budget must be positive")
    engines.DEFAULT_BUDGET = budget
    bits = int(math.floor(math.log2(budget)))
    oracle.configure(max_hyps=min(20, bits), max_vars=bits)


def _emit(out, args, answer, engine, verdicts, extra, ms):
    if args.json:
        payload = {"command": args.command, "answer": answer, "engine": engine,
                   "verdicts": verdicts, "timing_ms": round(ms, 3)}
        payload.update(extra)
        out.write(json.dumps(payload) + "\n")
        return
    if isinstance(answer, str):
        out.write(answer if answer.endswith("\n") else answer + "\n")
        return
    if isinstance(answer, dict):
        for key, value in answer.items():
            out.write(f"{key}: {json.dumps(value)}\n")
    elif isinstance(answer, list):
        for item in answer:
            out.write(" ".join(item) + "\n" if isinstance(item, list) else f"{item}\n")
    else:
        out.write(("yes" if answer else "no") + "\n")
    if "witness" in extra and extra["witness"] is not None:
        w = extra["witness"]
        out.write(f"witness: {{{', '.join(w['e1'])}}} vs {{{', '.join(w['e2'])}}} "
                  f"at distance {w['d']}\n")
    for v in verdicts:
        out.write(f"{v['problem']}: {v['verdict']}\n")
    out.write(f"engine: {engine}\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    prev_budget = engines.DEFAULT_BUDGET
    prev_limits = oracle.configure()
    try:
        args = build_parser().parse_args(argv)
        _apply_budget(args.budget)
        start = time.perf_counter()
        answer, engine, verdicts, extra = COMMANDS[args.command](args)
        _emit(out, args, answer, engine, verdicts, extra,
              (time.perf_counter() - start) * 1000)
        return EXIT_OK
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (UsageError, ParseError, ScopeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        err.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except InvariantViolation as exc:
        err.write(f"poly/oracle disagreement: {exc}\n")
        return EXIT_INVARIANT
    except AbductionError as exc:
        err.write(f"{exc.code.lower().replace('_', ' ')}: {exc}\n")
        return EXIT_LANGUAGE
    except AssertionError as exc:
        err.write(f"internal invariant violated: {exc}\n")
        return EXIT_INVARIANT
    finally:
        engines.DEFAULT_BUDGET = prev_budget
        oracle.configure(*prev_limits)


def main():
    sys.exit(run())

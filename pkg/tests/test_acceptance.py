"""Acceptance criteria, one test each, each printing a PASS/FAIL line."""
import itertools
import random
import time

import pytest

from facetabd import lattice, oracle
from facetabd.core import (POS_UNIT, AbductionInstance, Atom, DivInstance, FacetInstance,
                           Formula, Resolved, clause, clause_rel, unit)
from facetabd.diverse import div_affine2, div_ep, div_oracle, max_pair_affine2, max_pair_ep
from facetabd.errors import NoEquality
from facetabd.generate import random_instance, scale_instance
from facetabd.polyfacet import (Fragment, isfacet_affine2, isfacet_dualhorn, isfacet_imp,
                                isfacet_poly, relevance_poly)
from facetabd.reduce import (abd_to_div, abd_to_isfacet, efpp_substitute, elim_pos_units,
                             horn4_definition, max_model_distance, neg_unit_to_facet,
                             pos2sat_to_div, split_clause_definition)
from facetabd.syntax import parse_instance

from conftest import SAILING

S = frozenset


@pytest.fixture
def report_line(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
        return ok
    return emit


def _draw(rng, fragment, unit_rate=0.15):
    return random_instance(fragment, rng.randint(2, 8), rng.randint(1, 10), rng,
                           unit_rate=unit_rate)


# 1 ----------------------------------------------------------------------

def test_c1_golden_sailing(report_line):
    t = time.perf_counter()
    inst = parse_instance(SAILING)
    rep = oracle.report(inst)
    ms = (time.perf_counter() - t) * 1000
    checks = {
        "|E| = 7": len(rep.explanations) == 7,
        "minimal": set(rep.minimal) == {S("wc"), S("ws")},
        "relevant": rep.relevant == S("wcs"),
        "necessary": rep.necessary == S("w"),
        "facets": rep.facets == S("cs"),
        "< 1 s": ms < 1000,
    }
    failed = [k for k, ok in checks.items() if not ok]
    detail = f"|E| = {len(rep.explanations)}, {ms:.0f} ms; " + (
        f"failed: {', '.join(failed)}" if failed else "all checks hold")
    assert report_line("C1 golden sailing", not failed, detail), detail


# 2 ----------------------------------------------------------------------

def test_c2_implication_oracle_equivalence(report_line):
    rng = random.Random(2002)
    t = time.perf_counter()
    bad = checked = 0
    for _ in range(1000):
        inst = _draw(rng, "imp")
        facets = oracle.report(inst).facets
        for x in inst.hyps:
            checked += 1
            bad += isfacet_imp(FacetInstance(inst, x)) != (x in facets)
    secs = time.perf_counter() - t
    ok = bad == 0 and secs < 30
    detail = f"{bad} mismatches over {checked} queries on 1000 instances, {secs:.1f} s"
    assert report_line("C2 implication facets", ok, detail), detail


# 3 and 4 ----------------------------------------------------------------

def _fragment_suite(relevance):
    bad = checked = units = 0
    for fragment in (Fragment.DUALHORN, Fragment.AFFINE2, Fragment.EN):
        rng = random.Random(3003 + len(fragment.value))
        for _ in range(500):
            inst = _draw(rng, fragment.value, unit_rate=0.2)
            units += any(a.relation.arity == 1 for a in inst.kb.atoms)
            rep = oracle.report(inst)
            truth = rep.relevant if relevance else rep.facets
            for x in inst.hyps:
                fi = FacetInstance(inst, x)
                got = relevance_poly(fi, fragment) if relevance else isfacet_poly(fi, fragment)
                checked += 1
                bad += got != (x in truth)
    return bad, checked, units


def test_c3_fragment_oracle_equivalence(report_line):
    bad, checked, units = _fragment_suite(relevance=False)
    detail = f"{bad} mismatches over {checked} queries; {units}/1500 instances have units"
    assert report_line("C3 dualHorn/2-affine/EN facets", bad == 0 and units > 0, detail), detail


def test_c4_relevance_variants(report_line):
    bad, checked, _ = _fragment_suite(relevance=True)
    rng = random.Random(4004)
    for _ in range(1000):
        inst = _draw(rng, "imp")
        rel = oracle.report(inst).relevant
        for x in inst.hyps:
            checked += 1
            bad += relevance_poly(FacetInstance(inst, x), Fragment.IMP) != (x in rel)
    detail = f"{bad} mismatches over {checked} relevance queries"
    assert report_line("C4 relevance", bad == 0, detail), detail


# 5 ----------------------------------------------------------------------

def _has_explanation(inst):
    return bool(oracle.all_explanations(inst))


def _eq_capable_sources(rng, n):
    out = []
    while len(out) < n:
        src = _draw(rng, rng.choice(["dualhorn", "horn", "affine2", "imp"]))
        try:
            abd_to_isfacet(src)
        except NoEquality:
            continue
        out.append(src)
    return out


def _facet(fi):
    return fi.answer if isinstance(fi, Resolved) else oracle.is_facet_oracle(fi)


def _efpp_source(rng):
    pos4, horn4 = clause_rel((True,) * 4), clause_rel((False, False, False, True))
    names = [f"v{i}" for i in range(rng.randint(4, 8))]
    atoms = [Atom(pos4 if rng.random() < 0.5 else horn4, tuple(rng.sample(names, 4)))
             for _ in range(rng.randint(1, 5))]
    for _ in range(rng.randint(0, 3)):
        a, b, c = rng.sample(names, 3)
        atoms.append(clause(a, b, c) if rng.random() < 0.5 else clause("-" + a, "-" + b, c))
    kb = Formula(tuple(atoms))
    pool = [v for v in names if v in kb.atom_vars]
    rng.shuffle(pool)
    return AbductionInstance(kb, tuple(pool[1:1 + rng.randint(1, 4)]), (pool[0],))


def _reduction_mismatches():
    rng = random.Random(5005)
    counts = {}

    sources = _eq_capable_sources(rng, 300)
    counts["abd_to_isfacet"] = sum(oracle.is_facet_oracle(abd_to_isfacet(s))
                                   != _has_explanation(s) for s in sources)
    counts["abd_to_div"] = sum(div_oracle(abd_to_div(s))[0] != _has_explanation(s)
                               for s in sources)

    bad = n = 0
    while n < 300:
        inst = _draw(rng, rng.choice(["horn", "dualhorn"]), unit_rate=0.35)
        if POS_UNIT not in inst.kb.relations():
            continue
        n += 1
        fi = FacetInstance(inst, rng.choice(inst.hyps))
        bad += _facet(fi) != _facet(elim_pos_units(fi))
    counts["elim_pos_units"] = bad

    bad = 0
    for _ in range(300):
        src = _draw(rng, rng.choice(["imp", "dualhorn"]), unit_rate=0.0)
        src = AbductionInstance(src.kb.conj(unit("-" + rng.choice(src.kb.vars))),
                                src.hyps, src.mans)
        bad += oracle.is_facet_oracle(neg_unit_to_facet(src)) != _has_explanation(src)
    counts["neg_unit_to_facet"] = bad

    bad = 0
    for _ in range(300):
        phi = random_instance("pos2cnf", rng.randint(2, 8), rng.randint(1, 8), rng).kb
        k = rng.randint(0, len(phi.vars) + 1)
        bad += div_oracle(pos2sat_to_div(phi, k))[0] != (max_model_distance(phi) >= k)
    counts["pos2sat_to_div"] = bad

    defs = {d.target: d for d in (split_clause_definition(), horn4_definition())}
    bad = 0
    for _ in range(300):
        src = _efpp_source(rng)
        out = efpp_substitute(src, defs)
        src_rep, out_rep = oracle.report(src), oracle.report(out)
        bad += (src_rep.explanations != out_rep.explanations
                or src_rep.facets != out_rep.facets)
    counts["efpp_substitute"] = bad
    return counts


def test_c5_reduction_preservation(report_line):
    counts = _reduction_mismatches()
    detail = ", ".join(f"{k} {v}/300" for k, v in counts.items())
    assert report_line("C5 reductions", not any(counts.values()), detail), detail


# 6 ----------------------------------------------------------------------

def _horn_rich(rng):
    """Mostly definite Horn clauses deriving one manifestation, so that
    instances often have several minimal explanations."""
    names = [f"v{i}" for i in range(rng.randint(4, 8))]
    hyps = names[:rng.randint(2, len(names) - 1)]
    inner = names[len(hyps):]
    m = inner[-1]
    atoms = [clause("-" + rng.choice(hyps), m)]
    for _ in range(rng.randint(2, 9)):
        if rng.random() < 0.75:
            body = rng.sample(names, rng.randint(1, 2))
            head = rng.choice(inner)
            if head not in body:
                atoms.append(clause(*("-" + b for b in body), head))
        else:
            atoms.append(clause(*("-" + b for b in rng.sample(names, 2))))
    return AbductionInstance(Formula(tuple(atoms), tuple(names)), tuple(hyps), (m,))


def test_c6_symmetric_difference_in_facets(report_line):
    rng = random.Random(6006)
    bad = pairs = 0
    for i in range(500):
        inst = _horn_rich(rng) if i % 2 else _draw(rng, "horn")
        assert lattice.fits(inst.kb, "horn")
        rep = oracle.report(inst)
        for e1, e2 in itertools.combinations(rep.minimal, 2):
            pairs += 1
            bad += not (e1 ^ e2) <= rep.facets
    detail = f"{bad} violations over {pairs} minimal pairs"
    assert report_line("C6 symmetric difference", bad == 0 and pairs > 0, detail), detail


# 7 ----------------------------------------------------------------------

def test_c7_diversity_constructions(report_line):
    rng = random.Random(7007)
    bad = decisions = 0
    for fragment, decide, build in (("affine2", div_affine2, max_pair_affine2),
                                    ("ep", div_ep, max_pair_ep)):
        for _ in range(300):
            base = _draw(rng, fragment)
            best = oracle.max_diverse_pair(base)
            w = build(base)
            if (best is None) != (w is None) or (w is not None and w.d != best[0]):
                bad += 1
            for k in range(len(base.hyps) + 1):
                di = DivInstance(base, k)
                decisions += 1
                bad += decide(di)[0] != div_oracle(di)[0]
    detail = f"{bad} mismatches over {decisions} decisions and 600 witnesses"
    assert report_line("C7 diversity", bad == 0, detail), detail


# 8 ----------------------------------------------------------------------

EXPECTED = {
    lattice.Verdict.P: ["IV2", "IV1", "IV0", "IV", "ID1", "ID", "IS12", "IS1", "IS02", "IS01",
                        "IS00", "IS0", "IM2", "IM1", "IM0", "IM", "IR2", "IR1", "IR0", "IBF"],
    lattice.Verdict.OPEN_PAPER: ["IL1", "IL"],
    lattice.Verdict.NP_COMPLETE: ["IE2", "IE1", "IE0", "IE", "ID2"],
    lattice.Verdict.SIGMA2P_COMPLETE: ["IN2", "IN", "BR", "II1", "II0", "II"],
}


def test_c8_classification_fixtures(report_line):
    wrong = []
    for name, rels in lattice.BASE_LANGUAGES.items():
        got = lattice.verdict(lattice.profile(rels), lattice.Problem.ISFACET).verdict
        expect = next((v for v, names in EXPECTED.items() if name in names),
                      lattice.Verdict.UNKNOWN)
        if got is not expect or (got is lattice.Verdict.UNKNOWN
                                 and name not in lattice.UNENCODED):
            wrong.append(f"{name}={got.value}")
    detail = (f"{len(lattice.BASE_LANGUAGES) - len(wrong)}/{len(lattice.BASE_LANGUAGES)} "
              f"fixtures as expected" + (f"; wrong: {' '.join(wrong)}" if wrong else ""))
    assert report_line("C8 classification", not wrong, detail), detail


# 9 ----------------------------------------------------------------------

@pytest.mark.parametrize("fragment, solver", [("dualhorn", isfacet_dualhorn),
                                              ("affine2", isfacet_affine2)])
def test_c9_scale(report_line, fragment, solver):
    inst = scale_instance(fragment, 10_000, 50_000, seed=9)
    fi = FacetInstance(inst, inst.hyps[0])
    t = time.perf_counter()
    solver(fi)  # includes any one-off compilation
    secs = time.perf_counter() - t
    detail = (f"{len(inst.kb.vars)} vars, {len(inst.kb.atoms)} atoms, |H| = {len(inst.hyps)}, "
              f"{secs:.2f} s")
    assert report_line(f"C9 scale {fragment}", secs < 5, detail), detail

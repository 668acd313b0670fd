import random

import pytest

from facetabd import oracle
from facetabd.core import (EQUALITY, POS_UNIT, AbductionInstance, Atom, DivInstance,
                           FacetInstance, Formula, Resolved, clause, clause_rel, eq, imp, unit)
from facetabd.diverse import div_oracle
from facetabd.errors import (InvalidDefinition, MissingDefinition, NoEquality, NoNegUnit,
                             NotOneValid, NotPos2CNF)
from facetabd.generate import random_instance
from facetabd.reduce import (EfppDefinition, abd_to_div, abd_to_isfacet, efpp_substitute,
                             elim_pos_units, fresh_name, horn4_definition, identity_definition,
                             max_model_distance, neg_unit_to_facet, pos2sat_to_div,
                             split_clause_definition)

POS4 = clause_rel((True,) * 4)
HORN4 = clause_rel((False, False, False, True))


def _has_explanation(inst):
    return bool(oracle.all_explanations(inst))


def test_fresh_name():
    assert fresh_name("x", {"y"}) == "x"
    assert fresh_name("x", {"x", "x_1"}) == "x_2"


def test_fixtures_validate():
    split_clause_definition()
    split_clause_definition((True, False, True, False))
    horn4_definition()
    identity_definition(HORN4)


def test_invalid_definitions():
    body = Formula((clause("a", "b"),), ("a", "b"))
    with pytest.raises(InvalidDefinition):
        EfppDefinition(clause_rel((True, True, True)), ("a", "b"), (), body)
    with pytest.raises(InvalidDefinition):
        EfppDefinition(clause_rel((True, False)), ("a", "b"), (), body)
    with pytest.raises(InvalidDefinition):
        EfppDefinition(EQUALITY, ("a", "b"), (), Formula((eq("a", "b"),)))
    with pytest.raises(InvalidDefinition):
        EfppDefinition(clause_rel((True, True)), ("a", "b"), ("a",), body)


def _efpp_source(rng):
    names = [f"v{i}" for i in range(rng.randint(4, 7))]
    atoms = []
    for _ in range(rng.randint(1, 5)):
        pick = rng.sample(names, 4)
        atoms.append(Atom(POS4 if rng.random() < 0.5 else HORN4, tuple(pick)))
    for _ in range(rng.randint(0, 3)):
        a, b, c = rng.sample(names, 3)
        atoms.append(clause(a, b, c) if rng.random() < 0.5 else clause("-" + a, "-" + b, c))
    kb = Formula(tuple(atoms))
    pool = [v for v in names if v in kb.atom_vars]
    rng.shuffle(pool)
    return AbductionInstance(kb, tuple(pool[1:4]), (pool[0],))


def test_efpp_substitute_preserves_explanations():
    rng = random.Random(8)
    defs = {POS4: split_clause_definition(), HORN4: horn4_definition()}
    for _ in range(80):
        src = _efpp_source(rng)
        out = efpp_substitute(src, defs)
        assert POS4 not in out.kb.relations() and HORN4 not in out.kb.relations()
        assert out.hyps == src.hyps and out.mans == src.mans
        assert oracle.all_explanations(out) == oracle.all_explanations(src)


def test_efpp_fresh_names_avoid_clashes():
    kb = Formula((Atom(POS4, ("a", "b", "c", "_s")),))
    out = efpp_substitute(AbductionInstance(kb, ("a",), ("b",)),
                          {POS4: split_clause_definition()})
    assert "_s_1" in out.kb.vars and len(set(out.kb.vars)) == len(out.kb.vars)


def test_missing_definition():
    kb = Formula((Atom(POS4, ("a", "b", "c", "d")), clause("-a", "b")))
    with pytest.raises(MissingDefinition):
        efpp_substitute(AbductionInstance(kb, ("a",), ("b",)),
                        {POS4: split_clause_definition()})


def _equality_capable(rng, fragment):
    while True:
        src = random_instance(fragment, rng.randint(2, 7), rng.randint(1, 9), rng)
        try:
            return src, abd_to_isfacet(src)
        except NoEquality:
            continue


@pytest.mark.parametrize("fragment", ["dualhorn", "horn", "affine2", "imp", "en"])
def test_abd_to_isfacet(fragment):
    rng = random.Random(13)
    for _ in range(60):
        src, fi = _equality_capable(rng, fragment)
        assert oracle.is_facet_oracle(fi) == _has_explanation(src)
        di = abd_to_div(src)
        assert div_oracle(di)[0] == _has_explanation(src)


def test_no_equality_for_en_without_eq():
    src = AbductionInstance(Formula((clause("-a", "-b"),)), ("a",), ("b",))
    with pytest.raises(NoEquality):
        abd_to_isfacet(src)
    # an explicit definition lifts the restriction
    both_ways = EfppDefinition(EQUALITY, ("p", "q"), (),
                               Formula((imp("p", "q"), imp("q", "p"))))
    fi = abd_to_isfacet(src, both_ways)
    assert oracle.is_facet_oracle(fi) == _has_explanation(src)


def test_elim_pos_units_resolves_on_query():
    fi = FacetInstance(AbductionInstance(Formula((unit("a"), imp("a", "m"))), ("a",), ("m",)),
                       "a")
    assert elim_pos_units(fi) == Resolved(False)


def test_elim_pos_units_shape():
    fi = FacetInstance(AbductionInstance(Formula((unit("u"), unit("w"), clause("-u", "-a", "m"))),
                                         ("a",), ("m",)), "a")
    out = elim_pos_units(fi)
    assert POS_UNIT not in out.kb.relations()
    assert out.hyps[-1] == out.mans[-1] == "t"
    assert "u" not in out.kb.vars and "w" not in out.kb.vars


def test_elim_pos_units_known_counterexample():
    # Merging positive units into a fresh t in H and M flips the answer here:
    # the source has the single minimal explanation {a}, while the target has
    # {a, x} and {a, t}, which makes x a facet.
    kb = Formula((unit("u"), imp("a", "m"), imp("x", "u")))
    fi = FacetInstance(AbductionInstance(kb, ("a", "x"), ("m",)), "x")
    out = elim_pos_units(fi)
    assert oracle.is_facet_oracle(fi) != oracle.is_facet_oracle(out)


def test_neg_unit_to_facet():
    rng = random.Random(17)
    for _ in range(100):
        src = random_instance("imp", rng.randint(3, 7), rng.randint(1, 8), rng)
        z = rng.choice(src.kb.vars)
        src = AbductionInstance(src.kb.conj(unit("-" + z)), src.hyps, src.mans)
        fi = neg_unit_to_facet(src)
        assert oracle.is_facet_oracle(fi) == _has_explanation(src)


def test_neg_unit_errors():
    with pytest.raises(NoNegUnit):
        neg_unit_to_facet(AbductionInstance(Formula((imp("a", "m"),)), ("a",), ("m",)))
    with pytest.raises(NotOneValid):
        neg_unit_to_facet(AbductionInstance(Formula((clause("-a", "-m"), unit("-a"))),
                                            ("a",), ("m",)))


def test_pos2sat_to_div():
    rng = random.Random(19)
    for _ in range(60):
        phi = random_instance("pos2cnf", rng.randint(2, 7), rng.randint(1, 7), rng).kb
        best = max_model_distance(phi)
        for k in range(0, len(phi.vars) + 2):
            di = pos2sat_to_div(phi, k)
            assert isinstance(di, DivInstance)
            assert div_oracle(di)[0] == (best >= k)


def test_pos2sat_rejects_other_clauses():
    with pytest.raises(NotPos2CNF):
        pos2sat_to_div(Formula((clause("-a", "b"),)), 1)
    assert max_model_distance(Formula((unit("a"), unit("-a")))) is None

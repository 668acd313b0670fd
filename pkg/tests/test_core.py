import itertools

import pytest
from hypothesis import given, settings, strategies as st

from facetabd.core import (EQUALITY, FALSE, AbductionInstance, Atom, DivInstance, FacetInstance,
                           Formula, Kind, clause, clause_rel, eq, evaluate, imp, restrict,
                           table_rel, unit, xor, xor_rel)
from facetabd.errors import ParseError, PartialAssignment, ScopeError
from facetabd.syntax import parse_instance, render

from conftest import SAILING


def test_parse_sailing(sailing):
    assert len(sailing.kb.vars) == 5
    assert sailing.hyps == ("w", "c", "s", "r")
    assert sailing.mans == ("n",)
    assert sailing.kb.vars == ("w", "r", "c", "n", "s")


def test_hypothesis_outside_kb_is_rejected():
    with pytest.raises(ScopeError):
        parse_instance("hyp a\n")


def test_query_must_be_hypothesis():
    with pytest.raises(ScopeError):
        parse_instance("clause -a b\nhyp a\nman b\nquery b\n")


def test_table_relation():
    inst = parse_instance("rel OneInThree 3 : 001 010 100\napp OneInThree a b c\n"
                          "hyp a\nman b\n")
    (atom,) = inst.kb.atoms
    assert atom.relation.kind is Kind.TABLE
    assert len(atom.relation.tuples) == 3
    assert evaluate(inst.kb, {"a": 0, "b": 1, "c": 0})
    assert not evaluate(inst.kb, {"a": 1, "b": 1, "c": 0})


@pytest.mark.parametrize("text, line, col", [
    ("clause a b\nxor a b = 2\n", 2, 1),
    ("clause a b\napp Foo a\n", 2, 5),
    ("rel R 2 : 01 1\n", 1, 14),
    ("clause a ! b\n", 1, 10),
    ("hyp\n", 1, 1),
    ("frobnicate a\n", 1, 1),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert info.value.column == col


def test_query_and_k_shapes():
    fi = parse_instance("clause -a m\nhyp a\nman m\nquery a\n")
    assert isinstance(fi, FacetInstance) and fi.query == "a"
    di = parse_instance("clause -a m\nhyp a\nman m\nk 3\n")
    assert isinstance(di, DivInstance) and di.k == 3


def test_evaluate_examples(sailing):
    assert not evaluate(Formula((imp("w", "r"),)), {"w": 1, "r": 0})
    assert evaluate(sailing.kb, dict.fromkeys(sailing.kb.vars, 1))
    with pytest.raises(PartialAssignment):
        evaluate(sailing.kb, {"w": 1})


def test_empty_formula_is_true():
    assert evaluate(Formula(), {})


def test_false_relation():
    f = Formula((Atom(FALSE, ()),), ("a",))
    assert not evaluate(f, {"a": 0}) and not evaluate(f, {"a": 1})


def test_repeated_arguments():
    # (x -> y) written as a Horn 3-clause with a repeated argument
    a = Atom(clause_rel((False, False, True)), ("x", "x", "y"))
    f = Formula((a,))
    table = {(x, y) for x in (0, 1) for y in (0, 1) if evaluate(f, {"x": x, "y": y})}
    assert table == {(0, 0), (0, 1), (1, 1)}


def test_restrict_examples():
    f = Formula((imp("x", "y"),))
    r0 = restrict(f, "x", 0)
    assert r0.atoms == () and r0.vars == ("y",)
    r1 = restrict(f, "x", 1)
    assert [str(a) for a in r1.atoms] == ["(y)"]
    r = restrict(Formula((xor("x", "y"),)), "y", 1)
    assert [str(a) for a in r.atoms] == ["(-x)"]


@pytest.mark.parametrize("rel", [
    clause_rel((True, False, True)), clause_rel((False, False)), xor_rel(3, 1), xor_rel(4, 0),
    EQUALITY, clause_rel((True,)), clause_rel((False,)),
])
def test_syntactic_tuples_match_truth_table(rel):
    brute = {t for t in itertools.product((0, 1), repeat=rel.arity) if rel.contains(t)}
    assert rel.tuples == brute
    if rel is EQUALITY:
        assert rel.tuples == {(0, 0), (1, 1)}


# --- property tests -------------------------------------------------------

NAMES = ["a", "b", "c", "d", "e"]


@st.composite
def atoms(draw):
    kind = draw(st.sampled_from(["clause", "xor", "eq", "table"]))
    if kind == "eq":
        return eq(draw(st.sampled_from(NAMES)), draw(st.sampled_from(NAMES)))
    arity = draw(st.integers(1, 3))
    args = tuple(draw(st.sampled_from(NAMES)) for _ in range(arity))
    if kind == "clause":
        return Atom(clause_rel(draw(st.lists(st.booleans(), min_size=arity, max_size=arity))),
                    args)
    if kind == "xor":
        return Atom(xor_rel(arity, draw(st.integers(0, 1))), args)
    rows = draw(st.sets(st.tuples(*[st.integers(0, 1)] * arity)))
    return Atom(table_rel(f"T{arity}", arity, rows), args)


formulas = st.lists(atoms(), max_size=6).map(lambda a: Formula(tuple(a), tuple(NAMES)))


@given(formulas, st.sampled_from(NAMES), st.integers(0, 1))
@settings(max_examples=200, deadline=None)
def test_restrict_soundness(f, v, b):
    r = restrict(f, v, b)
    assert v not in r.vars
    rest = [u for u in f.vars if u != v]
    for bits in itertools.product((0, 1), repeat=len(rest)):
        a = dict(zip(rest, bits))
        assert evaluate(r, a) == evaluate(f, {**a, v: b})


@given(formulas, st.integers(0, 3))
@settings(max_examples=200, deadline=None)
def test_render_round_trip(f, n_h):
    used = [v for v in f.vars]
    inst = AbductionInstance(f, tuple(used[:n_h]), tuple(used[n_h:n_h + 1]))
    back = parse_instance(render(inst))
    assert back.hyps == inst.hyps and back.mans == inst.mans
    # variables come back in first-occurrence order
    assert set(back.kb.vars) == set(inst.kb.vars)
    for bits in itertools.product((0, 1), repeat=len(f.vars)):
        a = dict(zip(f.vars, bits))
        assert evaluate(back.kb, a) == evaluate(f, a)
    assert [a.args for a in back.kb.atoms] == [a.args for a in f.atoms]


def test_round_trip_sailing_text():
    inst = parse_instance(SAILING)
    again = parse_instance(render(inst))
    assert again == inst

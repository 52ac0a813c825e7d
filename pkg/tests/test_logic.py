import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from judgagg import logic
from judgagg.errors import FormulaSyntaxError, MissingAtomError, ResourceLimitError
from judgagg.logic import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Iff,
    Implies,
    Not,
    Or,
    format_formula,
    parse_formula,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p -> q", Implies(p, q)),
    ("~(p & q)", Not(And(p, q))),
    ("!p", Not(p)),
    ("p & q | r", Or(And(p, q), r)),
    ("p | q & r", Or(p, And(q, r))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("p <-> q <-> r", Iff(p, Iff(q, r))),
    ("p -> q <-> r", Iff(Implies(p, q), r)),
    ("(p -> q) -> r", Implies(Implies(p, q), r)),
    ("true & false", And(TOP, BOTTOM)),
    ("  p_1&q2 ", And(Atom("p_1"), Atom("q2"))),
])
def test_parse(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("f, text", [
    (Implies(p, q), "p -> q"),
    (And(p, q), "p & q"),
    (Not(And(p, q)), "~(p & q)"),
    (Implies(Implies(p, q), r), "(p -> q) -> r"),
    (Implies(p, Implies(q, r)), "p -> q -> r"),
    (And(Or(p, q), r), "(p | q) & r"),
    (Not(Not(p)), "~~p"),
])
def test_format(f, text):
    assert format_formula(f) == text


@pytest.mark.parametrize("text", ["p ->", "", "(p", "p q", "p & & q", "1p", "p)", "p $ q"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position is not None


def test_error_position_at_end():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("p ->")
    assert info.value.position == 4


def test_bad_atom_names():
    for name in ("", "1x", "true", "a-b"):
        with pytest.raises(ValueError):
            Atom(name)


def formulas(names=("p", "q", "r")):
    leaves = st.sampled_from([Atom(n) for n in names] + [TOP, BOTTOM])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(st.sampled_from([And, Or, Implies, Iff]), kids, kids).map(lambda t: t[0](t[1], t[2])),
        ),
        max_leaves=8,
    )


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip(f):
    assert parse_formula(format_formula(f)) == f
    assert format_formula(parse_formula(format_formula(f))) == format_formula(f)


@settings(max_examples=200, deadline=None)
@given(formulas(), st.dictionaries(st.sampled_from("pqr"), st.booleans(), min_size=3))
def test_evaluate_matches_reference(f, v):
    assert logic.evaluate(f, v) == oracles.holds(f, v)


@settings(max_examples=200, deadline=None)
@given(st.lists(formulas(), min_size=1, max_size=3), formulas())
def test_consistency_matches_truth_table(fs, gamma):
    assert logic.is_consistent(fs, gamma) == oracles.satisfiable(fs + [gamma])


@settings(max_examples=100, deadline=None)
@given(st.lists(formulas(), min_size=2, max_size=4))
def test_consistency_is_monotone(fs):
    # a consistent set stays consistent when formulas are removed
    if logic.is_consistent(fs):
        for k in range(len(fs)):
            assert logic.is_consistent(fs[:k] + fs[k + 1:])


@settings(max_examples=100, deadline=None)
@given(formulas())
def test_models_are_exactly_satisfying_valuations(f):
    names = sorted(oracles.atom_names(f) | {"p"})
    got = list(logic.iter_models([f], atoms_over=names))
    want = [v for v in oracles.valuations(names) if oracles.holds(f, v)]
    assert got == want


def test_missing_atom():
    with pytest.raises(MissingAtomError):
        logic.evaluate(And(p, q), {"p": True})


def test_atom_limit():
    fs = [Atom(f"a{k}") for k in range(6)]
    assert logic.is_consistent(fs, atom_limit=6)
    with pytest.raises(ResourceLimitError):
        logic.is_consistent(fs, atom_limit=5)


def test_contingency():
    assert logic.is_contingent(p)
    assert not logic.is_contingent(Or(p, Not(p)))
    assert not logic.is_contingent(And(p, Not(p)))
    assert not logic.is_contingent(p, gamma=p)


def test_operators():
    assert (p & q) == And(p, q)
    assert (p | ~q) == Or(p, Not(q))
    assert (p >> q) == Implies(p, q)
    assert str(p >> q) == "p -> q"


def test_atoms():
    assert logic.atoms([parse_formula("p & (q -> r)"), TOP]) == {"p", "q", "r"}


def test_model_order_is_lexicographic():
    models = list(logic.iter_models([Or(p, q)]))
    assert [tuple(v[n] for n in "pq") for v in models] == [(False, True), (True, False), (True, True)]
    assert len(list(itertools.islice(logic.iter_models([TOP], atoms_over="pqr"), 100))) == 8

import itertools
import math

import numpy as np
import pytest

import oracles
from judgagg import logic
from judgagg.core import (
    NEG,
    POS,
    Agenda,
    JudgmentSet,
    Literal,
    Profile,
    enumerate_by_sign_vectors,
    enumerate_consistent_complete,
    ext,
    hamming,
    is_majority_consistent,
    majority_set,
    make_preference_agenda,
    maxcard_consistent_subsets,
    maximal_consistent_subsets,
    profile_distance,
    restrict_profile,
    support,
)
from judgagg.errors import AgendaError, InconsistentJudgmentError
from judgagg.separability import random_decomposable_agenda, random_profile


def strings(sets):
    return [j.sign_string() for j in sets]


def js(a, text):
    return JudgmentSet(a, tuple({"+": POS, "-": NEG, ".": 0}[c] for c in text))


# ---------------------------------------------------------------- agenda invariants

@pytest.mark.parametrize("pre, gamma", [
    (["p | ~p"], "true"),
    (["p & ~p"], "true"),
    (["p", "p"], "true"),
    (["p"], "p & ~p"),
    (["p"], "p"),
    ([], "true"),
])
def test_agenda_rejects(pre, gamma):
    with pytest.raises(AgendaError):
        Agenda.from_strings(pre, gamma)


def test_profile_rejects_inconsistent_member():
    a = Agenda.from_strings(["p", "q", "p & q"])
    with pytest.raises(AgendaError):
        Profile.from_signs(a, ["++-"])
    with pytest.raises(AgendaError):
        Profile.from_signs(a, ["+."])
    with pytest.raises(AgendaError):
        Profile.from_signs(a, [])


def test_formula_view_matches_signs(f1):
    j = js(f1.agenda, "-+-+")
    assert j.describe() == "{~p, q, ~(p & q), t}"
    assert str(j) == "(-,+,-,+)"
    assert j.literals() == [Literal(0, NEG), Literal(1, POS), Literal(2, NEG), Literal(3, POS)]


# ---------------------------------------------------------------- J_A

def test_ja_examples(f1):
    a1 = f1.agenda.subagenda((0, 1, 2))
    assert strings(enumerate_consistent_complete(a1)) == ["+++", "+--", "-+-", "---"]
    assert strings(enumerate_consistent_complete(Agenda.from_strings(["p"], "p | q"))) == ["+", "-"]


def test_ja_forced_sign():
    # a constraint fixing an issue breaks the agenda invariant, so only an unchecked agenda can say it
    p = logic.Atom("p")
    a = Agenda((p,), p, validate=False)
    assert strings(enumerate_consistent_complete(a)) == ["+"]


def test_ja_equals_truth_table(any_fixture):
    a = any_fixture.agenda
    assert sorted(j.signs for j in enumerate_consistent_complete(a)) == sorted(oracles.complete_sets(a))
    assert enumerate_by_sign_vectors(a) == enumerate_consistent_complete(a)


@pytest.mark.parametrize("seed", range(25))
def test_ja_random_agendas(seed):
    a, _ = random_decomposable_agenda(1 + seed % 3, 1 + seed % 2, seed)
    assert sorted(j.signs for j in enumerate_consistent_complete(a)) == sorted(oracles.complete_sets(a))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_preference_agenda_sizes(m):
    a = make_preference_agenda(m)
    assert a.m == m * (m - 1) // 2
    sets = enumerate_consistent_complete(a)
    assert len(sets) == math.factorial(m)
    # every set is a strict linear order: beats-counts are a permutation of 0..m-1
    for j in sets:
        wins = [0] * m
        for (x, y), s in zip(itertools.combinations(range(m), 2), j.signs):
            wins[x if s == POS else y] += 1
        assert sorted(wins) == list(range(m))


def test_pref3_cyclic_vectors_excluded():
    a = make_preference_agenda(3)
    # (1>2, 1>3, 2>3) = (+,-,+) is 1>2>3>1 and (-,+,-) is the reverse cycle
    assert not a.is_consistent_signs((POS, NEG, POS))
    assert not a.is_consistent_signs((NEG, POS, NEG))


# ---------------------------------------------------------------- support and majority

def test_support_examples(f1, f2):
    t = support(f2.profile)
    assert t.positive == (2, 2, 2, 1, 1, 2, 2, 2)
    t = support(f1.profile)
    assert t.positive == (2, 2, 1, 2)
    assert all(x + y == 3 for x, y in zip(t.positive, t.negative))
    assert t.count(Literal(2, NEG)) == 2


def test_majority_examples(f1, f2, f4):
    assert majority_set(f2.profile).sign_string() == "+++--+++"
    assert majority_set(f1.profile).sign_string() == "++-+"
    assert majority_set(f4.profile).sign_string() == ".."
    assert not is_majority_consistent(f2.profile)
    assert not is_majority_consistent(restrict_profile(f1.profile, f1.blocks["A1"]))
    a = f1.agenda
    unanimous = Profile(a, (js(a, "+--+"),) * 3)
    assert is_majority_consistent(unanimous)
    assert support(unanimous).positive == (3, 0, 0, 3)


def test_restriction(f1, f2):
    p = restrict_profile(f1.profile, [3])
    assert strings(p.members) == ["+", "+", "-"]
    assert restrict_profile(f1.profile, range(4)) is f1.profile
    p = restrict_profile(f2.profile, f2.blocks["A1"])
    assert strings(p.members) == ["+++++", "-++--", "+----"]


# ---------------------------------------------------------------- ext and subsets

def test_ext_examples(f1):
    a = f1.agenda
    assert strings(ext(js(a, ".+-+"))) == ["-+-+"]
    assert ext(js(a, "....")) == enumerate_consistent_complete(a)
    assert strings(ext(js(a, "+--+"))) == ["+--+"]
    with pytest.raises(InconsistentJudgmentError):
        ext(js(a, "++-."))


def test_maximal_subset_examples(f1, f2):
    m1 = majority_set(f1.profile)
    assert sorted(strings(maximal_consistent_subsets(m1))) == sorted([".+-+", "+.-+", "++.+"])
    assert sorted(strings(maxcard_consistent_subsets(m1))) == sorted([".+-+", "+.-+", "++.+"])
    m2 = majority_set(restrict_profile(f2.profile, f2.blocks["A1"]))
    assert m2.sign_string() == "+++--"
    assert sorted(strings(maximal_consistent_subsets(m2))) == sorted(
        ["+++..", "++..-", "+.+-.", "+..--", ".++--"])
    assert strings(maxcard_consistent_subsets(m2)) == [".++--"]
    j = js(f1.agenda, "+--+")
    assert maximal_consistent_subsets(j) == [j] == maxcard_consistent_subsets(j)


def _random_partials(seed, count=6):
    rng = np.random.default_rng(seed)
    a, _ = random_decomposable_agenda(1 + seed % 3, 2, seed)
    for _ in range(count):
        yield a, tuple(int(x) for x in rng.choice([POS, NEG, 0], size=a.m))


@pytest.mark.parametrize("seed", range(20))
def test_subsets_match_enumeration_oracle(seed):
    for a, signs in _random_partials(seed):
        s = JudgmentSet(a, signs)
        assert sorted(j.signs for j in maximal_consistent_subsets(s)) == oracles.maximal_subsets(a, signs)
        assert sorted(j.signs for j in maxcard_consistent_subsets(s)) == oracles.maxcard_subsets(a, signs)
        assert s.is_consistent() == oracles.consistent(a, signs)
        if oracles.consistent(a, signs):
            assert sorted(j.signs for j in ext(s)) == sorted(oracles.extensions(a, signs))


# ---------------------------------------------------------------- distances

def test_hamming_examples(f1):
    j1, j2, j3 = f1.profile.members
    assert hamming(j1, j1) == 0
    assert hamming(j1, j2) == 2
    assert hamming(j1, j3) == 3
    q = Profile(f1.agenda, (j1, j1, j1))
    assert profile_distance(f1.profile, f1.profile) == 0
    assert profile_distance(f1.profile, q) == 5
    assert profile_distance(Profile(f1.agenda, (j2,)), Profile(f1.agenda, (j3,))) == hamming(j2, j3)


@pytest.mark.parametrize("seed", range(10))
def test_hamming_is_a_metric(seed):
    a, _ = random_decomposable_agenda(2, 2, seed)
    sets = enumerate_consistent_complete(a)
    for x, y, z in itertools.product(sets[:6], repeat=3):
        assert hamming(x, y) == hamming(y, x)
        assert (hamming(x, y) == 0) == (x == y)
        assert hamming(x, z) <= hamming(x, y) + hamming(y, z)


def test_random_profile_members_are_consistent():
    a, _ = random_decomposable_agenda(3, 2, 7)
    p = random_profile(a, 5, 7)
    assert p.n == 5
    assert all(oracles.consistent(a, j.signs) for j in p.members)
    assert random_profile(a, 5, 7) == p

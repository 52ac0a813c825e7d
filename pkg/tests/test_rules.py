import math
from fractions import Fraction

import pytest

import oracles
from judgagg.core import (
    NEG,
    POS,
    Agenda,
    JudgmentSet,
    Literal,
    Profile,
    enumerate_consistent_complete,
    is_majority_consistent,
    majority_set,
    restrict_profile,
    support,
)
from judgagg.errors import PreconditionError, ResourceLimitError
from judgagg.rules import (
    AS_RULES,
    DEFAULT_TIEBREAKER,
    RULES,
    LexicographicTieBreaker,
    RuleId,
    apply_tiebreak,
    full_h_exhaustive,
    get_rule,
    med_by_distance,
    med_by_support,
    resolute,
    rule_full_h,
    rule_mc,
    rule_mcc,
    rule_med,
    rule_ra,
    rule_ra_by_orders,
    rule_rev,
    rule_rmax,
    rule_scoring,
    score_med,
    score_rev,
)
from judgagg.separability import adversarial_tiebreaker, random_decomposable_agenda, random_profile


def strings(sets):
    return [j.sign_string() for j in sets]


def js(a, text):
    return JudgmentSet(a, tuple({"+": POS, "-": NEG}[c] for c in text))


def block(doc, name):
    return restrict_profile(doc.profile, doc.blocks[name])


# ---------------------------------------------------------------- worked examples

def test_rmax_example(f1):
    assert strings(rule_rmax(f1.agenda, f1.profile)) == ["-+-+"]
    p1 = block(f1, "A1")
    assert sorted(strings(rule_rmax(p1.agenda, p1)) ) == sorted(["-+-", "+++", "+--"])
    p2 = block(f1, "A2")
    assert strings(rule_rmax(p2.agenda, p2)) == ["+", "-"]


def test_f1_condorcet_rules(f1):
    want = sorted(["++++", "+--+", "-+-+"])
    for rule in (rule_mc, rule_mcc, rule_ra):
        assert sorted(strings(rule(f1.agenda, f1.profile))) == want


def test_f2_left_block(f2):
    p1 = block(f2, "A1")
    mc = sorted(["+++++", "++-+-", "+-+-+", "+----", "-++--"])
    assert sorted(strings(rule_mc(p1.agenda, p1))) == mc
    assert sorted(strings(rule_ra(p1.agenda, p1))) == mc
    for rule in (rule_mcc, rule_med, rule_full_h):
        assert strings(rule(p1.agenda, p1)) == ["-++--"]
    sets, score = med_by_support(p1.agenda, p1)
    assert score == 9


def test_f2_right_block(f2):
    p2 = block(f2, "A2")
    for rule in (rule_mcc, rule_med, rule_full_h):
        assert strings(rule(p2.agenda, p2)) == ["---++"]


def test_f2_full(f2):
    want = sorted(["-++---++", "++++++++"])
    for rule in (rule_mcc, rule_med, rule_full_h):
        assert sorted(strings(rule(f2.agenda, f2.profile))) == want
    assert med_by_support(f2.agenda, f2.profile)[1] == 14


def test_score_rev_examples():
    a = Agenda.from_strings(["p", "q", "p & q"])
    assert score_rev(js(a, "+++"), Literal(2, POS)) == 2
    assert score_rev(js(a, "+--"), Literal(0, POS)) == 1
    assert score_rev(js(a, "+--"), Literal(1, POS)) == 0
    assert score_rev(js(a, "+--"), Literal(0, NEG)) == 0


def test_score_med_examples(f1):
    j = f1.profile.members[0]
    for i in range(4):
        assert score_med(j, Literal(i, POS)) == 1
        assert score_med(j, Literal(i, NEG)) == 0


def test_zero_scoring_returns_everything(f1):
    out = rule_scoring(f1.agenda, f1.profile, lambda j, lit: 0)
    assert out == enumerate_consistent_complete(f1.agenda)


def test_rev_single_agent(f2):
    for j in f2.profile.members:
        assert rule_rev(f2.agenda, Profile(f2.agenda, (j,))) == [j]


def test_fractional_scores(f1):
    out = rule_scoring(f1.agenda, f1.profile, lambda j, lit: Fraction(score_med(j, lit), 3))
    assert out == rule_med(f1.agenda, f1.profile)


# ---------------------------------------------------------------- oracle agreement

def instances(count, agents=(1, 2, 3, 4, 5)):
    for seed in range(count):
        a, _ = random_decomposable_agenda(1 + seed % 3, 1 + (seed // 3) % 2, seed)
        yield a, random_profile(a, agents[seed % len(agents)], seed)


def rows(p):
    return [j.signs for j in p.members]


@pytest.mark.parametrize("name", ["mc", "mcc", "rmax", "med", "rev"])
def test_rules_match_oracle(name):
    for a, p in instances(30):
        assert oracles.signs_of(get_rule(name)(a, p)) == oracles.RULES[name](a, rows(p)), (name, a, p)


def test_ra_matches_oracle():
    checked = 0
    for a, p in instances(40):
        blocks = support(p).literals_by_support()
        if math.prod(math.factorial(len(b)) for _, b in blocks) > 5000:
            continue
        want = oracles.ra(a, rows(p))
        assert oracles.signs_of(rule_ra(a, p)) == want
        assert oracles.signs_of(rule_ra_by_orders(a, p)) == want
        checked += 1
    assert checked >= 20


def test_full_h_matches_oracle():
    checked = 0
    for a, p in instances(40):
        if len(enumerate_consistent_complete(a)) ** p.n > 20000:
            continue
        want = oracles.full_h(a, rows(p))
        assert oracles.signs_of(rule_full_h(a, p)) == want
        assert oracles.signs_of(full_h_exhaustive(a, p)) == want
        checked += 1
    assert checked >= 15


def test_full_h_on_f2_matches_exhaustive(f2):
    assert full_h_exhaustive(f2.agenda, f2.profile) == rule_full_h(f2.agenda, f2.profile)


def test_caps():
    a = Agenda.from_strings([f"x{k}" for k in range(7)])
    p = Profile.from_signs(a, ["+" * 7, "-" * 7])
    # 14 literals tied at support 1
    with pytest.raises(ResourceLimitError):
        rule_ra_by_orders(a, p, cap=1000)
    with pytest.raises(ResourceLimitError):
        full_h_exhaustive(a, p, cap=1000)
    assert len(rule_ra(a, p)) == 2**7


# ---------------------------------------------------------------- invariants

@pytest.mark.parametrize("rule", list(RuleId))
def test_outputs_are_complete_consistent_nonempty(rule):
    for a, p in instances(20):
        out = get_rule(rule)(a, p)
        assert out
        assert all(j.complete and j.is_consistent() for j in out)
        assert out == sorted(out, key=lambda j: j.sort_key())


@pytest.mark.parametrize("rule", list(RuleId))
def test_anonymity(rule):
    for a, p in instances(15, agents=(3, 4, 5)):
        flipped = Profile(a, tuple(reversed(p.members)))
        assert get_rule(rule)(a, p) == get_rule(rule)(a, flipped)


@pytest.mark.parametrize("rule", list(RuleId))
def test_unanimity(rule):
    for a, p in instances(15):
        j = p.members[0]
        assert get_rule(rule)(a, Profile(a, (j,) * 3)) == [j]


def test_inclusions_and_majority_preservation():
    for a, p in instances(60):
        mc = set(rule_mc(a, p))
        assert set(rule_mcc(a, p)) <= mc
        if p.n % 2:
            assert set(rule_ra(a, p)) <= mc
            if is_majority_consistent(p):
                want = [majority_set(p)]
                for rule in (rule_mc, rule_mcc, rule_ra, rule_full_h, rule_med):
                    assert rule(a, p) == want


def test_med_duality_and_scoring():
    for a, p in instances(60):
        by_support, best = med_by_support(a, p)
        by_distance, dist = med_by_distance(a, p)
        assert by_support == by_distance
        assert best + dist == p.n * a.m
        assert rule_scoring(a, p, score_med) == rule_med(a, p)


def test_rev_scores_match_oracle():
    for a, p in instances(10):
        for j in enumerate_consistent_complete(a):
            for i in range(a.m):
                for s in (POS, NEG):
                    assert score_rev(j, Literal(i, s)) == oracles.s_rev(a, j.signs, i, s)


# ---------------------------------------------------------------- tie-breaking

def test_tiebreak_examples(f4):
    a, p = f4.agenda, f4.profile
    out = rule_med(a, p)
    assert len(out) == 4
    assert apply_tiebreak(out).sign_string() == "++"
    assert apply_tiebreak(out[2:3]) == out[2]
    with pytest.raises(PreconditionError):
        apply_tiebreak([])
    assert apply_tiebreak(out, LexicographicTieBreaker(prefer=NEG)).sign_string() == "--"


def test_adversarial_tiebreak(f4):
    a, p = f4.agenda, f4.profile
    theta = adversarial_tiebreaker(a)
    for rule in AS_RULES:
        whole = apply_tiebreak(get_rule(rule)(a, p), theta)
        assert whole.sign_string() == "++"
        for k in (0, 1):
            sub = restrict_profile(p, [k])
            assert apply_tiebreak(get_rule(rule)(sub.agenda, sub), theta).sign_string() == "-"


def test_tiebreak_output_is_member():
    for a, p in instances(20):
        for rule in RuleId:
            out = get_rule(rule)(a, p)
            assert apply_tiebreak(out) in out
            assert resolute(rule)(a, p) == [apply_tiebreak(out, DEFAULT_TIEBREAKER)]


def test_rule_ids():
    assert set(RULES) == set(RuleId)
    assert RuleId.parse("FULL_H") is RuleId.FULL_H
    assert RuleId.parse("full-h") is RuleId.FULL_H
    with pytest.raises(ValueError):
        RuleId.parse("kemeny-young")

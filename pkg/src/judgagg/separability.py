"""Agenda separability checks, random instances, and the property suite.

A rule is agenda separable when, on an independent partition, its output is
the set of unions of its blockwise outputs; overlapping agenda separability
asks the same of independent overlapping decompositions whenever all
blockwise outputs agree on the shared issues.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import logic
from .core import (
    NEG,
    POS,
    Agenda,
    JudgmentSet,
    Literal,
    Profile,
    enumerate_by_sign_vectors,
    enumerate_consistent_complete,
    is_majority_consistent,
    majority_set,
    ext,
)
from .decomposition import (
    Decomposition,
    Kind,
    blockwise_outputs,
    combine,
    is_iod,
    is_independent_partition_k,
    is_syntactically_independent,
    make_decomposition,
)
from .document import load_fixture
from .errors import PreconditionError
from .logic import And, Atom, Formula, Iff, Implies, Not, Or
from .rules import (
    AS_RULES,
    DEFAULT_TIEBREAKER,
    OAS_RULES,
    RuleId,
    TableTieBreaker,
    apply_tiebreak,
    full_h_exhaustive,
    get_rule,
    med_by_distance,
    med_by_support,
    resolute,
    rule_scoring,
    score_med,
    score_rev,
)


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"
    PREMISE_NOT_SATISFIED = "PREMISE_NOT_SATISFIED"


@dataclass
class SeparabilityReport:
    rule: str
    decomposition: Decomposition
    verdict: Verdict
    direct: list[JudgmentSet] | None = None
    recombined: list[JudgmentSet] | None = None
    blockwise: list[list[JudgmentSet]] | None = None

    def __post_init__(self):
        if self.verdict is Verdict.VIOLATED:
            assert self.direct is not None and self.recombined is not None
            assert set(self.direct) != set(self.recombined)

    @property
    def witness(self):
        if self.verdict is not Verdict.VIOLATED:
            return None
        return self.direct, self.recombined

    def to_dict(self) -> dict:
        out = {
            "rule": self.rule,
            "blocks": [list(b) for b in self.decomposition.blocks],
            "kind": self.decomposition.kind.value,
            "verdict": self.verdict.value,
        }
        if self.blockwise is not None:
            out["blockwise"] = [[j.sign_string() for j in outs] for outs in self.blockwise]
        if self.direct is not None:
            out["direct"] = [j.sign_string() for j in self.direct]
        if self.recombined is not None:
            out["recombined"] = [j.sign_string() for j in self.recombined]
        return out


def _rule_name(rule) -> str:
    if isinstance(rule, RuleId):
        return rule.value
    if isinstance(rule, str):
        return RuleId.parse(rule).value
    return getattr(rule, "__name__", "custom")


def check_as_instance(rule, a: Agenda, p: Profile, d: Decomposition) -> SeparabilityReport:
    """Compare the direct output with the recombined blockwise outputs."""
    if not d.disjoint:
        raise PreconditionError("agenda separability is checked on independent partitions")
    direct = get_rule(rule)(a, p)
    if d.trivial:
        return SeparabilityReport(_rule_name(rule), d, Verdict.HOLDS, direct, direct)
    parts = blockwise_outputs(rule, p, d)
    recombined = combine(a, d.blocks, parts)
    verdict = Verdict.HOLDS if set(direct) == set(recombined) else Verdict.VIOLATED
    return SeparabilityReport(_rule_name(rule), d, verdict, direct, recombined, parts)


def check_oas_instance(rule, a: Agenda, p: Profile, d: Decomposition) -> SeparabilityReport:
    """Overlapping agenda separability on one IOD and one profile."""
    if len(d.blocks) != 2:
        raise PreconditionError("overlapping separability is checked on two-block decompositions")
    b1, b2 = d.blocks
    out1, out2 = blockwise_outputs(rule, p, d)
    shared = sorted(set(b1) & set(b2))
    pos1 = [b1.index(i) for i in shared]
    pos2 = [b2.index(i) for i in shared]
    overlap1 = {tuple(j.signs[k] for k in pos1) for j in out1}
    overlap2 = {tuple(j.signs[k] for k in pos2) for j in out2}
    name = _rule_name(rule)
    if len(overlap1 | overlap2) > 1:
        return SeparabilityReport(name, d, Verdict.PREMISE_NOT_SATISFIED, blockwise=[out1, out2])
    direct = get_rule(rule)(a, p)
    recombined = combine(a, d.blocks, [out1, out2])
    verdict = Verdict.HOLDS if set(direct) == set(recombined) else Verdict.VIOLATED
    return SeparabilityReport(name, d, verdict, direct, recombined, [out1, out2])


def check_scoring_separability(s: Callable, a: Agenda, d: Decomposition) -> bool:
    """s(J, phi) equals s(J restricted to phi's block, phi) for every J and literal."""
    if not d.disjoint:
        raise PreconditionError("scoring separability is defined on independent partitions")
    for j in enumerate_consistent_complete(a):
        for block in d.blocks:
            local = j.restrict(block)
            for k, i in enumerate(block):
                for sign in (POS, NEG):
                    if s(j, Literal(i, sign)) != s(local, Literal(k, sign)):
                        return False
    return True


def check_resolute_as(rule, a: Agenda, p: Profile, d: Decomposition, theta=DEFAULT_TIEBREAKER) -> bool:
    """R_theta(P) is the union of the blockwise R_theta outputs."""
    res = resolute(rule, theta)
    whole = res(a, p)[0]
    pieces = blockwise_outputs(res, p, d)
    return combine(a, d.blocks, pieces) == [whole]


# ------------------------------------------------------------ random instances

_BINARY = (And, Or, Implies, Iff)


def random_formula(rng: np.random.Generator, names: Sequence[str], depth: int = 2) -> Formula:
    """A random formula over ``names`` of nesting depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.3:
        f = Atom(str(rng.choice(list(names))))
        return Not(f) if rng.random() < 0.25 else f
    if rng.random() < 0.15:
        return Not(random_formula(rng, names, depth - 1))
    op = _BINARY[int(rng.integers(len(_BINARY)))]
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def _random_issues(rng, names, count, taken, gamma=logic.TOP, must_use=None):
    issues = []
    for _ in range(50 * count):
        if len(issues) == count:
            break
        f = random_formula(rng, names)
        if f in taken or f in issues:
            continue
        if must_use is not None and not (logic.atoms([f]) & must_use):
            continue
        if logic.is_contingent(f, gamma):
            issues.append(f)
    return issues


def random_profile(a: Agenda, n: int, seed: int = 0) -> Profile:
    """``n`` members drawn uniformly with replacement from J_A."""
    if n < 1:
        raise PreconditionError("a profile needs at least one member")
    js = enumerate_consistent_complete(a)
    picks = np.random.default_rng(seed).integers(len(js), size=n)
    return Profile(a, tuple(js[int(k)] for k in picks), check=False)


def random_decomposable_agenda(blocks: int, atoms_per_block: int, seed: int = 0,
                               max_issues_per_block: int = 3) -> tuple[Agenda, Decomposition]:
    """An agenda whose blocks use private atoms, with its certified partition.

    Block ``b`` uses atoms ``x{b}_0 .. x{b}_{atoms_per_block - 1}``.
    """
    if blocks < 1 or atoms_per_block < 1:
        raise PreconditionError("need at least one block and one atom per block")
    rng = np.random.default_rng(seed)
    preagenda: list[Formula] = []
    layout = []
    for b in range(blocks):
        names = [f"x{b}_{k}" for k in range(atoms_per_block)]
        count = int(rng.integers(1, max_issues_per_block + 1))
        issues = _random_issues(rng, names, count, preagenda)
        if not issues:
            issues = [Atom(names[0])]
        layout.append(tuple(range(len(preagenda), len(preagenda) + len(issues))))
        preagenda.extend(issues)
    a = Agenda(tuple(preagenda))
    if blocks == 1:
        return a, make_decomposition(a, layout, Kind.INDEPENDENT_PARTITION)
    for x in layout:
        assert is_syntactically_independent(a, x, [i for i in range(a.m) if i not in x])
    assert is_independent_partition_k(a, layout)
    return a, make_decomposition(a, layout, Kind.SYNTACTIC)


def random_overlapping_instance(seed: int = 0, max_tries: int = 200) -> tuple[Agenda, Decomposition]:
    """An agenda with a certified two-block IOD whose blocks genuinely overlap.

    The blocks talk about private atoms ``u*`` and ``v*`` respectively and
    meet on issues over shared atoms ``s*``; candidates that fail the IOD
    check are rejected and redrawn.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        shared = [f"s{k}" for k in range(int(rng.integers(1, 3)))]
        left = [f"u{k}" for k in range(int(rng.integers(1, 3)))]
        right = [f"v{k}" for k in range(int(rng.integers(1, 3)))]
        taken: list[Formula] = []
        overlap = _random_issues(rng, shared, int(rng.integers(1, 3)), taken)
        taken += overlap
        only1 = _random_issues(rng, left + shared, int(rng.integers(1, 4)), taken, must_use=set(left))
        taken += only1
        only2 = _random_issues(rng, right + shared, int(rng.integers(1, 4)), taken, must_use=set(right))
        if not (overlap and only1 and only2):
            continue
        preagenda = tuple(only1 + overlap + only2)
        a = Agenda(preagenda)
        b1 = tuple(range(len(only1) + len(overlap)))
        b2 = tuple(range(len(only1), a.m))
        if is_iod(a, b1, b2):
            return a, make_decomposition(a, [b1, b2], Kind.IOD)
    raise RuntimeError("no overlapping decomposition found; raise max_tries")


# ------------------------------------------------------------ property suite

@dataclass
class SuiteConfig:
    trials: int = 200
    seed: int = 0
    max_blocks: int = 3
    max_atoms: int = 2
    agent_counts: tuple[int, ...] = (1, 3, 5)
    overlap_trials: int = 200
    rev_hunt_trials: int = 300
    exhaustive_full_h_cap: int = 10**5
    sign_filter_max_issues: int = 10


@dataclass
class Check:
    name: str
    mandatory: bool = True
    runs: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, detail=None):
        self.runs += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < 3 and detail is not None:
                self.examples.append(detail)

    def to_dict(self) -> dict:
        return {"name": self.name, "mandatory": self.mandatory, "runs": self.runs,
                "failures": self.failures, "passed": self.passed, "examples": self.examples}


@dataclass
class SuiteReport:
    config: SuiteConfig
    checks: dict[str, Check] = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    def check(self, name: str, mandatory: bool = True) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name, mandatory)
        return self.checks[name]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values() if c.mandatory)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "seconds": round(self.seconds, 3),
                "checks": [c.to_dict() for c in self.checks.values()], "notes": self.notes}


def _instance_label(a: Agenda, p: Profile, d: Decomposition) -> dict:
    return {"agenda": [logic.format_formula(f) for f in a.preagenda],
            "profile": [j.sign_string() for j in p.members],
            "blocks": [list(b) for b in d.blocks]}


def _structural_checks(report: SuiteReport, a: Agenda, p: Profile, outputs: dict, cfg: SuiteConfig):
    label = lambda: {"agenda": [logic.format_formula(f) for f in a.preagenda],
                     "profile": [j.sign_string() for j in p.members]}
    mc = set(outputs[RuleId.MC])
    report.check("MCC is contained in MC").record(set(outputs[RuleId.MCC]) <= mc, label())
    if p.n % 2:
        report.check("RA is contained in MC (odd n)").record(set(outputs[RuleId.RA]) <= mc, label())
        if is_majority_consistent(p):
            target = set(ext(majority_set(p)))
            same = all(set(outputs[r]) == target for r in
                       (RuleId.MC, RuleId.MCC, RuleId.RA, RuleId.FULL_H, RuleId.MED))
            report.check("majority-consistent odd n: MC=MCC=RA=FULL_H=MED=m(P)").record(same, label())
    by_support, _ = med_by_support(a, p)
    by_distance, _ = med_by_distance(a, p)
    report.check("MED support argmax equals distance argmin").record(by_support == by_distance, label())
    report.check("scoring with s_med equals MED").record(
        rule_scoring(a, p, score_med) == outputs[RuleId.MED], label())
    for r, out in outputs.items():
        ok = bool(out) and all(j.complete and j.is_consistent() for j in out)
        report.check("outputs are non-empty, complete and consistent").record(ok, label())
    if len(a.rows) ** p.n <= cfg.exhaustive_full_h_cap:
        report.check("FULL_H search equals exhaustive FULL_H").record(
            full_h_exhaustive(a, p) == outputs[RuleId.FULL_H], label())
    if a.m <= cfg.sign_filter_max_issues:
        report.check("J_A by models equals J_A by sign-vector filtering").record(
            enumerate_by_sign_vectors(a) == enumerate_consistent_complete(a), label())


def replay_fixtures(report: SuiteReport):
    f1 = load_fixture("F1")
    a, p = f1.agenda, f1.profile
    d = make_decomposition(a, [f1.block("A1"), f1.block("A2")])
    r = check_as_instance(RuleId.RMAX, a, p, d)
    report.check("F1: RMAX violates agenda separability").record(
        r.verdict is Verdict.VIOLATED and [j.sign_string() for j in r.direct] == ["-+-+"], r.to_dict())

    f2 = load_fixture("F2")
    a, p = f2.agenda, f2.profile
    d = make_decomposition(a, [f2.block("A1"), f2.block("A2")], Kind.IOD)
    for rule in (RuleId.MCC, RuleId.MED, RuleId.FULL_H):
        r = check_oas_instance(rule, a, p, d)
        report.check(f"F2: {rule.value} violates overlapping agenda separability").record(
            r.verdict is Verdict.VIOLATED, r.to_dict())
    r = check_oas_instance(RuleId.MC, a, p, d)
    report.check("F2: MC premise not satisfied").record(r.verdict is Verdict.PREMISE_NOT_SATISFIED, r.to_dict())

    f4 = load_fixture("F4")
    a, p = f4.agenda, f4.profile
    d = make_decomposition(a, [f4.block("A1"), f4.block("A2")])
    theta = adversarial_tiebreaker(a)
    for rule in AS_RULES:
        whole = apply_tiebreak(get_rule(rule)(a, p), theta)
        parts = [apply_tiebreak(out, theta) for out in blockwise_outputs(rule, p, d)]
        ok = whole.signs == (POS, POS) and [j.signs for j in parts] == [(NEG,), (NEG,)]
        report.check("F4: adversarial tie-breaking breaks resolute separability").record(ok, rule.value)


def adversarial_tiebreaker(a: Agenda) -> TableTieBreaker:
    """Priority preferring the negation on each single issue, but (+,+) jointly."""
    x, y = a.preagenda
    return TableTieBreaker({
        (x,): [(NEG,), (POS,)],
        (y,): [(NEG,), (POS,)],
        (x, y): [(POS, POS), (POS, NEG), (NEG, POS), (NEG, NEG)],
    })


def _merge_to_two(d: Decomposition) -> Decomposition:
    first = d.blocks[0]
    rest = tuple(sorted(i for b in d.blocks[1:] for i in b))
    return Decomposition(d.agenda, (first, rest), Kind.IOD)


def run_property_suite(config: SuiteConfig | None = None, progress: Callable | None = None) -> SuiteReport:
    """Check the separability results on random instances and replay the fixed counterexamples."""
    cfg = config or SuiteConfig()
    report = SuiteReport(cfg)
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    iod_instances = []

    for t in range(cfg.trials):
        k = int(rng.integers(1, cfg.max_blocks + 1))
        atoms = int(rng.integers(1, cfg.max_atoms + 1))
        n = int(rng.choice(cfg.agent_counts))
        a, d = random_decomposable_agenda(k, atoms, int(rng.integers(2**31)))
        p = random_profile(a, n, int(rng.integers(2**31)))
        outputs = {}
        for rule in RuleId:
            rep = check_as_instance(rule, a, p, d)
            outputs[rule] = rep.direct
            mandatory = rule in AS_RULES
            name = f"AS holds for {rule.value}" if mandatory else f"AS for {rule.value} (not expected)"
            report.check(name, mandatory).record(rep.verdict is Verdict.HOLDS, _instance_label(a, p, d))
        for rule in AS_RULES:
            report.check("resolute AS with lexicographic tie-breaking").record(
                check_resolute_as(rule, a, p, d), _instance_label(a, p, d))
        report.check("s_med is separable").record(check_scoring_separability(score_med, a, d))
        report.check("s_rev is separable").record(check_scoring_separability(score_rev, a, d))
        _structural_checks(report, a, p, outputs, cfg)
        if len(d.blocks) >= 2:
            iod_instances.append((a, p, _merge_to_two(d)))
        if progress:
            progress("as", t)

    for t in range(cfg.overlap_trials):
        a, d = random_overlapping_instance(int(rng.integers(2**31)))
        n = int(rng.choice(cfg.agent_counts))
        p = random_profile(a, n, int(rng.integers(2**31)))
        iod_instances.append((a, p, d))

    rev_witness = None
    for a, p, d in iod_instances:
        disjoint = not d.overlap
        for rule in OAS_RULES:
            rep = check_oas_instance(rule, a, p, d)
            report.check(f"OAS never violated for {rule.value}").record(
                rep.verdict is not Verdict.VIOLATED, _instance_label(a, p, d))
            if disjoint:
                report.check("disjoint blocks never miss the OAS premise").record(
                    rep.verdict is not Verdict.PREMISE_NOT_SATISFIED, _instance_label(a, p, d))
        if not disjoint:
            outputs = {r: get_rule(r)(a, p) for r in RuleId}
            _structural_checks(report, a, p, outputs, cfg)
    report.notes["iod_instances"] = len(iod_instances)
    report.notes["overlapping_iod_instances"] = sum(1 for _, _, d in iod_instances if d.overlap)

    # The reversal rule is claimed to fail OAS without a published witness: search, never assert.
    hunt = np.random.default_rng(cfg.seed + 1)
    tried = 0
    for t in range(cfg.rev_hunt_trials):
        a, d = random_overlapping_instance(int(hunt.integers(2**31)))
        p = random_profile(a, int(hunt.choice((2, 3, 4, 5))), int(hunt.integers(2**31)))
        tried += 1
        rep = check_oas_instance(RuleId.REV, a, p, d)
        if rep.verdict is Verdict.VIOLATED:
            rev_witness = {**_instance_label(a, p, d), **rep.to_dict()}
            break
    report.notes["rev_oas_counterexample"] = rev_witness or f"not found within {tried} trials"

    replay_fixtures(report)
    report.seconds = time.perf_counter() - start
    return report

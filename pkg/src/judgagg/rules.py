"""The aggregation rules, scoring functions and tie-breaking.

Every rule takes ``(agenda, profile)`` and returns a non-empty, canonically
sorted list of complete consistent judgment sets over the agenda. Scores and
distances are exact integers (or ``Fraction`` for custom scoring functions).
"""

from __future__ import annotations

import enum
import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .core import (
    ABSENT,
    NEG,
    POS,
    Agenda,
    JudgmentSet,
    Literal,
    Profile,
    canonical,
    ext,
    majority_set,
    maxcard_consistent_subsets,
    maximal_consistent_subsets,
    support,
)
from .errors import AgendaError, PreconditionError, ResourceLimitError

#: Cap on the number of support-compatible orders the permutation form of RA may try.
RA_ORDER_CAP = 10**6
#: Cap on |J_A|^n for exhaustive FULL_H, and on the table size of the DP form.
FULL_H_STATE_CAP = 10**7

ScoringFunction = Callable[[JudgmentSet, Literal], Union[int, Fraction]]


class RuleId(str, enum.Enum):
    MC = "mc"
    MCC = "mcc"
    RA = "ra"
    RMAX = "rmax"
    MED = "med"
    REV = "rev"
    FULL_H = "full_h"

    @classmethod
    def parse(cls, text: str) -> "RuleId":
        try:
            return cls(text.lower().replace("-", "_"))
        except ValueError:
            names = ", ".join(r.value for r in cls)
            raise ValueError(f"unknown rule {text!r}; expected one of {names}") from None


def _check(a: Agenda, p: Profile):
    if p.agenda is not a and p.agenda != a:
        raise AgendaError("profile is over a different agenda")


def _distances(a: Agenda, p: Profile) -> np.ndarray:
    """Hamming distance matrix, shape (|J_A|, n)."""
    rows = a.rows.astype(np.int64)
    mat = p.matrix().astype(np.int64)
    return (rows[:, None, :] != mat[None, :, :]).sum(axis=2)


def _select(a: Agenda, mask: np.ndarray) -> list[JudgmentSet]:
    js = a.judgment_sets
    return [js[k] for k in np.flatnonzero(mask)]


# ------------------------------------------------------------ Condorcet rules

def rule_mc(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Maximal Condorcet: extend every subset-maximal consistent subset of m(P)."""
    _check(a, p)
    out = []
    for s in maximal_consistent_subsets(majority_set(p)):
        out.extend(ext(s))
    return canonical(out)


def rule_mcc(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Maxcard Condorcet: extend every maximum-cardinality consistent subset of m(P)."""
    _check(a, p)
    out = []
    for s in maxcard_consistent_subsets(majority_set(p)):
        out.extend(ext(s))
    return canonical(out)


# ------------------------------------------------------------ ranked agenda

def _maximal_extensions(a: Agenda, signs: tuple, block: Sequence[Literal]) -> set[tuple]:
    """Every S | T with T a subset-maximal part of ``block`` consistent with S."""
    rows = a.extensions(signs)
    cands = set()
    for j in rows:
        cands.add(frozenset(lit for lit in block if j.signs[lit.index] == lit.sign))
    maximal = [t for t in cands if not any(t < u for u in cands)]
    out = set()
    for t in maximal:
        new = list(signs)
        for i, s in t:
            new[i] = s
        out.add(tuple(new))
    return out


def rule_ra(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Ranked agenda.

    Literals are taken in blocks of equal support, best first. Greedy
    acceptance over any order of one block ends in some subset-maximal
    extension of the current set within that block, and each such extension
    is reached by the order that lists its literals first. So the rule can
    branch on maximal extensions per block instead of on permutations.
    """
    _check(a, p)
    states = {(ABSENT,) * a.m}
    for _, block in support(p).literals_by_support():
        nxt = set()
        for signs in states:
            nxt |= _maximal_extensions(a, signs, block)
        states = nxt
    out = [JudgmentSet(a, s) for s in states]
    assert all(j.complete for j in out)
    return canonical(out)


def rule_ra_by_orders(a: Agenda, p: Profile, *, cap: int | None = None) -> list[JudgmentSet]:
    """Ranked agenda computed literally: run the greedy procedure for every compatible order."""
    _check(a, p)
    cap = RA_ORDER_CAP if cap is None else cap
    blocks = [lits for _, lits in support(p).literals_by_support()]
    total = math.prod(math.factorial(len(b)) for b in blocks)
    if total > cap:
        raise ResourceLimitError(f"{total} compatible orders exceed the cap of {cap}")
    out = set()
    for perms in itertools.product(*(itertools.permutations(b) for b in blocks)):
        signs = [ABSENT] * a.m
        for block in perms:
            for i, s in block:
                if signs[i] != ABSENT:
                    continue
                signs[i] = s
                if not a.is_consistent_signs(signs):
                    signs[i] = ABSENT
        out.add(JudgmentSet(a, tuple(signs)))
    return canonical(out)


# ------------------------------------------------------------ distance rules

def rule_rmax(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Minimize the largest Hamming distance to a profile member."""
    _check(a, p)
    worst = _distances(a, p).max(axis=1)
    return _select(a, worst == worst.min())


def med_by_support(a: Agenda, p: Profile) -> tuple[list[JudgmentSet], int]:
    """argmax over J_A of the summed support of accepted literals, with the optimum."""
    table = support(p)
    pos = np.array(table.positive, dtype=np.int64)
    neg = np.array(table.negative, dtype=np.int64)
    scores = np.where(a.rows == POS, pos, neg).sum(axis=1)
    best = int(scores.max())
    return _select(a, scores == best), best


def med_by_distance(a: Agenda, p: Profile) -> tuple[list[JudgmentSet], int]:
    """argmin over J_A of the summed Hamming distance to the members, with the optimum."""
    total = _distances(a, p).sum(axis=1)
    best = int(total.min())
    return _select(a, total == best), best


def rule_med(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Median rule; both characterizations are computed and must agree."""
    _check(a, p)
    by_support, _ = med_by_support(a, p)
    by_distance, _ = med_by_distance(a, p)
    if by_support != by_distance:
        raise RuntimeError("median rule: support and distance characterizations disagree")
    return by_support


# ------------------------------------------------------------ scoring rules

def score_med(j: JudgmentSet, lit: Literal) -> int:
    return 1 if j.signs[lit[0]] == lit[1] else 0


def _rev_table(j: JudgmentSet) -> list[dict[int, int]]:
    # rev[i][s]: fewest reversals of j needed to reach a set that rejects literal (i, s).
    a = j.agenda
    d = (a.rows != np.array(j.signs, dtype=np.int8)).sum(axis=1)
    table = []
    for i in range(a.m):
        col = a.rows[:, i]
        entry = {}
        for s in (POS, NEG):
            rejecting = d[col != s]
            entry[s] = int(rejecting.min())
        table.append(entry)
    return table


def score_rev(j: JudgmentSet, lit: Literal) -> int:
    """Fewest judgment reversals in ``j`` after which it rejects ``lit``."""
    if not j.complete:
        raise PreconditionError("reversal scores need a complete judgment set")
    i, s = lit
    if j.signs[i] != s:
        return 0
    return _rev_table(j)[i][s]


def _member_scores(a: Agenda, p: Profile, s: ScoringFunction):
    # scores[i][k] for member k, position i: (score of +phi_i, score of -phi_i)
    if s is score_rev:
        tables = [_rev_table(j) for j in p.members]
        return [[tables[k][i][sign] if j.signs[i] == sign else 0 for k, j in enumerate(p.members)]
                for i in range(a.m) for sign in (POS, NEG)]
    return [[s(j, Literal(i, sign)) for j in p.members] for i in range(a.m) for sign in (POS, NEG)]


def rule_scoring(a: Agenda, p: Profile, s: ScoringFunction) -> list[JudgmentSet]:
    """Maximize the total score of the accepted literals summed over the members."""
    _check(a, p)
    per_literal = [sum(col, start=0) for col in _member_scores(a, p, s)]
    for v in per_literal:
        if v < 0:
            raise ValueError("scoring functions must be non-negative")
    best = None
    winners = []
    for j in a.judgment_sets:
        total = sum((per_literal[2 * i + (0 if sign == POS else 1)] for i, sign in enumerate(j.signs)), start=0)
        if best is None or total > best:
            best, winners = total, [j]
        elif total == best:
            winners.append(j)
    return winners


def rule_rev(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """Reversal scoring rule."""
    return rule_scoring(a, p, score_rev)


def scoring_rule(s: ScoringFunction) -> Callable[[Agenda, Profile], list[JudgmentSet]]:
    """Wrap a scoring function as an ordinary ``(agenda, profile)`` rule."""
    def rule(a, p):
        return rule_scoring(a, p, s)
    rule.__name__ = f"scoring_{getattr(s, '__name__', 'custom')}"
    return rule


# ------------------------------------------------------------ FULL_H

def full_h_exhaustive(a: Agenda, p: Profile, *, cap: int | None = None) -> list[JudgmentSet]:
    """FULL_H by trying every profile Q in J_A^n (the definition, verbatim)."""
    _check(a, p)
    cap = FULL_H_STATE_CAP if cap is None else cap
    k = len(a.rows)
    if k**p.n > cap:
        raise ResourceLimitError(f"{k}^{p.n} candidate profiles exceed the cap of {cap}")
    dist = _distances(a, p)
    rows = a.rows.astype(np.int64)
    best = None
    winners: set[tuple] = set()
    for choice in itertools.product(range(k), repeat=p.n):
        cost = int(sum(dist[r, i] for i, r in enumerate(choice)))
        if best is not None and cost > best:
            continue
        col = rows[list(choice)].sum(axis=0)
        majority = tuple(int(x) for x in np.sign(col))
        if not a.is_consistent_signs(majority):
            continue
        if best is None or cost < best:
            best, winners = cost, set()
        winners.add(majority)
    out = []
    for signs in winners:
        out.extend(a.extensions(signs))
    return canonical(out)


def _min_cost_within_majority(dist_to_rows: np.ndarray, against: np.ndarray, limit: int, bound: float):
    """Least total cost of moving every member to a row so that no position
    is contradicted by more than ``limit`` members.

    ``dist_to_rows[r, i]`` is the cost of giving member i row r and
    ``against[r]`` flags the positions where row r contradicts the target.
    Dynamic programming over members; the state is the vector of contradiction
    counts per position, each in 0..limit.
    """
    k, n = dist_to_rows.shape
    m = against.shape[1]
    base = limit + 1
    size = base**m
    if size > FULL_H_STATE_CAP:
        raise ResourceLimitError(f"{size} DP states exceed the cap of {FULL_H_STATE_CAP}")
    index = np.arange(size)
    digits = (index[:, None] // (base ** np.arange(m))[None, :]) % base
    weights = base ** np.arange(m)
    inf = np.iinfo(np.int64).max // 4
    cost = np.full(size, inf, dtype=np.int64)
    cost[0] = 0
    for i in range(n):
        new = np.full(size, inf, dtype=np.int64)
        live = cost < inf
        for r in range(k):
            c = int(dist_to_rows[r, i])
            if c > bound:
                continue
            cols = np.flatnonzero(against[r])
            ok = live & (cost + c <= bound)
            if len(cols):
                ok &= (digits[:, cols] < limit).all(axis=1)
            src = np.flatnonzero(ok)
            if not len(src):
                continue
            dst = src + int(weights[cols].sum())
            np.minimum.at(new, dst, cost[src] + c)
        cost = new
    best = int(cost.min())
    return best if best < inf else None


def rule_full_h(a: Agenda, p: Profile) -> list[JudgmentSet]:
    """FULL_H: extensions of m(Q) for the closest majority-consistent profiles Q.

    J belongs to the output iff the cheapest profile Q whose strict majority
    never contradicts J costs the global optimum, so each candidate J is
    priced by :func:`_min_cost_within_majority`, cheapest lower bound first,
    skipping candidates whose bound already exceeds the best price found.
    """
    _check(a, p)
    rows = a.rows
    dist = _distances(a, p)
    mat = p.matrix()
    limit = p.n // 2
    lower = []
    for r in range(len(rows)):
        against_now = (mat != rows[r]).sum(axis=0)
        lower.append(int(np.maximum(against_now - limit, 0).max()))
    order = sorted(range(len(rows)), key=lambda r: (lower[r], r))
    best = math.inf
    price = {}
    for r in order:
        if lower[r] > best:
            break
        c = _min_cost_within_majority(dist, rows != rows[r], limit, best)
        if c is not None:
            price[r] = c
            best = min(best, c)
    return canonical(a.judgment_sets[r] for r, c in price.items() if c == best)


# ------------------------------------------------------------ dispatch

RULES: dict[RuleId, Callable[[Agenda, Profile], list[JudgmentSet]]] = {
    RuleId.MC: rule_mc,
    RuleId.MCC: rule_mcc,
    RuleId.RA: rule_ra,
    RuleId.RMAX: rule_rmax,
    RuleId.MED: rule_med,
    RuleId.REV: rule_rev,
    RuleId.FULL_H: rule_full_h,
}

#: Rules proven agenda separable.
AS_RULES = (RuleId.MC, RuleId.MCC, RuleId.RA, RuleId.MED, RuleId.REV, RuleId.FULL_H)
#: Rules proven overlapping agenda separable.
OAS_RULES = (RuleId.MC, RuleId.RA)


def get_rule(rule) -> Callable[[Agenda, Profile], list[JudgmentSet]]:
    """Resolve a :class:`RuleId`, its string value, or pass a callable through."""
    if callable(rule) and not isinstance(rule, (str, RuleId)):
        return rule
    if isinstance(rule, str) and not isinstance(rule, RuleId):
        rule = RuleId.parse(rule)
    return RULES[rule]


def aggregate(rule, a: Agenda, p: Profile) -> list[JudgmentSet]:
    return get_rule(rule)(a, p)


# ------------------------------------------------------------ tie-breaking

class TieBreaker:
    """A strict priority over the complete judgment sets of any agenda."""

    def best(self, outputs: Sequence[JudgmentSet]) -> JudgmentSet:
        raise NotImplementedError


class LexicographicTieBreaker(TieBreaker):
    """Compare sign vectors position by position, preferring ``prefer`` at each.

    ``order`` optionally lists preagenda formulas to be compared first; the
    remaining positions follow in agenda order. Because the ordering is keyed
    on formulas, it applies unchanged to every sub-agenda, and the first
    position where two unions differ is also the first differing position of
    the block it lives in, so blockwise preferences carry over to unions.
    """

    def __init__(self, order: Sequence | None = None, prefer: int = POS):
        self.order = list(order or [])
        self.prefer = prefer

    def _positions(self, a: Agenda) -> list[int]:
        rank = {f: k for k, f in enumerate(self.order)}
        return sorted(range(a.m), key=lambda i: (rank.get(a.preagenda[i], len(rank)), i))

    def key(self, j: JudgmentSet) -> tuple:
        return tuple(0 if j.signs[i] == self.prefer else 1 for i in self._positions(j.agenda))

    def best(self, outputs):
        return min(outputs, key=self.key)


class TableTieBreaker(TieBreaker):
    """Explicit priority lists per preagenda, most preferred first.

    ``tables`` maps a tuple of preagenda formulas to a list of sign vectors;
    sets missing from a table rank below every listed one, in canonical order.
    """

    def __init__(self, tables: dict):
        self.tables = {tuple(k): [tuple(v) for v in rows] for k, rows in tables.items()}

    def best(self, outputs):
        ranking = self.tables.get(outputs[0].agenda.preagenda, [])
        rank = {signs: k for k, signs in enumerate(ranking)}
        return min(outputs, key=lambda j: (rank.get(j.signs, len(rank)), j.sort_key()))


DEFAULT_TIEBREAKER = LexicographicTieBreaker()


def apply_tiebreak(outputs: Iterable[JudgmentSet], theta: TieBreaker = DEFAULT_TIEBREAKER) -> JudgmentSet:
    outputs = list(outputs)
    if not outputs:
        raise PreconditionError("cannot break ties in an empty output")
    return theta.best(outputs)


def resolute(rule, theta: TieBreaker = DEFAULT_TIEBREAKER):
    """The resolute rule R_theta as an ``(agenda, profile)`` rule returning one set."""
    base = get_rule(rule)

    def resolved(a, p):
        return [apply_tiebreak(base(a, p), theta)]
    resolved.__name__ = f"{getattr(base, '__name__', 'rule')}_resolute"
    return resolved

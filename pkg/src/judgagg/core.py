"""Agendas, judgment sets, profiles and the operations defined on them.

A judgment set is stored as a sign vector aligned with the preagenda:
``POS`` (the issue is accepted), ``NEG`` (its negation is accepted) or
``ABSENT``. A *literal* is a pair ``(index, sign)`` naming one element of the
full agenda.

Every agenda materializes its set of complete consistent judgment sets once
(through model enumeration in :mod:`judgagg.logic`). Gamma-consistency of a
partial judgment set is then decided by asking whether some complete
consistent set extends it, using one bitmask over those rows per literal.
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import logic
from .errors import AgendaError, InconsistentJudgmentError, PreconditionError, ResourceLimitError
from .logic import TOP, Atom, Formula, Not

POS, NEG, ABSENT = 1, -1, 0

_SIGN_CHAR = {POS: "+", NEG: "-", ABSENT: "."}
_CHAR_SIGN = {"+": POS, "-": NEG, ".": ABSENT, "?": ABSENT}
# Canonical order: + before - before absent at each position.
_SIGN_RANK = {POS: 0, NEG: 1, ABSENT: 2}


class Literal(NamedTuple):
    index: int
    sign: int

    def negate(self) -> "Literal":
        return Literal(self.index, -self.sign)


def signs_key(signs: Sequence[int]) -> tuple:
    return tuple(_SIGN_RANK[s] for s in signs)


def parse_signs(row) -> tuple[int, ...]:
    """Accept ``"+-+"``, ``["+", "-", "+"]`` or ``[1, -1, 1]``."""
    out = []
    for s in row:
        if isinstance(s, str):
            try:
                out.append(_CHAR_SIGN[s])
            except KeyError:
                raise AgendaError(f"invalid sign {s!r}") from None
        elif s in (POS, NEG, ABSENT):
            out.append(int(s))
        else:
            raise AgendaError(f"invalid sign {s!r}")
    return tuple(out)


@dataclass(frozen=True)
class Agenda:
    """A constrained agenda: preagenda formulas plus the integrity constraint."""

    preagenda: tuple[Formula, ...]
    constraint: Formula = TOP
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "preagenda", tuple(self.preagenda))
        if not validate:
            return
        if not self.preagenda:
            raise AgendaError("an agenda needs at least one issue")
        if len(set(self.preagenda)) != len(self.preagenda):
            raise AgendaError("duplicate preagenda entries")
        if not logic.is_consistent([], self.constraint):
            raise AgendaError("the integrity constraint is inconsistent")
        for f in self.preagenda:
            if not logic.is_contingent(f, self.constraint):
                raise AgendaError(f"issue {logic.format_formula(f)!r} is not contingent under the constraint")

    @classmethod
    def from_strings(cls, preagenda: Iterable[str], constraint: str = "true") -> "Agenda":
        return cls(tuple(logic.parse_formula(s) for s in preagenda), logic.parse_formula(constraint))

    def __len__(self):
        return len(self.preagenda)

    @property
    def m(self) -> int:
        return len(self.preagenda)

    def literal_formula(self, lit: Literal) -> Formula:
        f = self.preagenda[lit.index]
        return f if lit.sign == POS else Not(f)

    def atoms(self, indices: Iterable[int] | None = None) -> set[str]:
        idx = range(self.m) if indices is None else indices
        return logic.atoms(self.preagenda[i] for i in idx)

    # -- complete consistent judgment sets -------------------------------

    @cached_property
    def rows(self) -> np.ndarray:
        """Sign matrix of J_A, one row per complete consistent judgment set, canonically sorted."""
        vectors = set()
        for model in logic.iter_models([], self.constraint, self.atoms()):
            vectors.add(tuple(POS if logic.evaluate(f, model) else NEG for f in self.preagenda))
        ordered = sorted(vectors, key=signs_key)
        return np.array(ordered, dtype=np.int8).reshape(len(ordered), self.m)

    @cached_property
    def judgment_sets(self) -> tuple["JudgmentSet", ...]:
        return tuple(JudgmentSet(self, tuple(int(s) for s in row)) for row in self.rows)

    @cached_property
    def _row_index(self) -> dict[tuple[int, ...], int]:
        return {j.signs: k for k, j in enumerate(self.judgment_sets)}

    @cached_property
    def _masks(self):
        # _masks[sign][i]: bitmask of rows that carry `sign` at position i.
        rows = self.rows
        masks = {POS: [], NEG: []}
        for i in range(self.m):
            for sign in (POS, NEG):
                bits = 0
                for k in np.flatnonzero(rows[:, i] == sign):
                    bits |= 1 << int(k)
                masks[sign].append(bits)
        return masks

    @cached_property
    def _all_rows(self) -> int:
        return (1 << len(self.rows)) - 1

    def row_mask(self, signs: Sequence[int]) -> int:
        """Bitmask of the rows of J_A extending the partial sign vector."""
        mask = self._all_rows
        masks = self._masks
        for i, s in enumerate(signs):
            if s != ABSENT:
                mask &= masks[s][i]
                if not mask:
                    break
        return mask

    def is_consistent_signs(self, signs: Sequence[int]) -> bool:
        if len(signs) != self.m:
            raise AgendaError(f"expected {self.m} signs, got {len(signs)}")
        return self.row_mask(signs) != 0

    def extensions(self, signs: Sequence[int]) -> list["JudgmentSet"]:
        mask = self.row_mask(signs)
        js = self.judgment_sets
        out = []
        k = 0
        while mask:
            if mask & 1:
                out.append(js[k])
            mask >>= 1
            k += 1
        return out

    def index_of(self, j: "JudgmentSet") -> int:
        return self._row_index[j.signs]

    # -- sub-agendas -------------------------------------------------------

    @cached_property
    def _subagendas(self) -> dict:
        return {}

    def subagenda(self, block: Iterable[int]) -> "Agenda":
        """The sub-agenda on ``block`` (sorted indices), keeping the same constraint."""
        block = tuple(sorted(set(block)))
        if not block:
            raise PreconditionError("empty block")
        if block[0] < 0 or block[-1] >= self.m:
            raise PreconditionError(f"block {block} out of range for {self.m} issues")
        if block == tuple(range(self.m)):
            return self
        cache = self._subagendas
        if block not in cache:
            cache[block] = Agenda(tuple(self.preagenda[i] for i in block), self.constraint, validate=False)
        return cache[block]


@dataclass(frozen=True)
class JudgmentSet:
    """A (possibly partial) judgment set, compared and hashed by its sign vector."""

    agenda: Agenda = field(compare=False, repr=False)
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(self.signs))
        if len(self.signs) != self.agenda.m:
            raise AgendaError(f"expected {self.agenda.m} signs, got {len(self.signs)}")

    @classmethod
    def from_literals(cls, agenda: Agenda, literals: Iterable[Literal]) -> "JudgmentSet":
        signs = [ABSENT] * agenda.m
        for i, s in literals:
            if signs[i] not in (ABSENT, s):
                raise AgendaError(f"issue {i} judged both ways")
            signs[i] = s
        return cls(agenda, tuple(signs))

    @classmethod
    def empty(cls, agenda: Agenda) -> "JudgmentSet":
        return cls(agenda, (ABSENT,) * agenda.m)

    @property
    def complete(self) -> bool:
        return ABSENT not in self.signs

    def literals(self) -> list[Literal]:
        return [Literal(i, s) for i, s in enumerate(self.signs) if s != ABSENT]

    def formulas(self) -> list[Formula]:
        return [self.agenda.literal_formula(lit) for lit in self.literals()]

    def __len__(self):
        return sum(1 for s in self.signs if s != ABSENT)

    def __contains__(self, lit) -> bool:
        i, s = lit
        return self.signs[i] == s

    def is_consistent(self) -> bool:
        return self.agenda.is_consistent_signs(self.signs)

    def restrict(self, block: Iterable[int]) -> "JudgmentSet":
        block = tuple(sorted(set(block)))
        return JudgmentSet(self.agenda.subagenda(block), tuple(self.signs[i] for i in block))

    def issubset(self, other: "JudgmentSet") -> bool:
        return all(s == ABSENT or s == t for s, t in zip(self.signs, other.signs))

    def sort_key(self):
        return signs_key(self.signs)

    def sign_string(self) -> str:
        return "".join(_SIGN_CHAR[s] for s in self.signs)

    def __str__(self):
        return "(" + ",".join(_SIGN_CHAR[s] for s in self.signs) + ")"

    def describe(self) -> str:
        return "{" + ", ".join(logic.format_formula(f) for f in self.formulas()) + "}"


def canonical(sets: Iterable[JudgmentSet]) -> list[JudgmentSet]:
    """Deduplicate and sort judgment sets into the canonical (+ before -) order."""
    return sorted(set(sets), key=JudgmentSet.sort_key)


@dataclass(frozen=True)
class Profile:
    """An ordered tuple of complete consistent judgment sets over one agenda."""

    agenda: Agenda
    members: tuple[JudgmentSet, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise AgendaError("a profile needs at least one member")
        if not check:
            return
        for k, j in enumerate(self.members):
            if j.agenda is not self.agenda and j.agenda != self.agenda:
                raise AgendaError(f"member {k} is over a different agenda")
            if not j.complete:
                raise AgendaError(f"member {k} is not complete")
            if not j.is_consistent():
                raise InconsistentJudgmentError(f"member {k} {j} is not consistent")

    @classmethod
    def from_signs(cls, agenda: Agenda, rows: Iterable) -> "Profile":
        return cls(agenda, tuple(JudgmentSet(agenda, parse_signs(r)) for r in rows))

    @property
    def n(self) -> int:
        return len(self.members)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.members)

    def matrix(self) -> np.ndarray:
        return np.array([j.signs for j in self.members], dtype=np.int8).reshape(self.n, self.agenda.m)


@dataclass(frozen=True)
class SupportTable:
    """N(P, phi) for every literal: ``positive[i]`` counts phi_i, ``negative[i]`` counts its negation."""

    n: int
    positive: tuple[int, ...]
    negative: tuple[int, ...]

    def __post_init__(self):
        for p, q in zip(self.positive, self.negative):
            if p + q != self.n:
                raise AgendaError("support counts of an issue must add up to n")

    def count(self, lit) -> int:
        i, s = lit
        return self.positive[i] if s == POS else self.negative[i]

    def literals_by_support(self) -> list[tuple[int, list[Literal]]]:
        """Literals grouped into blocks of equal support, highest support first."""
        groups: dict[int, list[Literal]] = {}
        for i in range(len(self.positive)):
            for s in (POS, NEG):
                lit = Literal(i, s)
                groups.setdefault(self.count(lit), []).append(lit)
        return sorted(groups.items(), reverse=True)


# ------------------------------------------------------------------ operations

def enumerate_consistent_complete(a: Agenda) -> list[JudgmentSet]:
    """J_A in canonical order, collapsed from the models of the constraint."""
    return list(a.judgment_sets)


def enumerate_by_sign_vectors(a: Agenda, *, max_issues: int = 20) -> list[JudgmentSet]:
    """J_A by testing each of the 2^m sign vectors with the formula-level oracle."""
    if a.m > max_issues:
        raise ResourceLimitError(f"2^{a.m} sign vectors exceed the cap of 2^{max_issues}")
    out = []
    for signs in itertools.product((POS, NEG), repeat=a.m):
        j = JudgmentSet(a, signs)
        if logic.is_consistent(j.formulas(), a.constraint):
            out.append(j)
    return out


def support(p: Profile) -> SupportTable:
    mat = p.matrix()
    pos = (mat == POS).sum(axis=0)
    return SupportTable(p.n, tuple(int(x) for x in pos), tuple(int(p.n - x) for x in pos))


def majority_set(p: Profile) -> JudgmentSet:
    """m(P): literals with strict-majority support; ties are left absent."""
    table = support(p)
    signs = []
    for pos, neg in zip(table.positive, table.negative):
        signs.append(POS if 2 * pos > p.n else NEG if 2 * neg > p.n else ABSENT)
    return JudgmentSet(p.agenda, tuple(signs))


def is_majority_consistent(p: Profile) -> bool:
    return majority_set(p).is_consistent()


def restrict_profile(p: Profile, block: Iterable[int]) -> Profile:
    block = tuple(sorted(set(block)))
    if not block:
        raise PreconditionError("cannot restrict a profile to an empty block")
    sub = p.agenda.subagenda(block)
    if sub is p.agenda:
        return p
    return Profile(sub, tuple(JudgmentSet(sub, tuple(j.signs[i] for i in block)) for j in p.members),
                   check=False)


def ext(s: JudgmentSet) -> list[JudgmentSet]:
    """All complete consistent judgment sets extending ``s``."""
    out = s.agenda.extensions(s.signs)
    if not out:
        raise InconsistentJudgmentError(f"{s} is not consistent")
    return out


def _agreement_sets(s: JudgmentSet) -> set[tuple[int, ...]]:
    # J intersected with s for every J in J_A; every consistent subset of s lies under one of these.
    rows = s.agenda.rows
    target = np.array(s.signs, dtype=np.int8)
    agree = np.where(rows == target, target, 0)
    return {tuple(int(x) for x in r) for r in agree}


def maximal_consistent_subsets(s: JudgmentSet) -> list[JudgmentSet]:
    """The subset-maximal consistent subsets of the assigned part of ``s``.

    They are exactly the subset-maximal members of ``{J & s : J in J_A}``.
    """
    cands = sorted(_agreement_sets(s), key=lambda v: -sum(1 for x in v if x))
    kept: list[tuple[int, ...]] = []
    for v in cands:
        if not any(all(x == 0 or x == y for x, y in zip(v, w)) for w in kept):
            kept.append(v)
    return canonical(JudgmentSet(s.agenda, v) for v in kept)


def maxcard_consistent_subsets(s: JudgmentSet) -> list[JudgmentSet]:
    cands = _agreement_sets(s)
    best = max(sum(1 for x in v if x) for v in cands)
    return canonical(JudgmentSet(s.agenda, v) for v in cands if sum(1 for x in v if x) == best)


def hamming(j1: JudgmentSet, j2: JudgmentSet) -> int:
    if j1.agenda is not j2.agenda and j1.agenda != j2.agenda:
        raise AgendaError("judgment sets over different agendas")
    if not (j1.complete and j2.complete):
        raise PreconditionError("hamming distance needs complete judgment sets")
    return sum(1 for a, b in zip(j1.signs, j2.signs) if a != b)


def profile_distance(p: Profile, q: Profile) -> int:
    if p.n != q.n:
        raise AgendaError(f"profiles of sizes {p.n} and {q.n}")
    return sum(hamming(a, b) for a, b in zip(p.members, q.members))


def preference_atom(i: int, j: int) -> Formula:
    """x_i P x_j as a formula; for i > j this is the negated atom ``P_j_i``."""
    if i == j:
        raise ValueError("no self-comparisons")
    return Atom(f"P_{i}_{j}") if i < j else Not(Atom(f"P_{j}_{i}"))


def make_preference_agenda(m: int) -> Agenda:
    """Pairwise-comparison agenda over ``m`` alternatives under the transitivity constraint."""
    if m < 2:
        raise PreconditionError("the preference agenda needs at least two alternatives")
    alts = range(1, m + 1)
    preagenda = tuple(Atom(f"P_{i}_{j}") for i, j in itertools.combinations(alts, 2))
    clauses = [
        logic.Implies(logic.And(preference_atom(i, j), preference_atom(j, k)), preference_atom(i, k))
        for i, j, k in itertools.permutations(alts, 3)
    ]
    return Agenda(preagenda, logic.conjoin(clauses))

"""Independence of sub-agendas: syntactic, semantic (partitions) and overlapping.

Blocks are tuples of preagenda indices. A :class:`Decomposition` is only
built by the functions here after its independence check has passed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import Agenda, JudgmentSet, Profile, canonical, restrict_profile
from .errors import AgendaError, PreconditionError, ResourceLimitError
from .logic import TOP
from .rules import get_rule

#: Largest block on which the exhaustive bipartition search is attempted.
MAX_BIPARTITION_ISSUES = 16
#: Largest number of covering pairs examined by :func:`find_iod`.
IOD_CANDIDATE_CAP = 3**12
#: Largest cross product of blockwise judgment sets examined directly.
CROSS_PRODUCT_CAP = 10**6


class Kind(str, enum.Enum):
    SYNTACTIC = "syntactic"
    INDEPENDENT_PARTITION = "partition"
    IOD = "iod"


@dataclass(frozen=True)
class Decomposition:
    agenda: Agenda
    blocks: tuple[tuple[int, ...], ...]
    kind: Kind

    @property
    def disjoint(self) -> bool:
        return self.kind in (Kind.SYNTACTIC, Kind.INDEPENDENT_PARTITION)

    @property
    def trivial(self) -> bool:
        return len(self.blocks) == 1

    @property
    def overlap(self) -> tuple[int, ...]:
        if len(self.blocks) != 2:
            return ()
        return tuple(sorted(set(self.blocks[0]) & set(self.blocks[1])))


def _block(b) -> tuple[int, ...]:
    return tuple(sorted(set(int(i) for i in b)))


def _check_partition(a: Agenda, blocks):
    blocks = [_block(b) for b in blocks]
    if any(not b for b in blocks):
        raise PreconditionError("blocks must be non-empty")
    seen = [i for b in blocks for i in b]
    if len(seen) != len(set(seen)):
        raise PreconditionError("blocks overlap")
    if sorted(seen) != list(range(a.m)):
        raise PreconditionError("blocks do not cover the agenda")
    return blocks


def _check_cover(a: Agenda, b1, b2):
    b1, b2 = _block(b1), _block(b2)
    if not b1 or not b2:
        raise PreconditionError("blocks must be non-empty")
    if sorted(set(b1) | set(b2)) != list(range(a.m)):
        raise PreconditionError("blocks do not cover the agenda")
    return b1, b2


# ------------------------------------------------------------------ checks

def is_syntactically_independent(a: Agenda, b1, b2) -> bool:
    """The two blocks share no atom. Only meaningful without a constraint."""
    if a.constraint != TOP:
        raise PreconditionError("syntactic independence requires the constraint to be true")
    b1, b2 = _check_partition(a, [b1, b2])
    return not (a.atoms(b1) & a.atoms(b2))


def _block_rows(a: Agenda, block) -> np.ndarray:
    return a.subagenda(block).rows


def is_independent_partition(a: Agenda, b1, b2) -> bool:
    """Every pair of blockwise complete consistent sets unions consistently."""
    b1, b2 = _check_partition(a, [b1, b2])
    return _cross_product_consistent(a, [b1, b2])


def _cross_product_consistent(a: Agenda, blocks) -> bool:
    parts = [_block_rows(a, b) for b in blocks]
    total = 1
    for rows in parts:
        total *= len(rows)
    if total > CROSS_PRODUCT_CAP:
        raise ResourceLimitError(f"{total} blockwise combinations exceed the cap of {CROSS_PRODUCT_CAP}")
    signs = [0] * a.m
    for combo in itertools.product(*parts):
        for block, row in zip(blocks, combo):
            for i, s in zip(block, row):
                signs[i] = int(s)
        if not a.is_consistent_signs(signs):
            return False
    return True


def is_independent_partition_k(a: Agenda, blocks) -> bool:
    """k-block generalization, certified over the whole cross product."""
    blocks = _check_partition(a, blocks)
    return _cross_product_consistent(a, blocks)


def is_iod(a: Agenda, b1, b2) -> bool:
    """Independent overlapping decomposition: blockwise sets agreeing on the
    overlap always union into a complete consistent set."""
    b1, b2 = _check_cover(a, b1, b2)
    shared = sorted(set(b1) & set(b2))
    rows1, rows2 = _block_rows(a, b1), _block_rows(a, b2)
    pos1 = [b1.index(i) for i in shared]
    pos2 = [b2.index(i) for i in shared]
    by_overlap: dict[tuple, list] = {}
    for r in rows2:
        by_overlap.setdefault(tuple(int(r[k]) for k in pos2), []).append(r)
    signs = [0] * a.m
    for r1 in rows1:
        for r2 in by_overlap.get(tuple(int(r1[k]) for k in pos1), []):
            for i, s in zip(b1, r1):
                signs[i] = int(s)
            for i, s in zip(b2, r2):
                signs[i] = int(s)
            if not a.is_consistent_signs(signs):
                return False
    return True


# ------------------------------------------------------------------ constructors

def trivial_decomposition(a: Agenda) -> Decomposition:
    return Decomposition(a, (tuple(range(a.m)),), Kind.INDEPENDENT_PARTITION)


def make_decomposition(a: Agenda, blocks, kind=Kind.INDEPENDENT_PARTITION) -> Decomposition:
    """Certify user-supplied blocks, raising :class:`AgendaError` if the check fails."""
    kind = Kind(kind)
    if kind is Kind.IOD:
        if len(blocks) != 2:
            raise PreconditionError("an overlapping decomposition has exactly two blocks")
        b1, b2 = _check_cover(a, *blocks)
        if not is_iod(a, b1, b2):
            raise AgendaError("blocks are not an independent overlapping decomposition")
        return Decomposition(a, (b1, b2), kind)
    blocks = _check_partition(a, blocks)
    if kind is Kind.SYNTACTIC:
        if a.constraint != TOP:
            raise PreconditionError("syntactic independence requires the constraint to be true")
        for x, y in itertools.combinations(blocks, 2):
            if a.atoms(x) & a.atoms(y):
                raise AgendaError("blocks share atoms")
    elif len(blocks) > 1 and not is_independent_partition_k(a, blocks):
        raise AgendaError("blocks are not an independent partition")
    return Decomposition(a, tuple(blocks), kind)


def as_iod(d: Decomposition) -> Decomposition:
    """View a two-block partition as an overlapping decomposition (always valid)."""
    if not d.disjoint or len(d.blocks) != 2:
        raise PreconditionError("only two-block partitions convert to an IOD")
    return Decomposition(d.agenda, d.blocks, Kind.IOD)


# ------------------------------------------------------------------ search

def syntactic_components(a: Agenda) -> list[tuple[int, ...]]:
    """Connected components of the graph linking issues that share an atom."""
    names = sorted(a.atoms())
    col = {name: k for k, name in enumerate(names)}
    # Bipartite issue-atom incidence; components of the combined graph.
    rows, cols = [], []
    for i, f in enumerate(a.preagenda):
        for name in a.atoms([i]):
            rows.append(i)
            cols.append(a.m + col[name])
    size = a.m + len(names)
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=False)
    groups: dict[int, list[int]] = {}
    for i in range(a.m):
        groups.setdefault(int(labels[i]), []).append(i)
    return sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])


def _split(a: Agenda, block: tuple[int, ...]) -> list[tuple[int, ...]]:
    if len(block) == 1:
        return [block]
    if len(block) > MAX_BIPARTITION_ISSUES:
        raise ResourceLimitError(f"bipartition search over {len(block)} issues exceeds the cap")
    sub = a.subagenda(block)
    local = range(len(block))
    # Bit 0 fixed in the first part: each bipartition is visited once.
    for bits in range(1, 1 << (len(block) - 1)):
        first = [0] + [k for k in local[1:] if not bits >> (k - 1) & 1]
        second = [k for k in local if k not in first]
        if is_independent_partition(sub, first, second):
            left = tuple(block[k] for k in first)
            right = tuple(block[k] for k in second)
            return _split(a, left) + _split(a, right)
    return [block]


def find_finest_independent_partition(a: Agenda) -> Decomposition:
    """A certified independent partition refined as far as bipartitions allow.

    Without a constraint the atom-sharing components come first; each block
    is then split recursively by exhaustive bipartition search. The final
    partition is checked over the full cross product before it is returned.
    """
    seeds = syntactic_components(a) if a.constraint == TOP else [tuple(range(a.m))]
    blocks = []
    for b in seeds:
        blocks.extend(_split(a, b))
    blocks.sort(key=lambda b: b[0])
    if len(blocks) > 1 and not is_independent_partition_k(a, blocks):
        raise AssertionError("refined partition failed its certificate")
    kind = Kind.INDEPENDENT_PARTITION
    return Decomposition(a, tuple(blocks), kind)


def find_syntactic_partition(a: Agenda) -> Decomposition:
    if a.constraint != TOP:
        raise PreconditionError("syntactic independence requires the constraint to be true")
    return Decomposition(a, tuple(syntactic_components(a)), Kind.SYNTACTIC)


def iter_iods(a: Agenda):
    """Yield every nontrivial two-block IOD, in canonical candidate order.

    Each issue goes to the first block only, the second only, or both. Both
    blocks must miss some issue; the lowest-indexed exclusive issue always goes
    to the first block so that mirrored pairs are skipped.
    """
    if 3**a.m > IOD_CANDIDATE_CAP:
        raise ResourceLimitError(f"3^{a.m} covering pairs exceed the cap of {IOD_CANDIDATE_CAP}")
    for labels in itertools.product((0, 1, 2), repeat=a.m):
        exclusive = [x for x in labels if x != 2]
        if 0 not in exclusive or 1 not in exclusive or exclusive[0] != 0:
            continue
        b1 = tuple(i for i, x in enumerate(labels) if x != 1)
        b2 = tuple(i for i, x in enumerate(labels) if x != 0)
        if is_iod(a, b1, b2):
            yield Decomposition(a, (b1, b2), Kind.IOD)


def find_iod(a: Agenda) -> Decomposition | None:
    """Some nontrivial IOD, or None when the agenda has none."""
    return next(iter_iods(a), None)


# ------------------------------------------------------------------ recombination

def combine(a: Agenda, blocks, outputs) -> list[JudgmentSet]:
    """All unions of one set per block; pairs disagreeing on shared issues are dropped."""
    out = []
    for combo in itertools.product(*outputs):
        signs = [0] * a.m
        clash = False
        for block, j in zip(blocks, combo):
            for i, s in zip(block, j.signs):
                if signs[i] not in (0, s):
                    clash = True
                signs[i] = s
        if not clash:
            out.append(JudgmentSet(a, tuple(signs)))
    return canonical(out)


def blockwise_outputs(rule, p: Profile, d: Decomposition) -> list[list[JudgmentSet]]:
    fn = get_rule(rule)
    out = []
    for b in d.blocks:
        sub = restrict_profile(p, b)
        out.append(fn(sub.agenda, sub))
    return out


def aggregate_via_decomposition(rule, a: Agenda, p: Profile, d: Decomposition) -> list[JudgmentSet]:
    """Apply ``rule`` per block of an independent partition and recombine."""
    if not d.disjoint:
        raise PreconditionError("recombination needs a partition; use separability for overlapping blocks")
    if d.agenda is not a and d.agenda != a:
        raise AgendaError("decomposition is over a different agenda")
    if d.trivial:
        return get_rule(rule)(a, p)
    return combine(a, d.blocks, blockwise_outputs(rule, p, d))

"""Propositional formulas: AST, parser, printer, and the consistency oracle.

Grammar (loosest binding first)::

    iff     := implies ( "<->" iff )?        right-associative
    implies := or ( "->" implies )?          right-associative
    or      := and ( "|" and )*
    and     := unary ( "&" unary )*
    unary   := ("~" | "!") unary | primary
    primary := IDENT | "true" | "false" | "(" iff ")"

Consistency is decided by backtracking over atom assignments. Every formula is
evaluated three-valued under the partial assignment, so a branch is cut as soon
as one member is already false, and accepted as soon as all are already true.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import FormulaSyntaxError, MissingAtomError, ResourceLimitError

#: Largest number of distinct atoms the exhaustive procedures will accept.
DEFAULT_ATOM_LIMIT = 24

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Formula:
    """Base class of the formula AST. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")
        if self.name in ("true", "false"):
            raise ValueError(f"{self.name!r} is a reserved word")

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "BOTTOM"


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


TOP = Top()
BOTTOM = Bottom()

Valuation = Mapping[str, bool]


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is TOP."""
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(<->)|(->)|([~!&|()])|([A-Za-z][A-Za-z0-9_]*))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastindex
        start = m.start(kind)
        value = m.group(kind)
        if kind == 3 and value == "!":
            value = "~"
        tokens.append((value if kind != 4 else "IDENT", value, start))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.tokens[self.i]
        found = "end of input" if kind == "EOF" else repr(value)
        raise FormulaSyntaxError(f"expected {expected}, found {found}", self.text, pos)

    def parse(self):
        f = self.iff()
        if self.peek() != "EOF":
            self.fail("end of input")
        return f

    def iff(self):
        left = self.implies()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        kind, value, _ = self.tokens[self.i]
        if kind == "IDENT":
            self.take()
            if value == "true":
                return TOP
            if value == "false":
                return BOTTOM
            return Atom(value)
        if kind == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                self.fail("')'")
            self.take()
            return f
        self.fail("a formula")


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula.

    >>> parse_formula("~(p & q) -> r")
    Implies(left=Not(child=And(left=Atom('p'), right=Atom('q'))), right=Atom('r'))
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies)


def _prec(f):
    return _PREC.get(type(f), 6)


def format_formula(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that reparse to the same tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        inner = format_formula(f.child)
        return "~" + (f"({inner})" if _prec(f.child) < 5 else inner)
    level = _prec(f)
    left, right = format_formula(f.left), format_formula(f.right)
    if isinstance(f, _RIGHT_ASSOC):
        wrap_left = _prec(f.left) <= level
        wrap_right = _prec(f.right) < level
    else:
        wrap_left = _prec(f.left) < level
        wrap_right = _prec(f.right) <= level
    if wrap_left:
        left = f"({left})"
    if wrap_right:
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# ---------------------------------------------------------------- semantics

def _collect(f, out):
    if isinstance(f, Atom):
        out.add(f.name)
    elif isinstance(f, Not):
        _collect(f.child, out)
    elif isinstance(f, (And, Or, Implies, Iff)):
        _collect(f.left, out)
        _collect(f.right, out)


def atoms(fs: Iterable[Formula]) -> set[str]:
    """Union of the atom names occurring in ``fs``."""
    out: set[str] = set()
    for f in fs:
        _collect(f, out)
    return out


def evaluate(f: Formula, v: Valuation) -> bool:
    """Classical truth value of ``f`` under the total valuation ``v``."""
    if isinstance(f, Atom):
        try:
            return bool(v[f.name])
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.child, v)
    a = evaluate(f.left, v)
    if isinstance(f, And):
        return a and evaluate(f.right, v)
    if isinstance(f, Or):
        return a or evaluate(f.right, v)
    if isinstance(f, Implies):
        return (not a) or evaluate(f.right, v)
    return a == evaluate(f.right, v)


def _partial(f, v):
    # Kleene three-valued evaluation; None means undetermined.
    if isinstance(f, Atom):
        return v.get(f.name)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        c = _partial(f.child, v)
        return None if c is None else not c
    a = _partial(f.left, v)
    if isinstance(f, And):
        if a is False:
            return False
        b = _partial(f.right, v)
        if b is False:
            return False
        return True if (a and b) else None
    if isinstance(f, Or):
        if a is True:
            return True
        b = _partial(f.right, v)
        if b is True:
            return True
        return False if (a is False and b is False) else None
    if isinstance(f, Implies):
        if a is False:
            return True
        b = _partial(f.right, v)
        if b is True:
            return True
        return False if (a is True and b is False) else None
    b = _partial(f.right, v)
    if a is None or b is None:
        return None
    return a == b


def _check_limit(names, atom_limit):
    limit = DEFAULT_ATOM_LIMIT if atom_limit is None else atom_limit
    if len(names) > limit:
        raise ResourceLimitError(f"{len(names)} atoms exceed the limit of {limit}")


def _search(fs, order, v, depth):
    """Yield (valuation, depth) at every node where all of ``fs`` are true."""
    status = [_partial(f, v) for f in fs]
    if any(s is False for s in status):
        return
    if all(s is True for s in status):
        yield dict(v), depth
        return
    name = order[depth]
    for value in (False, True):
        v[name] = value
        yield from _search(fs, order, v, depth + 1)
    del v[name]


def is_consistent(fs: Iterable[Formula], gamma: Formula = TOP, *, atom_limit: int | None = None) -> bool:
    """True iff some valuation satisfies every member of ``fs`` together with ``gamma``."""
    fs = list(fs) + [gamma]
    order = sorted(atoms(fs))
    _check_limit(order, atom_limit)
    for _ in _search(fs, order, {}, 0):
        return True
    return False


def iter_models(fs: Iterable[Formula], gamma: Formula = TOP, atoms_over: Iterable[str] = (),
                *, atom_limit: int | None = None) -> Iterator[dict[str, bool]]:
    """Lazily yield the total models of ``fs`` and ``gamma``; see :func:`enumerate_models`."""
    fs = list(fs) + [gamma]
    order = sorted(atoms(fs) | set(atoms_over))
    _check_limit(order, atom_limit)
    for partial, depth in _search(fs, order, {}, 0):
        free = order[depth:]
        # A satisfied prefix leaves the remaining atoms unconstrained.
        for bits in range(1 << len(free)):
            model = dict(partial)
            for k, name in enumerate(free):
                model[name] = bool(bits >> (len(free) - 1 - k) & 1)
            yield {name: model[name] for name in order}


def enumerate_models(fs: Iterable[Formula], gamma: Formula = TOP, atoms_over: Iterable[str] = (),
                     *, atom_limit: int | None = None) -> list[dict[str, bool]]:
    """All valuations over ``atoms(fs + [gamma]) | atoms_over`` satisfying ``fs`` and ``gamma``.

    Valuations come out in lexicographic order of their value vectors, with
    atoms sorted by name and False ordered before True.
    """
    return list(iter_models(fs, gamma, atoms_over, atom_limit=atom_limit))


def is_contingent(f: Formula, gamma: Formula = TOP, *, atom_limit: int | None = None) -> bool:
    """Neither entailed nor refuted by ``gamma``."""
    return (is_consistent([f], gamma, atom_limit=atom_limit)
            and is_consistent([Not(f)], gamma, atom_limit=atom_limit))

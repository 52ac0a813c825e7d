"""JSON problem documents and the fixture files shipped with the package.

A document looks like::

    {
      "agenda": ["p", "q", "p & q", "t"],
      "constraint": "true",
      "profile": [["+", "+", "+", "+"], ["+", "-", "-", "+"], ["-", "+", "-", "-"]],
      "blocks": {"A1": [0, 1, 2], "A2": [3]}
    }

``constraint`` and ``blocks`` are optional. Rows may also be given as strings
such as ``"+--+"``; they are always written back as lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from . import logic
from .core import Agenda, Profile, parse_signs
from .errors import AgendaError

FIXTURES = ("F1", "F2", "F3", "F4", "PREF3")


@dataclass
class ProblemDocument:
    agenda_text: list[str]
    profile_rows: list[list[str]]
    constraint_text: str = "true"
    blocks: dict[str, list[int]] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemDocument":
        if not isinstance(data, dict):
            raise AgendaError("a problem document must be a JSON object")
        try:
            agenda = [str(s) for s in data["agenda"]]
            rows = data["profile"]
        except KeyError as e:
            raise AgendaError(f"missing field {e.args[0]!r}") from None
        profile_rows = []
        for k, r in enumerate(rows):
            signs = parse_signs(r)
            if 0 in signs:
                raise AgendaError(f"row {k} is not complete")
            profile_rows.append(["+" if s > 0 else "-" for s in signs])
        blocks = {str(k): [int(i) for i in v] for k, v in data.get("blocks", {}).items()}
        doc = cls(agenda, profile_rows, str(data.get("constraint", "true")), blocks)
        doc.validate()
        return doc

    def to_dict(self) -> dict:
        out = {"agenda": list(self.agenda_text), "constraint": self.constraint_text,
               "profile": [list(r) for r in self.profile_rows]}
        if self.blocks:
            out["blocks"] = {k: list(v) for k, v in self.blocks.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ProblemDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise AgendaError(f"invalid JSON: {e}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ProblemDocument":
        return cls.loads(Path(path).read_text())

    def validate(self):
        """Parse everything and check every row against the agenda."""
        a = self.agenda
        for k, row in enumerate(self.profile_rows):
            if len(row) != a.m:
                raise AgendaError(f"row {k} has {len(row)} signs for {a.m} issues")
        self.profile
        for name, block in self.blocks.items():
            if not block or any(not 0 <= i < a.m for i in block):
                raise AgendaError(f"block {name!r} has indices outside the agenda")

    @cached_property
    def agenda(self) -> Agenda:
        return Agenda(tuple(logic.parse_formula(s) for s in self.agenda_text),
                      logic.parse_formula(self.constraint_text))

    @cached_property
    def profile(self) -> Profile:
        return Profile.from_signs(self.agenda, self.profile_rows)

    def block(self, name: str) -> tuple[int, ...]:
        try:
            return tuple(self.blocks[name])
        except KeyError:
            raise AgendaError(f"no block named {name!r}") from None


def load_fixture(name: str) -> ProblemDocument:
    """One of the shipped documents: F1, F2, F3, F4 or PREF3."""
    key = name.upper()
    if key not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURES)}")
    text = resources.files("judgagg").joinpath("data", f"{key.lower()}.json").read_text()
    return ProblemDocument.loads(text)

"""Construction traces: which case produced the cycle and with what witnesses."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


class Impasse(Exception):
    """A case's assumed witness does not exist on this input."""


@dataclass
class Event:
    kind: str  # impasse | fallback | gap | over-bound | budget | recurse-oracle
    detail: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


@dataclass
class TraceEntry:
    """One recursion level of a construction.

    Faults and witnesses are in the level's own BH_n coordinates.  ``case``
    is the label the input dispatched to; ``via`` names the sibling
    procedure that produced the cycle when the dispatched one hit an
    impasse.
    """

    depth: int
    n: int
    faults: list
    case: str
    frame: dict | None = None
    split_dim: int | None = None
    cross_count: int | None = None
    counts: list | None = None  # |F^j| in role order
    via: str | None = None
    witnesses: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def add_event(self, kind: str, detail: str) -> None:
        self.events.append(Event(kind, detail))

    def to_json(self) -> dict:
        d = asdict(self)
        d["faults"] = [list(e) for e in self.faults]
        d["events"] = [e.to_json() if isinstance(e, Event) else e for e in self.events]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "TraceEntry":
        d = dict(d)
        d["faults"] = [tuple(e) for e in d["faults"]]
        d["events"] = [Event(**e) for e in d.get("events", [])]
        return cls(**d)


def empty_witnesses() -> dict:
    return {"cross_edges": [], "r_edges": [], "pivots": [], "isolated": [], "named": {}}


@dataclass
class CaseTrace:
    entries: list = field(default_factory=list)

    def add(self, entry: TraceEntry) -> TraceEntry:
        self.entries.append(entry)
        return entry

    @property
    def top(self) -> TraceEntry:
        return self.entries[0]

    def labels(self) -> list[str]:
        return [e.via or e.case for e in self.entries]

    def case_path(self) -> list[str]:
        out = []
        for e in self.entries:
            out.append(e.case if not e.via else f"{e.case}->{e.via}")
        return out

    def events(self) -> list[Event]:
        return [ev for e in self.entries for ev in e.events]

    def has_fallback(self) -> bool:
        return any(ev.kind == "fallback" for ev in self.events())

    def to_json(self) -> str:
        return json.dumps({"levels": [e.to_json() for e in self.entries]}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CaseTrace":
        doc = json.loads(text)
        return cls([TraceEntry.from_json(d) for d in doc["levels"]])

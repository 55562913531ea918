"""Protocol transcripts and the verifier/audit split.

Every public action on the table appends an :class:`Event`. Fields the
verifier could not observe (shuffle offsets, values of secretly placed cards,
card identity tags) live in ``Event.private`` and are dropped by
:func:`verifier_view`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

PUBLIC_PLACEMENT = "public_placement"
SECRET_PLACEMENT = "secret_placement"
SHUFFLE = "shuffle"
REVEAL = "reveal"
SHIFT = "shift"
REPLACE = "replace"
CLAIM = "claim"
COLLECT = "collect"

EVENT_TYPES = (PUBLIC_PLACEMENT, SECRET_PLACEMENT, SHUFFLE, REVEAL, SHIFT, REPLACE, CLAIM, COLLECT)

# per event type, the keys that only ever appear in the audit view
AUDIT_FIELDS = {
    PUBLIC_PLACEMENT: {"ids"},
    SECRET_PLACEMENT: {"values", "ids"},
    SHUFFLE: {"offset"},
    REVEAL: {"ids"},
    SHIFT: set(),
    REPLACE: {"removed_id", "added_id"},
    CLAIM: set(),
    COLLECT: {"values", "ids"},
}


@dataclass
class Event:
    type: str
    public: Dict[str, Any] = field(default_factory=dict)
    private: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self, audit: bool = False) -> Dict[str, Any]:
        out = {"type": self.type}
        out.update(self.public)
        if audit:
            out.update(self.private)
        return out


@dataclass
class Transcript:
    events: List[Event] = field(default_factory=list)
    verdict: Optional[str] = None
    view: str = "audit"
    enabled: bool = True

    def log(self, type: str, private: Optional[Dict[str, Any]] = None, **public) -> None:
        if self.enabled:
            self.events.append(Event(type, public, private or {}))

    def claim(self, clue: int, phase: str) -> None:
        self.log(CLAIM, clue=clue, phase=phase)

    def reveals(self) -> List[Event]:
        return [e for e in self.events if e.type == REVEAL]

    def to_dict(self) -> Dict[str, Any]:
        audit = self.view == "audit"
        return {
            "events": [e.to_dict(audit) for e in self.events],
            "verdict": self.verdict,
            "view": self.view,
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Transcript":
        """Rebuild a transcript; audit-only keys go back into ``private``."""
        events = []
        for raw in data["events"]:
            raw = dict(raw)
            kind = raw.pop("type")
            private = {k: raw.pop(k) for k in list(raw) if k in AUDIT_FIELDS.get(kind, ())}
            events.append(Event(kind, raw, private))
        return cls(events, data.get("verdict"), data.get("view", "audit"))


def verifier_view(t: Transcript) -> Transcript:
    """Copy of ``t`` holding only what the verifier saw."""
    return Transcript([Event(e.type, dict(e.public), {}) for e in t.events], t.verdict, "verifier")


def canonical_reveal_sequence(view: Transcript) -> List[tuple]:
    """Revealed values in order, with positional information removed.

    A row reveal contributes its sorted values (the position of the single 1 is
    shuffle noise); a single-card reveal contributes its one value.
    """
    return [(e.public["label"], tuple(sorted(e.public["values"]))) for e in view.events if e.type == REVEAL]


def skeleton(view: Transcript) -> List[tuple]:
    """Position-free shape of a view: event kinds, labels and fixed payloads."""
    out = []
    for e in view.events:
        p = e.public
        if e.type == REVEAL:
            out.append((e.type, p["label"], tuple(sorted(p["values"]))))
        elif e.type == SHUFFLE:
            out.append((e.type, p["label"], tuple(p["shape"])))
        elif e.type in (SHIFT,):
            out.append((e.type, p["label"]))
        elif e.type == REPLACE:
            out.append((e.type, p["label"], p["old"], p["new"]))
        elif e.type == PUBLIC_PLACEMENT:
            out.append((e.type, p["label"], tuple(p["values"])))
        elif e.type in (SECRET_PLACEMENT, COLLECT):
            out.append((e.type, p["label"], p["count"]))
        else:
            out.append((e.type, p["clue"], p["phase"]))
    return out

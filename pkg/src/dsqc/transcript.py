"""Protocol transcript events and their serialized forms.

The machine-readable form is one JSON document per run; the log form is one
``key=value`` line per event.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import ClassVar

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class QubitTransfer:
    kind: ClassVar[str] = "qubit_transfer"
    count: int


@dataclass(frozen=True)
class Ack:
    kind: ClassVar[str] = "ack"


@dataclass(frozen=True)
class PermutationDisclosure:
    kind: ClassVar[str] = "permutation_disclosure"
    mapping: tuple[int, ...]
    decoy_pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DecoyCheckResult:
    kind: ClassVar[str] = "decoy_check"
    checked: int
    failures: int
    error_rate: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class EncodedBlockIndex:
    kind: ClassVar[str] = "encoded"
    copy: int


@dataclass(frozen=True)
class SwapAnnouncement:
    kind: ClassVar[str] = "announcement"
    copy: int
    first: str
    second: str


@dataclass(frozen=True)
class DecodeResult:
    kind: ClassVar[str] = "decode"
    copy: int
    bits: str | None
    error: str | None = None


EVENT_TYPES = {
    cls.kind: cls
    for cls in (
        QubitTransfer, Ack, PermutationDisclosure, DecoyCheckResult,
        EncodedBlockIndex, SwapAnnouncement, DecodeResult,
    )
}

Event = (
    QubitTransfer | Ack | PermutationDisclosure | DecoyCheckResult
    | EncodedBlockIndex | SwapAnnouncement | DecodeResult
)


def event_to_dict(event: Event) -> dict:
    return {"event": event.kind, **asdict(event)}


def event_from_dict(d: dict) -> Event:
    d = dict(d)
    cls = EVENT_TYPES[d.pop("event")]
    kwargs = {}
    for f in fields(cls):
        if f.name not in d:
            continue
        value = d[f.name]
        if f.name == "mapping":
            value = tuple(value)
        elif f.name == "decoy_pairs":
            value = tuple(tuple(p) for p in value)
        kwargs[f.name] = value
    return cls(**kwargs)


@dataclass
class Transcript:
    config: dict
    message: str
    events: list = field(default_factory=list)
    eve: dict = field(default_factory=dict)

    def record(self, event: Event) -> None:
        self.events.append(event)

    @property
    def decoy_check(self) -> DecoyCheckResult | None:
        for ev in self.events:
            if isinstance(ev, DecoyCheckResult):
                return ev
        return None

    @property
    def aborted(self) -> bool:
        check = self.decoy_check
        return check is not None and not check.passed

    @property
    def decoded_bits(self) -> str | None:
        """Concatenated per-copy bits, or None if any copy failed to decode."""
        results = [ev for ev in self.events if isinstance(ev, DecodeResult)]
        if any(r.bits is None for r in results):
            return None
        return "".join(r.bits for r in results)

    @property
    def decoded_message(self) -> str | None:
        bits = self.decoded_bits
        return None if bits is None or self.aborted else bits[: len(self.message)]

    @property
    def success(self) -> bool:
        return not self.aborted and self.decoded_message == self.message

    def summary(self) -> dict:
        check = self.decoy_check
        return {
            "sent": self.message,
            "decoded": self.decoded_message,
            "aborted": self.aborted,
            "error_rate": None if check is None else check.error_rate,
            "success": self.success,
        }

    def to_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "message": self.message,
            "events": [event_to_dict(ev) for ev in self.events],
            "eve": self.eve,
            "summary": self.summary(),
        }

    @classmethod
    def from_document(cls, doc: dict) -> Transcript:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported transcript schema {doc.get('schema_version')!r}")
        return cls(
            config=doc["config"],
            message=doc["message"],
            events=[event_from_dict(e) for e in doc["events"]],
            eve=doc.get("eve", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Transcript:
        return cls.from_document(json.loads(text))

    def to_log(self) -> str:
        lines = []
        for seq, ev in enumerate(self.events):
            parts = [f"seq={seq}", f"event={ev.kind}"]
            for key, value in asdict(ev).items():
                parts.append(f"{key}={json.dumps(value, separators=(',', ':'))}")
            lines.append(" ".join(parts))
        summary = self.summary()
        lines.append("summary " + " ".join(f"{k}={json.dumps(v)}" for k, v in summary.items()))
        return "\n".join(lines) + "\n"

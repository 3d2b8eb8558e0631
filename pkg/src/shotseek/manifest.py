"""Collection manifest: domain types, line-record parsing, serialization.

A manifest file is UTF-8, one JSON object per line, each tagged with
``"kind"``:

* shot record: ``{"kind": "shot", "video_id", "shot_id", "start_ms",
  "end_ms", "keyframe"}``
* doc record:  ``{"kind": "doc", "video_id", "shot_id", "channel", "text"}``

Invalid records abort parsing; nothing is skipped or repaired, since a
silently dropped record would corrupt downstream ground truth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .color import ColorProfile
from .errors import DanglingDocument, DuplicateShot, MalformedRecord
from .text import tokenize

CHANNELS = ("ASR", "ACTION", "CONCEPT", "CAPTION", "OCR")

ShotKey = tuple[str, str]


@dataclass(frozen=True)
class ShotDescriptor:
    """One video shot: identity, temporal extent, keyframe, color profile."""

    video_id: str
    shot_id: str
    start_ms: int
    end_ms: int
    keyframe: str
    color: ColorProfile | None = None

    @property
    def key(self) -> ShotKey:
        return (self.video_id, self.shot_id)

    def with_color(self, profile: ColorProfile) -> "ShotDescriptor":
        return replace(self, color=profile)

    def to_record(self) -> dict:
        return {
            "kind": "shot",
            "video_id": self.video_id,
            "shot_id": self.shot_id,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "keyframe": self.keyframe,
        }


@dataclass(frozen=True)
class TextDocument:
    """One text channel attached to a shot; tokens derive from text."""

    video_id: str
    shot_id: str
    channel: str
    text: str
    tokens: tuple[str, ...] = ()

    @property
    def key(self) -> ShotKey:
        return (self.video_id, self.shot_id)

    @classmethod
    def make(cls, video_id: str, shot_id: str, channel: str, text: str) -> "TextDocument":
        return cls(video_id, shot_id, channel, text, tuple(tokenize(text)))

    def to_record(self) -> dict:
        return {
            "kind": "doc",
            "video_id": self.video_id,
            "shot_id": self.shot_id,
            "channel": self.channel,
            "text": self.text,
        }


@dataclass
class CollectionManifest:
    collection_id: str
    shots: list[ShotDescriptor] = field(default_factory=list)
    documents: list[TextDocument] = field(default_factory=list)

    def shot_table(self) -> dict[ShotKey, ShotDescriptor]:
        return {s.key: s for s in self.shots}


def _require(record: dict, name: str, kind: type, line_no: int):
    if name not in record:
        raise MalformedRecord(line_no, f"missing field {name!r}")
    value = record[name]
    # bool is an int subclass and must not pass as a millisecond count
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise MalformedRecord(line_no, f"field {name!r} must be {kind.__name__}")
    return value


def _parse_shot(record: dict, line_no: int) -> ShotDescriptor:
    video_id = _require(record, "video_id", str, line_no)
    shot_id = _require(record, "shot_id", str, line_no)
    start_ms = _require(record, "start_ms", int, line_no)
    end_ms = _require(record, "end_ms", int, line_no)
    keyframe = _require(record, "keyframe", str, line_no)
    if start_ms < 0:
        raise MalformedRecord(line_no, f"start_ms must be >= 0, got {start_ms}")
    if start_ms >= end_ms:
        raise MalformedRecord(line_no, f"empty interval: start_ms {start_ms} >= end_ms {end_ms}")
    return ShotDescriptor(video_id, shot_id, start_ms, end_ms, keyframe)


def _parse_doc(record: dict, line_no: int) -> TextDocument:
    video_id = _require(record, "video_id", str, line_no)
    shot_id = _require(record, "shot_id", str, line_no)
    channel = _require(record, "channel", str, line_no)
    text = _require(record, "text", str, line_no)
    if channel not in CHANNELS:
        raise MalformedRecord(line_no, f"unknown channel {channel!r}")
    return TextDocument.make(video_id, shot_id, channel, text)


def parse_manifest_lines(lines: Iterable[str], collection_id: str = "") -> CollectionManifest:
    shots: list[ShotDescriptor] = []
    documents: list[TextDocument] = []
    seen: dict[ShotKey, int] = {}
    last_per_video: dict[str, ShotDescriptor] = {}

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise MalformedRecord(line_no, f"invalid JSON: {e.msg}") from e
        if not isinstance(record, dict):
            raise MalformedRecord(line_no, "record is not an object")
        kind = record.get("kind")
        if kind == "shot":
            shot = _parse_shot(record, line_no)
            if shot.key in seen:
                raise DuplicateShot(
                    f"line {line_no}: shot {shot.key} already defined at line {seen[shot.key]}"
                )
            prev = last_per_video.get(shot.video_id)
            if prev is not None:
                if shot.start_ms < prev.start_ms:
                    raise MalformedRecord(
                        line_no, f"shots of video {shot.video_id!r} not sorted by start_ms"
                    )
                if shot.start_ms < prev.end_ms:
                    raise MalformedRecord(
                        line_no,
                        f"shot {shot.shot_id!r} overlaps {prev.shot_id!r} in video {shot.video_id!r}",
                    )
            seen[shot.key] = line_no
            last_per_video[shot.video_id] = shot
            shots.append(shot)
        elif kind == "doc":
            documents.append(_parse_doc(record, line_no))
        else:
            raise MalformedRecord(line_no, f"unknown kind {kind!r}")

    for doc in documents:
        if doc.key not in seen:
            raise DanglingDocument(f"document references unknown shot {doc.key}")

    return CollectionManifest(collection_id=collection_id, shots=shots, documents=documents)


def parse_manifest(path: str | Path, collection_id: str | None = None) -> CollectionManifest:
    """Parse a newline-delimited manifest file, rejecting invalid records.

    Raises MalformedRecord (with line number and reason), DuplicateShot, or
    DanglingDocument. The collection id defaults to the file stem.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        return parse_manifest_lines(fh, collection_id if collection_id is not None else path.stem)


def serialize_manifest(manifest: CollectionManifest) -> str:
    """Render a manifest back to its line-record form (shots, then docs)."""
    lines = [json.dumps(s.to_record(), sort_keys=True) for s in manifest.shots]
    lines += [json.dumps(d.to_record(), sort_keys=True) for d in manifest.documents]
    return "\n".join(lines) + ("\n" if lines else "")


def write_manifest(manifest: CollectionManifest, path: str | Path) -> None:
    Path(path).write_text(serialize_manifest(manifest), encoding="utf-8")

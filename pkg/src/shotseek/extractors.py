"""Pluggable per-shot text extractors.

Real feature extraction (action recognition, speech-to-text, captioning)
lives behind this seam; the in-repo implementation is a deterministic stub
that reads pre-computed annotations from a sidecar file. Sidecar records
use the manifest doc shape minus the kind tag:
``{"video_id", "shot_id", "channel", "text"}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

from .errors import ExtractorFailure, MalformedRecord
from .manifest import CHANNELS, ShotDescriptor, ShotKey, TextDocument


@runtime_checkable
class Extractor(Protocol):
    """An extractor declares its output channel and emits text per shot."""

    name: str
    channel: str

    def extract(self, shot: ShotDescriptor) -> str | None:
        """Return the channel text for the shot, or None when silent."""
        ...


def load_sidecar(path: str | Path) -> dict[tuple[ShotKey, str], str]:
    """Load sidecar annotations keyed by ((video_id, shot_id), channel).

    Repeated keys append with a space so multi-line annotations stay legal.
    """
    entries: dict[tuple[ShotKey, str], str] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(line_no, f"invalid JSON: {e.msg}") from e
            try:
                key = ((record["video_id"], record["shot_id"]), record["channel"])
                text = record["text"]
            except (KeyError, TypeError) as e:
                raise MalformedRecord(line_no, f"incomplete sidecar record: {e}") from e
            if record["channel"] not in CHANNELS:
                raise MalformedRecord(line_no, f"unknown channel {record['channel']!r}")
            entries[key] = f"{entries[key]} {text}" if key in entries else text
    return entries


class SidecarExtractor:
    """Deterministic stub extractor backed by a sidecar annotation file."""

    def __init__(self, annotations: dict[tuple[ShotKey, str], str], channel: str):
        self.channel = channel
        self.name = f"sidecar:{channel.lower()}"
        self._annotations = annotations

    @classmethod
    def load_all(cls, path: str | Path) -> list["SidecarExtractor"]:
        """One extractor per channel present in the sidecar file."""
        annotations = load_sidecar(path)
        present = {channel for (_, channel) in annotations}
        return [cls(annotations, c) for c in CHANNELS if c in present]

    def extract(self, shot: ShotDescriptor) -> str | None:
        return self._annotations.get((shot.key, self.channel))


def run_extractors(
    shot: ShotDescriptor,
    extractors: Iterable[Extractor],
    failures: list[ExtractorFailure] | None = None,
) -> list[TextDocument]:
    """Run every extractor over one shot, in channel order.

    A failing plugin is recorded (appended to ``failures`` when given) and
    does not stop the rest. Identical inputs produce identical output.
    """
    ordered = sorted(extractors, key=lambda e: (CHANNELS.index(e.channel), e.name))
    docs: list[TextDocument] = []
    for extractor in ordered:
        try:
            text = extractor.extract(shot)
        except Exception as e:  # noqa: BLE001 - plugin isolation boundary
            if failures is not None:
                failures.append(ExtractorFailure(extractor.name, e))
            continue
        if text is not None:
            docs.append(TextDocument.make(shot.video_id, shot.shot_id, extractor.channel, text))
    return docs

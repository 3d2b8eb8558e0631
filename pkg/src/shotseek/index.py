"""Inverted index over manifest text channels, with directory persistence.

One scoring document per (shot, channel); multiple manifest documents for
the same pair concatenate their tokens in manifest order. The index is
immutable after build and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .color import ColorProfile
from .manifest import CollectionManifest, ShotDescriptor, ShotKey

INDEX_FILE = "index.json"


@dataclass
class ChannelIndex:
    # token -> [(shot key, term frequency)], sorted by shot key
    postings: dict[str, list[tuple[ShotKey, int]]] = field(default_factory=dict)
    doc_lengths: dict[ShotKey, int] = field(default_factory=dict)
    doc_count: int = 0

    @property
    def avg_length(self) -> float:
        return sum(self.doc_lengths.values()) / self.doc_count if self.doc_count else 0.0


@dataclass
class Index:
    collection_id: str
    channels: dict[str, ChannelIndex] = field(default_factory=dict)
    shots: dict[ShotKey, ShotDescriptor] = field(default_factory=dict)


def build_index(manifest: CollectionManifest) -> Index:
    """Build the per-channel postings from a valid manifest.

    Deterministic: rebuilding from the same manifest yields an identical
    index, including serialization bytes.
    """
    index = Index(collection_id=manifest.collection_id)
    index.shots = manifest.shot_table()

    grouped: dict[str, dict[ShotKey, list[str]]] = {}
    for doc in manifest.documents:
        grouped.setdefault(doc.channel, {}).setdefault(doc.key, []).extend(doc.tokens)

    for channel, docs in grouped.items():
        ch = ChannelIndex()
        for key in sorted(docs):
            tokens = docs[key]
            ch.doc_lengths[key] = len(tokens)
            counts: dict[str, int] = {}
            for token in tokens:
                counts[token] = counts.get(token, 0) + 1
            for token, tf in counts.items():
                ch.postings.setdefault(token, []).append((key, tf))
        ch.doc_count = len(docs)
        # keys were visited in sorted order, so postings lists are sorted
        index.channels[channel] = ch
    return index


def save_index(index: Index, out_dir: str | Path) -> Path:
    """Persist the index to a directory; returns the index file path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "collection_id": index.collection_id,
        "shots": [
            {
                "video_id": s.video_id,
                "shot_id": s.shot_id,
                "start_ms": s.start_ms,
                "end_ms": s.end_ms,
                "keyframe": s.keyframe,
                "color": s.color.to_dict() if s.color else None,
            }
            for s in index.shots.values()
        ],
        "channels": {
            channel: {
                "doc_count": ch.doc_count,
                "doc_lengths": [[v, s, n] for (v, s), n in ch.doc_lengths.items()],
                "postings": {
                    token: [[v, s, tf] for (v, s), tf in entries]
                    for token, entries in ch.postings.items()
                },
            }
            for channel, ch in index.channels.items()
        },
    }
    path = out_dir / INDEX_FILE
    path.write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")
    return path


def load_index(index_dir: str | Path) -> Index:
    """Load a saved index; load(save(x)) is query-identical to x."""
    payload = json.loads((Path(index_dir) / INDEX_FILE).read_text(encoding="utf-8"))
    index = Index(collection_id=payload["collection_id"])
    for rec in payload["shots"]:
        color = ColorProfile.from_dict(rec["color"]) if rec.get("color") else None
        shot = ShotDescriptor(
            rec["video_id"], rec["shot_id"], rec["start_ms"], rec["end_ms"], rec["keyframe"], color
        )
        index.shots[shot.key] = shot
    for channel, ch_payload in payload["channels"].items():
        ch = ChannelIndex(doc_count=ch_payload["doc_count"])
        ch.doc_lengths = {(v, s): n for v, s, n in ch_payload["doc_lengths"]}
        ch.postings = {
            token: [((v, s), tf) for v, s, tf in entries]
            for token, entries in ch_payload["postings"].items()
        }
        index.channels[channel] = ch
    return index

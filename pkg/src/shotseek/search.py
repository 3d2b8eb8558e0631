"""Ranked query execution: per-channel scoring, late fusion, filters.

Scoring is Okapi-style (k1=1.2, b=0.75) per channel; channels fuse by
weighted sum, scores normalize against the max raw score of the result
set, and the score/color filters run after normalization without
renormalizing. Everything here is pure and deterministic; ties break by
(video_id, shot_id) ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .color import COLOR_BINS, NO_COLOR
from .errors import UnknownChannel
from .index import Index
from .manifest import CHANNELS, ShotDescriptor, ShotKey
from .text import tokenize

K1 = 1.2
B = 0.75

DEFAULT_LIMIT = 1000

_VALID_COLORS = set(COLOR_BINS) | {NO_COLOR}


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


@dataclass(frozen=True)
class QuerySpec:
    """A validated text query with fusion weights and optional filters."""

    text: str
    channels: tuple[str, ...] = ()  # empty means all channels
    fusion_weights: Mapping[str, float] = field(default_factory=dict)  # default 1.0 each
    score_threshold: float | None = None
    color_filter: str | None = None
    limit: int = DEFAULT_LIMIT

    def validate(self) -> None:
        if not isinstance(self.limit, int) or isinstance(self.limit, bool) or self.limit < 1:
            raise ValueError(f"limit must be a positive integer, got {self.limit!r}")
        if self.score_threshold is not None:
            if not _is_number(self.score_threshold) or not 0.0 <= self.score_threshold <= 1.0:
                raise ValueError(f"score_threshold must be in [0, 1], got {self.score_threshold!r}")
        for channel in self.channels:
            if channel not in CHANNELS:
                raise ValueError(f"unknown channel {channel!r}")
        for channel, weight in self.fusion_weights.items():
            if channel not in CHANNELS:
                raise ValueError(f"unknown channel {channel!r} in weights")
            if not _is_number(weight) or not weight >= 0.0:
                raise ValueError(f"weight for {channel} must be non-negative, got {weight!r}")
        if self.color_filter is not None and self.color_filter not in _VALID_COLORS:
            raise ValueError(f"unknown color {self.color_filter!r}")

    def weight(self, channel: str) -> float:
        return float(self.fusion_weights.get(channel, 1.0))

    def to_payload(self) -> dict:
        payload: dict = {
            "text": self.text,
            "channels": list(self.channels),
            "weights": dict(self.fusion_weights),
            "limit": self.limit,
        }
        if self.score_threshold is not None:
            payload["score_threshold"] = self.score_threshold
        if self.color_filter is not None:
            payload["color_filter"] = self.color_filter
        return payload

    @classmethod
    def from_payload(cls, payload: Mapping) -> "QuerySpec":
        if not isinstance(payload.get("text"), str):
            raise ValueError("field 'text' must be a string")
        channels = payload.get("channels", [])
        weights = payload.get("weights", {})
        if not isinstance(channels, (list, tuple)):
            raise ValueError("field 'channels' must be a list")
        if not isinstance(weights, Mapping):
            raise ValueError("field 'weights' must be an object")
        limit = payload.get("limit", DEFAULT_LIMIT)
        spec = cls(
            text=payload["text"],
            channels=tuple(channels),
            fusion_weights=dict(weights),
            score_threshold=payload.get("score_threshold"),
            color_filter=payload.get("color_filter"),
            limit=limit,
        )
        spec.validate()
        return spec


@dataclass(frozen=True)
class RankedResult:
    video_id: str
    shot_id: str
    raw_score: float
    score: float  # normalized to (0, 1], max of the list is 1.0
    per_channel: dict[str, float] = field(default_factory=dict)

    @property
    def key(self) -> ShotKey:
        return (self.video_id, self.shot_id)

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "shot_id": self.shot_id,
            "raw_score": self.raw_score,
            "score": self.score,
            "per_channel": dict(self.per_channel),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RankedResult":
        return cls(d["video_id"], d["shot_id"], d["raw_score"], d["score"], dict(d["per_channel"]))


def score_text(index: Index, tokens: Sequence[str], channel: str) -> list[tuple[ShotKey, float]]:
    """Okapi-style scores for one channel, zero-score shots omitted.

    idf = ln(1 + (N - df + 0.5) / (df + 0.5)); repeated query tokens count
    every occurrence. Results sort by descending score, then shot key.
    """
    if channel not in index.channels:
        raise UnknownChannel(f"channel {channel!r} not present in index")
    ch = index.channels[channel]
    n = ch.doc_count
    avg_len = ch.avg_length
    scores: dict[ShotKey, float] = {}
    for token in tokens:
        entries = ch.postings.get(token)
        if not entries:
            continue
        df = len(entries)
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for key, tf in entries:
            norm = tf + K1 * (1.0 - B + B * ch.doc_lengths[key] / avg_len)
            scores[key] = scores.get(key, 0.0) + idf * tf * (K1 + 1.0) / norm
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))


def execute_query(index: Index, q: QuerySpec) -> list[RankedResult]:
    """Score, fuse, normalize, sort, filter, truncate.

    Channels fuse in canonical channel order by weighted sum; the
    normalized score divides by the maximum raw score, so the head of a
    non-empty result list always scores exactly 1.0.
    """
    q.validate()
    tokens = tokenize(q.text)
    wanted = set(q.channels) if q.channels else set(CHANNELS)

    fused: dict[ShotKey, float] = {}
    per_channel: dict[ShotKey, dict[str, float]] = {}
    for channel in CHANNELS:
        if channel not in wanted or channel not in index.channels:
            continue
        weight = q.weight(channel)
        if weight == 0.0:
            continue
        for key, raw in score_text(index, tokens, channel):
            contribution = weight * raw
            fused[key] = fused.get(key, 0.0) + contribution
            per_channel.setdefault(key, {})[channel] = contribution

    if not fused:
        return []
    max_raw = max(fused.values())
    results = [
        RankedResult(
            video_id=key[0],
            shot_id=key[1],
            raw_score=raw,
            score=raw / max_raw,
            per_channel=per_channel[key],
        )
        for key, raw in fused.items()
    ]
    results.sort(key=lambda r: (-r.raw_score, r.key))
    results = apply_filters(results, q, index.shots)
    return results[: q.limit]


def apply_filters(
    results: list[RankedResult],
    q: QuerySpec,
    shots: Mapping[ShotKey, ShotDescriptor],
) -> list[RankedResult]:
    """Keep results passing the score threshold and dominant-color filter.

    Order is preserved and scores are not renormalized, so tightening a
    threshold never moves the surviving scores. Shots without a color
    profile count as dominant NONE.
    """
    kept = results
    if q.score_threshold is not None:
        threshold = q.score_threshold
        kept = [r for r in kept if r.score >= threshold]
    if q.color_filter is not None:
        wanted = q.color_filter

        def dominant(r: RankedResult) -> str:
            shot = shots.get(r.key)
            return shot.color.dominant if shot is not None and shot.color else NO_COLOR

        kept = [r for r in kept if dominant(r) == wanted]
    return kept


class SearchEngine:
    """Query entry point with an invocation counter.

    The counter exists so callers (history replay in particular) can prove
    they did not touch the retrieval back-end.
    """

    def __init__(self, index: Index):
        self.index = index
        self.invocations = 0

    def execute(self, q: QuerySpec) -> list[RankedResult]:
        self.invocations += 1
        return execute_query(self.index, q)

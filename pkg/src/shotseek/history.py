"""Per-session query history with zero-cost result replay.

Every executed query is recorded together with a frozen snapshot of its
full result list, so any previous result reloads without touching the
retrieval engine. History is in-memory, per session, capped, and evicts
oldest first; entry ids keep counting up across evictions.
"""

from __future__ import annotations

import json
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import UnknownEntry
from .search import QuerySpec, RankedResult

DEFAULT_CAP = 256


def results_to_bytes(results: Sequence[RankedResult]) -> bytes:
    """Canonical serialization used for snapshots and byte-identity checks."""
    return json.dumps(
        [r.to_dict() for r in results], sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def results_from_bytes(data: bytes) -> list[RankedResult]:
    return [RankedResult.from_dict(d) for d in json.loads(data.decode("utf-8"))]


@dataclass(frozen=True)
class HistorySummary:
    entry_id: int
    issued_at: float
    spec: QuerySpec


class QueryHistory:
    """Append-only history of (query, results) snapshots for one session."""

    def __init__(self, cap: int = DEFAULT_CAP, now: Callable[[], float] = time.time):
        if cap < 1:
            raise ValueError("cap must be positive")
        self._cap = cap
        self._now = now
        self._entries: OrderedDict[int, tuple[float, QuerySpec, bytes]] = OrderedDict()
        self._next_id = 1

    def __len__(self) -> int:
        return len(self._entries)

    def record(self, spec: QuerySpec, results: Sequence[RankedResult]) -> int:
        """Store an immutable snapshot; returns the new entry id (1, 2, ...)."""
        entry_id = self._next_id
        self._next_id += 1
        self._entries[entry_id] = (self._now(), spec, results_to_bytes(results))
        while len(self._entries) > self._cap:
            self._entries.popitem(last=False)
        return entry_id

    def list_entries(self) -> list[HistorySummary]:
        """Summaries in descending entry-id order, result payloads excluded."""
        return [
            HistorySummary(entry_id, issued_at, spec)
            for entry_id, (issued_at, spec, _) in reversed(self._entries.items())
        ]

    def reload(self, entry_id: int) -> list[RankedResult]:
        """Return the stored snapshot; never calls the query engine."""
        return results_from_bytes(self.snapshot_bytes(entry_id))

    def snapshot_bytes(self, entry_id: int) -> bytes:
        try:
            return self._entries[entry_id][2]
        except KeyError:
            raise UnknownEntry(f"no history entry {entry_id}") from None

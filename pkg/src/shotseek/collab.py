"""Shared color labels across the user interfaces of one team session.

The hub assigns every accepted label event a strictly increasing, gapless
sequence number per session and delivers it to all joined peers in that
order, including the sender. State is a pure fold over the event log:
last writer wins per item, NONE clears, and the reserved submitted_red
(applied by the judge on accepted submissions) is sticky and can never be
recolored or cleared.

Events of one session serialize through a single lock, so concurrent
arrival from several peers is safe; different sessions are independent.
Delivery callbacks run under that lock and must not block.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import DuplicatePeerId, NotJoined, ReservedColor, SubmittedLocked
from .manifest import ShotKey

COLOR_NONE = "none"
COLOR_GREEN = "green"
COLOR_BLUE = "blue"
COLOR_YELLOW = "yellow"
COLOR_SUBMITTED = "submitted_red"

USER_COLORS = (COLOR_GREEN, COLOR_BLUE, COLOR_YELLOW)
ALL_COLORS = (COLOR_NONE,) + USER_COLORS + (COLOR_SUBMITTED,)

JUDGE_PEER = "judge"

Item = ShotKey


@dataclass(frozen=True)
class LabelEvent:
    session_id: str
    seq: int
    peer_id: str
    item: Item
    color: str

    def to_frame(self) -> dict:
        return {
            "type": "event",
            "seq": self.seq,
            "peer": self.peer_id,
            "item": {"video": self.item[0], "shot": self.item[1]},
            "color": self.color,
        }


@dataclass(frozen=True)
class LabelRecord:
    color: str
    seq: int
    peer_id: str


@dataclass
class SessionState:
    session_id: str
    labels: dict[Item, LabelRecord] = field(default_factory=dict)
    last_seq: int = 0

    def to_snapshot_frame(self) -> dict:
        return {
            "type": "snapshot",
            "last_seq": self.last_seq,
            "labels": [
                {
                    "item": {"video": item[0], "shot": item[1]},
                    "color": rec.color,
                    "seq": rec.seq,
                    "peer": rec.peer_id,
                }
                for item, rec in sorted(self.labels.items())
            ],
        }


def apply_to_labels(labels: dict[Item, LabelRecord], event: LabelEvent) -> None:
    """The single fold step shared by live state and log replay."""
    current = labels.get(event.item)
    if current is not None and current.color == COLOR_SUBMITTED:
        return  # sticky; a well-formed log never reaches this
    if event.color == COLOR_NONE:
        labels.pop(event.item, None)
    else:
        labels[event.item] = LabelRecord(event.color, event.seq, event.peer_id)


def fold_events(events: Iterable[LabelEvent], session_id: str = "") -> SessionState:
    """Replay an event log from scratch into a SessionState."""
    state = SessionState(session_id=session_id)
    for event in events:
        apply_to_labels(state.labels, event)
        state.last_seq = event.seq
    return state


class _Session:
    def __init__(self, session_id: str):
        self.session_id = session_id
        self.lock = threading.Lock()
        self.labels: dict[Item, LabelRecord] = {}
        self.last_seq = 0
        self.log: list[LabelEvent] = []
        self.peers: dict[str, Callable[[LabelEvent], None]] = {}


def _noop(_: LabelEvent) -> None:
    pass


class SessionHub:
    """Coordination point for all collab sessions of one server."""

    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, _Session] = {}

    def _session(self, session_id: str) -> _Session:
        with self._lock:
            if session_id not in self._sessions:
                self._sessions[session_id] = _Session(session_id)
            return self._sessions[session_id]

    def join(
        self,
        session_id: str,
        peer_id: str,
        deliver: Callable[[LabelEvent], None] | None = None,
    ) -> SessionState:
        """Register a peer and return a state snapshot (sessions auto-create).

        ``deliver`` receives every subsequent event of the session, in seq
        order, starting strictly after the snapshot's last_seq.
        """
        if peer_id == JUDGE_PEER:
            # the judge is implicitly a permanent member of every session
            raise DuplicatePeerId(f"peer id {JUDGE_PEER!r} is reserved")
        session = self._session(session_id)
        with session.lock:
            if peer_id in session.peers:
                raise DuplicatePeerId(f"peer {peer_id!r} already joined {session_id!r}")
            session.peers[peer_id] = deliver or _noop
            return SessionState(session_id, dict(session.labels), session.last_seq)

    def leave(self, session_id: str, peer_id: str) -> None:
        session = self._session(session_id)
        with session.lock:
            session.peers.pop(peer_id, None)

    def apply_event(self, session_id: str, peer_id: str, item: Item, color: str) -> LabelEvent:
        """Order, apply, and broadcast one label event from a joined peer.

        Rejected events (sticky violation, reserved color, unknown color)
        consume no sequence number and are not broadcast.
        """
        session = self._session(session_id)
        with session.lock:
            if peer_id != JUDGE_PEER and peer_id not in session.peers:
                raise NotJoined(f"peer {peer_id!r} has not joined {session_id!r}")
            if color not in ALL_COLORS:
                raise ValueError(f"unknown color {color!r}")
            if color == COLOR_SUBMITTED and peer_id != JUDGE_PEER:
                raise ReservedColor(f"color {COLOR_SUBMITTED!r} is reserved for the judge")
            current = session.labels.get(item)
            if current is not None and current.color == COLOR_SUBMITTED:
                if color == COLOR_SUBMITTED:
                    return LabelEvent(session_id, current.seq, current.peer_id, item, current.color)
                raise SubmittedLocked(f"item {item} is locked by a submission")
            event = LabelEvent(session_id, session.last_seq + 1, peer_id, item, color)
            session.last_seq = event.seq
            session.log.append(event)
            apply_to_labels(session.labels, event)
            for deliver in session.peers.values():
                deliver(event)
            return event

    def mark_submitted(self, session_id: str, item: Item) -> int:
        """Color an item submitted_red on behalf of the judge; idempotent.

        Re-marking an already submitted item is a no-op with no broadcast;
        the original seq is returned either way.
        """
        return self.apply_event(session_id, JUDGE_PEER, item, COLOR_SUBMITTED).seq

    def state(self, session_id: str) -> SessionState:
        session = self._session(session_id)
        with session.lock:
            return SessionState(session_id, dict(session.labels), session.last_seq)

    def replay(self, session_id: str) -> SessionState:
        """Refold the session's event log from seq 1; equals live state."""
        session = self._session(session_id)
        with session.lock:
            return fold_events(list(session.log), session_id)

    def event_log(self, session_id: str) -> list[LabelEvent]:
        session = self._session(session_id)
        with session.lock:
            return list(session.log)


def parse_item(obj: Mapping) -> Item:
    """Wire item {"video": v, "shot": s} -> (video_id, shot_id)."""
    video, shot = obj.get("video"), obj.get("shot")
    if not isinstance(video, str) or not isinstance(shot, str):
        raise ValueError("item must carry string fields 'video' and 'shot'")
    return (video, shot)

"""HTTP/WebSocket face of the system.

Endpoints: ``POST /query``, ``GET /history``, ``GET /history/{id}``,
``GET /submit``, ``GET /thumb/{video}/{shot}``, and the collab socket at
``/collab``. Apart from per-session history and collab state the gateway
is stateless; restarting it over the same index and task file reproduces
identical query responses.

Session identity rides on the ``X-Session-Id`` header; anonymous requests
get an ephemeral session whose id is echoed back in the response header.
For submission marking, the ``team`` query parameter doubles as the collab
session id, so user interfaces should join the collab session named after
their team.
"""

from __future__ import annotations

import asyncio
import bisect
import json
import threading
import time
import uuid
from pathlib import Path
from typing import Callable, Sequence

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response

from . import collab
from .collab import SessionHub, parse_item
from .errors import (
    DuplicatePeerId,
    NotJoined,
    ReservedColor,
    SubmittedLocked,
    UnknownEntry,
    UnknownTask,
)
from .history import DEFAULT_CAP, QueryHistory
from .index import Index
from .judge import CORRECT, DUPLICATE, JudgeService, Submission, Task
from .search import DEFAULT_LIMIT, QuerySpec, RankedResult, SearchEngine

SESSION_HEADER = "X-Session-Id"
DEFAULT_PAGE_SIZE = 100


class SessionStore:
    """Per-session query histories, created on first use."""

    def __init__(self, cap: int = DEFAULT_CAP):
        self._cap = cap
        self._lock = threading.Lock()
        self._histories: dict[str, QueryHistory] = {}

    def history(self, session_id: str) -> QueryHistory:
        with self._lock:
            if session_id not in self._histories:
                self._histories[session_id] = QueryHistory(cap=self._cap)
            return self._histories[session_id]


class _ShotLocator:
    """Maps a (video, frame time) submission onto its containing shot."""

    def __init__(self, index: Index):
        self._by_video: dict[str, tuple[list[int], list]] = {}
        per_video: dict[str, list] = {}
        for shot in index.shots.values():
            per_video.setdefault(shot.video_id, []).append(shot)
        for video_id, shots in per_video.items():
            shots.sort(key=lambda s: s.start_ms)
            self._by_video[video_id] = ([s.start_ms for s in shots], shots)

    def locate(self, video_id: str, time_ms: int):
        entry = self._by_video.get(video_id)
        if entry is None:
            return None
        starts, shots = entry
        i = bisect.bisect_right(starts, time_ms) - 1
        if i >= 0 and time_ms < shots[i].end_ms:
            return shots[i]
        return None


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse({"error": detail}, status_code=400)


def _not_found(detail: str) -> JSONResponse:
    return JSONResponse({"error": detail}, status_code=404)


def _page_params(request: Request) -> tuple[int, int]:
    try:
        offset = int(request.query_params.get("offset", "0"))
        page_size = int(request.query_params.get("page_size", str(DEFAULT_PAGE_SIZE)))
    except ValueError:
        raise ValueError("offset and page_size must be integers") from None
    if offset < 0 or page_size < 1:
        raise ValueError("offset must be >= 0 and page_size >= 1")
    return offset, page_size


def _result_page(
    entry_id: int,
    results: Sequence[RankedResult],
    offset: int,
    page_size: int,
    index: Index,
) -> dict:
    page = []
    for r in results[offset : offset + page_size]:
        d = r.to_dict()
        shot = index.shots.get(r.key)
        if shot is not None:
            # the client needs the temporal extent for playback and submission
            d["start_ms"] = shot.start_ms
            d["end_ms"] = shot.end_ms
        page.append(d)
    return {"entry_id": entry_id, "total": len(results), "results": page}


def create_app(
    index: Index,
    tasks: Sequence[Task] = (),
    *,
    thumb_root: str | Path = ".",
    history_cap: int = DEFAULT_CAP,
    result_limit: int = DEFAULT_LIMIT,
    clock: Callable[[], float] = time.monotonic,
) -> FastAPI:
    """Assemble the service around an index and a task list."""
    app = FastAPI(title="shotseek", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=[SESSION_HEADER],
    )

    engine = SearchEngine(index)
    sessions = SessionStore(cap=history_cap)
    hub = SessionHub()
    locator = _ShotLocator(index)

    def on_accept(team: str, task: Task, submission: Submission) -> None:
        shot = locator.locate(submission.video_id, submission.time_ms)
        if shot is not None:
            hub.mark_submitted(team, shot.key)

    judge = JudgeService(tasks, clock=clock, on_accept=on_accept)
    thumb_root = Path(thumb_root)

    app.state.engine = engine
    app.state.hub = hub
    app.state.judge = judge
    app.state.sessions = sessions

    def session_id_of(request: Request) -> str:
        return request.headers.get(SESSION_HEADER) or uuid.uuid4().hex

    @app.exception_handler(Exception)
    async def internal_error(_request: Request, _exc: Exception) -> JSONResponse:
        # never leak internals
        return JSONResponse({"error": "internal server error"}, status_code=500)

    @app.post("/query")
    async def handle_query(request: Request) -> Response:
        session_id = session_id_of(request)
        try:
            offset, page_size = _page_params(request)
            try:
                payload = await request.json()
            except json.JSONDecodeError:
                return _bad_request("body must be valid JSON")
            if not isinstance(payload, dict):
                return _bad_request("body must be a JSON object")
            payload.setdefault("limit", result_limit)
            spec = QuerySpec.from_payload(payload)
        except ValueError as e:
            return _bad_request(str(e))
        results = engine.execute(spec)
        entry_id = sessions.history(session_id).record(spec, results)
        body = _result_page(entry_id, results, offset, page_size, index)
        return JSONResponse(body, headers={SESSION_HEADER: session_id})

    @app.get("/history")
    async def handle_history(request: Request) -> Response:
        session_id = session_id_of(request)
        entries = [
            {"entry_id": s.entry_id, "issued_at": s.issued_at, "spec": s.spec.to_payload()}
            for s in sessions.history(session_id).list_entries()
        ]
        return JSONResponse({"entries": entries}, headers={SESSION_HEADER: session_id})

    @app.get("/history/{entry_id}")
    async def handle_history_reload(request: Request, entry_id: int) -> Response:
        session_id = session_id_of(request)
        try:
            offset, page_size = _page_params(request)
        except ValueError as e:
            return _bad_request(str(e))
        try:
            results = sessions.history(session_id).reload(entry_id)
        except UnknownEntry:
            return _not_found(f"no history entry {entry_id}")
        body = _result_page(entry_id, results, offset, page_size, index)
        return JSONResponse(body, headers={SESSION_HEADER: session_id})

    @app.get("/submit")
    async def handle_submit(request: Request) -> Response:
        params = request.query_params
        missing = [k for k in ("team", "video", "frame_ms", "task") if k not in params]
        if missing:
            return _bad_request(f"missing parameter(s): {', '.join(missing)}")
        try:
            frame_ms = int(params["frame_ms"])
        except ValueError:
            return _bad_request("frame_ms must be an integer")
        try:
            verdict, score = judge.submit(params["team"], params["task"], params["video"], frame_ms)
        except UnknownTask:
            return _not_found(f"no task {params['task']!r}")
        return JSONResponse({"status": verdict.status, "score_so_far": score})

    @app.get("/thumb/{video_id}/{shot_id}")
    async def serve_thumbnail(video_id: str, shot_id: str) -> Response:
        shot = index.shots.get((video_id, shot_id))
        if shot is None:
            return _not_found("unknown shot")
        path = Path(shot.keyframe)
        if not path.is_absolute():
            path = thumb_root / path
        if not path.is_file():
            return _not_found("keyframe missing")
        return FileResponse(path, headers={"Cache-Control": "public, max-age=86400"})

    @app.websocket("/collab")
    async def collab_socket(ws: WebSocket) -> None:
        await ws.accept()
        loop = asyncio.get_running_loop()
        outbox: asyncio.Queue[str] = asyncio.Queue()
        gate = threading.Lock()  # orders the join snapshot before buffered events
        pending: list[collab.LabelEvent] = []
        ready = False
        joined: tuple[str, str] | None = None

        def enqueue(frame: str) -> None:
            loop.call_soon_threadsafe(outbox.put_nowait, frame)

        def deliver(event: collab.LabelEvent) -> None:
            nonlocal ready
            with gate:
                if ready:
                    enqueue(json.dumps(event.to_frame()))
                else:
                    pending.append(event)

        async def pump() -> None:
            while True:
                await ws.send_text(await outbox.get())

        sender = asyncio.create_task(pump())

        def send_error(code: str) -> None:
            enqueue(json.dumps({"type": "error", "code": code}))

        try:
            while True:
                raw = await ws.receive_text()
                try:
                    frame = json.loads(raw)
                except json.JSONDecodeError:
                    send_error("bad_request")
                    continue
                if not isinstance(frame, dict):
                    send_error("bad_request")
                    continue
                ftype = frame.get("type")
                if ftype == "join":
                    if joined is not None:
                        send_error("already_joined")
                        continue
                    session, peer = frame.get("session"), frame.get("peer")
                    if not isinstance(session, str) or not isinstance(peer, str):
                        send_error("bad_request")
                        continue
                    try:
                        snapshot = hub.join(session, peer, deliver)
                    except DuplicatePeerId:
                        send_error("duplicate_peer")
                        continue
                    joined = (session, peer)
                    with gate:
                        enqueue(json.dumps(snapshot.to_snapshot_frame()))
                        for event in pending:
                            enqueue(json.dumps(event.to_frame()))
                        pending.clear()
                        ready = True
                elif ftype == "label":
                    if joined is None:
                        send_error("not_joined")
                        continue
                    try:
                        item = parse_item(frame.get("item") or {})
                        color = frame.get("color")
                        if not isinstance(color, str):
                            raise ValueError("color must be a string")
                        hub.apply_event(joined[0], joined[1], item, color)
                    except SubmittedLocked:
                        send_error("submitted_locked")
                    except ReservedColor:
                        send_error("reserved_color")
                    except NotJoined:
                        send_error("not_joined")
                    except ValueError:
                        send_error("bad_request")
                else:
                    send_error("unknown_type")
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            if joined is not None:
                hub.leave(*joined)

    return app


def create_app_from_config(config) -> FastAPI:
    """Build the app from a validated ServerConfig."""
    from .index import load_index
    from .judge import load_tasks

    index = load_index(config.index_dir)
    tasks = load_tasks(config.task_file) if config.task_file else []
    return create_app(
        index,
        tasks,
        thumb_root=config.thumb_root,
        history_cap=config.history_cap,
        result_limit=config.result_limit,
    )


__all__ = ["create_app", "create_app_from_config", "SessionStore", "SESSION_HEADER"]

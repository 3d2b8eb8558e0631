"""Desk-scale competition judge: task definitions, verdicts, scoring.

Task files are newline-delimited JSON records:
``{"task_id", "kind", "time_limit_s", "target"?, "ground_truth"?}``
with kind one of KIS_TEXTUAL, KIS_VISUAL, AVS. KIS carries a single
``target`` interval ``{"video_id", "start_ms", "end_ms"}``; AVS carries a
``ground_truth`` list of such intervals.

Judging is a pure function of the task and the chronologically ordered
submission history of one team. Scores land in [0, 100]:

* KIS: a correct answer at elapsed t with w prior wrong attempts scores
  max(0, 100 * (1 - t / (2 * time_limit)) - 10 * w); no correct answer
  scores 0.
* AVS: 100 * (distinct credited ranges) / (total ground-truth ranges);
  wrong and duplicate submissions cost nothing.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .errors import MalformedTask, UnknownTask

KIS_TEXTUAL = "KIS_TEXTUAL"
KIS_VISUAL = "KIS_VISUAL"
AVS = "AVS"
TASK_KINDS = (KIS_TEXTUAL, KIS_VISUAL, AVS)

CORRECT = "CORRECT"
WRONG = "WRONG"
DUPLICATE = "DUPLICATE"
LATE = "LATE"


@dataclass(frozen=True, order=True)
class TimeRange:
    video_id: str
    start_ms: int
    end_ms: int

    def contains(self, video_id: str, time_ms: int) -> bool:
        return video_id == self.video_id and self.start_ms <= time_ms <= self.end_ms

    def to_dict(self) -> dict:
        return {"video_id": self.video_id, "start_ms": self.start_ms, "end_ms": self.end_ms}


@dataclass(frozen=True)
class Task:
    task_id: str
    kind: str
    time_limit_s: int
    target: TimeRange | None = None
    ground_truth: tuple[TimeRange, ...] = ()

    @property
    def is_kis(self) -> bool:
        return self.kind in (KIS_TEXTUAL, KIS_VISUAL)


@dataclass(frozen=True)
class Submission:
    task_id: str
    team: str
    video_id: str
    time_ms: int
    submitted_at_s: float


@dataclass(frozen=True)
class Verdict:
    """Ruling on one submission, with the context scoring needs."""

    status: str
    submitted_at_s: float
    wrongs_before: int = 0
    matched_range: TimeRange | None = None


def _parse_range(obj, line_no: int, what: str) -> TimeRange:
    if not isinstance(obj, dict):
        raise MalformedTask(f"line {line_no}: {what} must be an object")
    try:
        r = TimeRange(obj["video_id"], obj["start_ms"], obj["end_ms"])
    except (KeyError, TypeError) as e:
        raise MalformedTask(f"line {line_no}: incomplete {what}: {e}") from e
    if not isinstance(r.video_id, str) or not isinstance(r.start_ms, int) or not isinstance(r.end_ms, int):
        raise MalformedTask(f"line {line_no}: {what} fields have wrong types")
    if r.start_ms < 0 or r.start_ms >= r.end_ms:
        raise MalformedTask(f"line {line_no}: invalid {what} interval {r.start_ms}..{r.end_ms}")
    return r


def load_tasks(path: str | Path) -> list[Task]:
    """Parse and validate a task file; any bad record aborts the load."""
    tasks: list[Task] = []
    seen: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedTask(f"line {line_no}: invalid JSON: {e.msg}") from e
            tasks.append(_parse_task(record, line_no, seen))
    return tasks


def _parse_task(record: dict, line_no: int, seen: set[str]) -> Task:
    if not isinstance(record, dict):
        raise MalformedTask(f"line {line_no}: record is not an object")
    task_id = record.get("task_id")
    kind = record.get("kind")
    limit = record.get("time_limit_s")
    if not isinstance(task_id, str) or not task_id:
        raise MalformedTask(f"line {line_no}: task_id must be a non-empty string")
    if task_id in seen:
        raise MalformedTask(f"line {line_no}: duplicate task_id {task_id!r}")
    if kind not in TASK_KINDS:
        raise MalformedTask(f"line {line_no}: unknown kind {kind!r}")
    if not isinstance(limit, int) or isinstance(limit, bool) or limit <= 0:
        raise MalformedTask(f"line {line_no}: time_limit_s must be a positive integer")

    if kind == AVS:
        gt = record.get("ground_truth")
        if not isinstance(gt, list) or not gt:
            raise MalformedTask(f"line {line_no}: AVS task needs a non-empty ground_truth list")
        ranges = tuple(sorted(_parse_range(r, line_no, "ground_truth range") for r in gt))
        # overlapping ranges would make credit assignment order-dependent
        by_video: dict[str, TimeRange] = {}
        for r in ranges:
            prev = by_video.get(r.video_id)
            if prev is not None and r.start_ms <= prev.end_ms:
                raise MalformedTask(
                    f"line {line_no}: overlapping ground-truth ranges in video {r.video_id!r}"
                )
            by_video[r.video_id] = r
        task = Task(task_id, kind, limit, ground_truth=ranges)
    else:
        target = record.get("target")
        if target is None:
            raise MalformedTask(f"line {line_no}: KIS task needs a target")
        task = Task(task_id, kind, limit, target=_parse_range(target, line_no, "target"))
    seen.add(task_id)
    return task


def judge_stream(task: Task, submissions: Sequence[Submission]) -> list[Verdict]:
    """Rule on a chronologically ordered submission stream of one team."""
    verdicts: list[Verdict] = []
    kis_solved = False
    wrongs = 0
    credited: set[TimeRange] = set()
    for s in submissions:
        if s.task_id != task.task_id:
            raise UnknownTask(f"submission for {s.task_id!r} judged against {task.task_id!r}")
        if s.submitted_at_s > task.time_limit_s:
            verdicts.append(Verdict(LATE, s.submitted_at_s, wrongs))
            continue
        if task.is_kis:
            if kis_solved:
                verdicts.append(Verdict(DUPLICATE, s.submitted_at_s, wrongs))
            elif task.target.contains(s.video_id, s.time_ms):
                kis_solved = True
                verdicts.append(Verdict(CORRECT, s.submitted_at_s, wrongs, task.target))
            else:
                verdicts.append(Verdict(WRONG, s.submitted_at_s, wrongs))
                wrongs += 1
        else:
            hit = next(
                (r for r in task.ground_truth if r.contains(s.video_id, s.time_ms)), None
            )
            if hit is None:
                verdicts.append(Verdict(WRONG, s.submitted_at_s, wrongs))
                wrongs += 1
            elif hit in credited:
                verdicts.append(Verdict(DUPLICATE, s.submitted_at_s, wrongs, hit))
            else:
                credited.add(hit)
                verdicts.append(Verdict(CORRECT, s.submitted_at_s, wrongs, hit))
    return verdicts


def judge_submission(task: Task, s: Submission, history: Sequence[Submission]) -> Verdict:
    """Verdict for one submission given the team's prior submissions."""
    return judge_stream(task, [*history, s])[-1]


def score_task(task: Task, verdicts: Sequence[Verdict]) -> float:
    """Points in [0, 100] for one team's verdict stream on one task."""
    if task.is_kis:
        for v in verdicts:
            if v.status == CORRECT:
                decay = 1.0 - v.submitted_at_s / (2.0 * task.time_limit_s)
                return max(0.0, 100.0 * decay - 10.0 * v.wrongs_before)
        return 0.0
    credited = {v.matched_range for v in verdicts if v.status == CORRECT}
    return 100.0 * len(credited) / len(task.ground_truth)


class JudgeService:
    """Stateful judging front: per-(team, task) histories and live scores.

    The clock is injectable for virtual-time tests; every task's clock
    starts when the service is created (restartable via start_task). An
    optional on_accept callback fires synchronously for CORRECT and
    DUPLICATE verdicts, before the verdict is returned.
    """

    def __init__(
        self,
        tasks: Sequence[Task],
        clock: Callable[[], float] = time.monotonic,
        on_accept: Callable[[str, Task, Submission], None] | None = None,
    ):
        self._tasks = {t.task_id: t for t in tasks}
        self._clock = clock
        self._on_accept = on_accept
        self._lock = threading.Lock()
        now = clock()
        self._started = {t.task_id: now for t in tasks}
        self._history: dict[tuple[str, str], list[tuple[Submission, Verdict]]] = {}

    def task(self, task_id: str) -> Task:
        try:
            return self._tasks[task_id]
        except KeyError:
            raise UnknownTask(f"no task {task_id!r}") from None

    def tasks(self) -> list[Task]:
        return list(self._tasks.values())

    def start_task(self, task_id: str, at: float | None = None) -> None:
        self.task(task_id)
        with self._lock:
            self._started[task_id] = self._clock() if at is None else at

    def submit(self, team: str, task_id: str, video_id: str, time_ms: int) -> tuple[Verdict, float]:
        """Judge one submission; returns (verdict, score so far)."""
        task = self.task(task_id)
        with self._lock:
            elapsed = self._clock() - self._started[task_id]
            submission = Submission(task_id, team, video_id, time_ms, elapsed)
            log = self._history.setdefault((team, task_id), [])
            verdict = judge_submission(task, submission, [s for s, _ in log])
            log.append((submission, verdict))
            score = score_task(task, [v for _, v in log])
        if verdict.status in (CORRECT, DUPLICATE) and self._on_accept is not None:
            self._on_accept(team, task, submission)
        return verdict, score

    def verdict_log(self, team: str, task_id: str) -> list[tuple[Submission, Verdict]]:
        with self._lock:
            return list(self._history.get((team, task_id), []))

    def score(self, team: str, task_id: str) -> float:
        task = self.task(task_id)
        with self._lock:
            return score_task(task, [v for _, v in self._history.get((team, task_id), [])])

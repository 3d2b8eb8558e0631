import json

import pytest

from shotseek.errors import UnknownEntry
from shotseek.history import QueryHistory, results_to_bytes
from shotseek.index import build_index
from shotseek.search import QuerySpec, SearchEngine


def spec(text="horse") -> QuerySpec:
    return QuerySpec(text=text)


def run(engine, text="horse"):
    return engine.execute(spec(text))


@pytest.fixture
def engine(toy_manifest) -> SearchEngine:
    return SearchEngine(build_index(toy_manifest))


def test_first_entry_id_is_one(engine):
    history = QueryHistory()
    assert history.record(spec(), run(engine)) == 1


def test_ids_count_up(engine):
    history = QueryHistory()
    ids = [history.record(spec(), run(engine)) for _ in range(3)]
    assert ids == [1, 2, 3]


def test_snapshot_survives_caller_mutation(engine):
    history = QueryHistory()
    results = run(engine)
    frozen = results_to_bytes(results)
    entry_id = history.record(spec(), results)
    results.clear()
    assert results_to_bytes(history.reload(entry_id)) == frozen


def test_reload_is_byte_identical(engine):
    history = QueryHistory()
    results = run(engine)
    entry_id = history.record(spec(), results)
    assert results_to_bytes(history.reload(entry_id)) == results_to_bytes(results)
    assert history.snapshot_bytes(entry_id) == results_to_bytes(results)


def test_reload_unknown_entry(engine):
    history = QueryHistory()
    with pytest.raises(UnknownEntry):
        history.reload(999)


def test_list_empty():
    assert QueryHistory().list_entries() == []


def test_list_descending(engine):
    history = QueryHistory()
    history.record(spec("a"), run(engine))
    history.record(spec("b"), run(engine))
    assert [s.entry_id for s in history.list_entries()] == [2, 1]


def test_summaries_carry_no_result_payload(engine):
    history = QueryHistory()
    results = run(engine)
    for i in range(100):
        history.record(spec(f"query {i}"), results)
    summaries = history.list_entries()
    assert len(summaries) == 100
    # size bounded by the specs alone: a summary dump must not grow with results
    dump = json.dumps([{"id": s.entry_id, "at": s.issued_at, "spec": s.spec.to_payload()} for s in summaries])
    assert len(dump) < 100 * 200
    assert not any(hasattr(s, "results") for s in summaries)


def test_ids_stay_gapless_until_cap(engine):
    history = QueryHistory(cap=300)
    for _ in range(120):
        history.record(spec(), run(engine))
    ids = [s.entry_id for s in history.list_entries()]
    assert ids == list(range(120, 0, -1))


def test_cap_evicts_oldest(engine):
    history = QueryHistory(cap=5)
    results = run(engine)
    for _ in range(8):
        history.record(spec(), results)
    ids = [s.entry_id for s in history.list_entries()]
    assert ids == [8, 7, 6, 5, 4]
    with pytest.raises(UnknownEntry):
        history.reload(1)


def test_reload_never_touches_engine(engine):
    history = QueryHistory()
    results = run(engine)
    assert engine.invocations == 1
    entry_id = history.record(spec(), results)
    for _ in range(50):
        history.reload(entry_id)
        history.list_entries()
    assert engine.invocations == 1

import json

import pytest

from shotseek.errors import ExtractorFailure, MalformedRecord
from shotseek.extractors import SidecarExtractor, load_sidecar, run_extractors
from shotseek.ingest import extract_documents
from shotseek.manifest import CollectionManifest

from .conftest import make_shot


def write_sidecar(tmp_path, records):
    path = tmp_path / "annotations.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    return path


def test_shot_without_annotations_yields_nothing(tmp_path):
    path = write_sidecar(tmp_path, [])
    shot = make_shot("v1", 0)
    assert run_extractors(shot, SidecarExtractor.load_all(path)) == []


def test_stub_passthrough(tmp_path):
    path = write_sidecar(
        tmp_path,
        [{"video_id": "v1", "shot_id": "s000", "channel": "ACTION", "text": "riding horse"}],
    )
    docs = run_extractors(make_shot("v1", 0), SidecarExtractor.load_all(path))
    assert len(docs) == 1
    assert docs[0].channel == "ACTION"
    assert docs[0].tokens == ("riding", "horse")


def test_extractors_run_in_channel_order(tmp_path):
    path = write_sidecar(
        tmp_path,
        [
            {"video_id": "v1", "shot_id": "s000", "channel": "OCR", "text": "exit sign"},
            {"video_id": "v1", "shot_id": "s000", "channel": "ASR", "text": "hello there"},
        ],
    )
    docs = run_extractors(make_shot("v1", 0), SidecarExtractor.load_all(path))
    assert [d.channel for d in docs] == ["ASR", "OCR"]


def test_repeated_sidecar_keys_append(tmp_path):
    path = write_sidecar(
        tmp_path,
        [
            {"video_id": "v1", "shot_id": "s000", "channel": "ASR", "text": "first"},
            {"video_id": "v1", "shot_id": "s000", "channel": "ASR", "text": "second"},
        ],
    )
    assert load_sidecar(path)[(("v1", "s000"), "ASR")] == "first second"


def test_malformed_sidecar_rejected(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"video_id": "v1"}\n')
    with pytest.raises(MalformedRecord):
        load_sidecar(path)


class _Boom:
    name = "boom"
    channel = "CONCEPT"

    def extract(self, shot):
        raise RuntimeError("plugin exploded")


def test_failing_plugin_does_not_stop_the_rest(tmp_path):
    path = write_sidecar(
        tmp_path,
        [{"video_id": "v1", "shot_id": "s000", "channel": "ASR", "text": "still here"}],
    )
    failures: list[ExtractorFailure] = []
    extractors = [*SidecarExtractor.load_all(path), _Boom()]
    docs = run_extractors(make_shot("v1", 0), extractors, failures)
    assert [d.channel for d in docs] == ["ASR"]
    assert len(failures) == 1
    assert failures[0].plugin == "boom"


def test_double_run_is_byte_identical(tmp_path, rng):
    from .conftest import make_random_manifest

    base = make_random_manifest(rng, n_videos=2, shots_per_video=5, channels=())
    records = [
        {"video_id": s.video_id, "shot_id": s.shot_id, "channel": "ACTION", "text": f"act {s.shot_id}"}
        for s in base.shots[::2]
    ]
    path = write_sidecar(tmp_path, records)

    def run() -> bytes:
        manifest = CollectionManifest(base.collection_id, list(base.shots), [])
        out = extract_documents(manifest, SidecarExtractor.load_all(path))
        return json.dumps([d.to_record() for d in out.documents], sort_keys=True).encode()

    assert run() == run()

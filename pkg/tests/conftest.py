from __future__ import annotations

import random

import pytest

from shotseek.manifest import CHANNELS, CollectionManifest, ShotDescriptor, TextDocument

WORDS = (
    "horse", "riding", "beach", "sunset", "car", "street", "dog", "running",
    "water", "boat", "mountain", "snow", "crowd", "music", "kitchen", "cooking",
    "red", "ball", "night", "rain",
)


def make_shot(video: str, idx: int, length_ms: int = 2000) -> ShotDescriptor:
    return ShotDescriptor(
        video_id=video,
        shot_id=f"s{idx:03d}",
        start_ms=idx * length_ms,
        end_ms=(idx + 1) * length_ms,
        keyframe=f"{video}_{idx:03d}.png",
    )


def make_random_manifest(
    rng: random.Random,
    n_videos: int = 5,
    shots_per_video: int = 10,
    channels: tuple[str, ...] = ("ASR", "ACTION"),
    doc_probability: float = 0.8,
    words: tuple[str, ...] = WORDS,
) -> CollectionManifest:
    shots = []
    documents = []
    for v in range(n_videos):
        video = f"v{v:02d}"
        for i in range(shots_per_video):
            shot = make_shot(video, i)
            shots.append(shot)
            for channel in channels:
                if rng.random() < doc_probability:
                    text = " ".join(rng.choices(words, k=rng.randint(1, 12)))
                    documents.append(TextDocument.make(video, shot.shot_id, channel, text))
    return CollectionManifest("random", shots, documents)


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase outcomes so the acceptance suite can print its verdict lines
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


@pytest.fixture
def toy_manifest() -> CollectionManifest:
    """Three shots, two channels, small enough to hand-check."""
    shots = [make_shot("v1", 0), make_shot("v1", 1), make_shot("v2", 0)]
    documents = [
        TextDocument.make("v1", "s000", "ASR", "a horse on the beach"),
        TextDocument.make("v1", "s001", "ASR", "horse horse horse"),
        TextDocument.make("v2", "s000", "ASR", "a car in the street"),
        TextDocument.make("v1", "s000", "ACTION", "riding horse"),
        TextDocument.make("v2", "s000", "ACTION", "driving car"),
    ]
    return CollectionManifest("toy", shots, documents)


def all_channels() -> tuple[str, ...]:
    return CHANNELS

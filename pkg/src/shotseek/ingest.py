"""Ingest pipeline: manifest -> extracted docs -> color profiles -> index.

Single-threaded per collection; the resulting index is immutable and safe
for concurrent reads. Any invalid input aborts the run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .color import ColorProfile, classify_dominant_color
from .errors import ExtractorFailure, ShotseekError
from .extractors import Extractor, SidecarExtractor, run_extractors
from .index import Index, build_index, save_index
from .manifest import CollectionManifest, parse_manifest

log = logging.getLogger(__name__)


class KeyframeUnreadable(ShotseekError):
    pass


@dataclass
class IngestReport:
    shots: int = 0
    documents: int = 0
    extracted: int = 0
    colored: int = 0
    extractor_failures: list[ExtractorFailure] = field(default_factory=list)


def load_keyframe(path: str | Path) -> np.ndarray:
    """Read an RGB raster for color classification."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except OSError as e:
        raise KeyframeUnreadable(f"cannot read keyframe {path}: {e}") from e


def classify_manifest_colors(
    manifest: CollectionManifest, root: str | Path = "."
) -> CollectionManifest:
    """Fill every shot's color profile from its keyframe image."""
    root = Path(root)
    colored = []
    for shot in manifest.shots:
        path = Path(shot.keyframe)
        if not path.is_absolute():
            path = root / path
        profile = classify_dominant_color(load_keyframe(path))
        colored.append(shot.with_color(profile))
    return CollectionManifest(manifest.collection_id, colored, list(manifest.documents))


def extract_documents(
    manifest: CollectionManifest,
    extractors: list[Extractor],
    report: IngestReport | None = None,
) -> CollectionManifest:
    """Append extractor output to the manifest's document list."""
    documents = list(manifest.documents)
    failures: list[ExtractorFailure] = []
    for shot in manifest.shots:
        docs = run_extractors(shot, extractors, failures)
        documents.extend(docs)
        if report is not None:
            report.extracted += len(docs)
    for failure in failures:
        log.warning("extractor failure: %s", failure)
    if report is not None:
        report.extractor_failures.extend(failures)
    return CollectionManifest(manifest.collection_id, list(manifest.shots), documents)


def ingest_collection(
    manifest_path: str | Path,
    out_dir: str | Path,
    annotations_path: str | Path | None = None,
    *,
    classify_colors: bool = True,
    thumb_root: str | Path | None = None,
) -> tuple[Index, IngestReport]:
    """Run the full pipeline and persist the index to ``out_dir``."""
    report = IngestReport()
    manifest = parse_manifest(manifest_path)
    report.shots = len(manifest.shots)
    report.documents = len(manifest.documents)

    if annotations_path is not None:
        extractors = SidecarExtractor.load_all(annotations_path)
        manifest = extract_documents(manifest, extractors, report)

    if classify_colors:
        root = thumb_root if thumb_root is not None else Path(manifest_path).parent
        manifest = classify_manifest_colors(manifest, root)
        report.colored = len(manifest.shots)

    index = build_index(manifest)
    save_index(index, out_dir)
    return index, report


def color_profile_of(shot_keyframe: str | Path) -> ColorProfile:
    """Classify a single keyframe file (CLI / debugging helper)."""
    return classify_dominant_color(load_keyframe(shot_keyframe))

"""Command-line entry points: ``shotseek ingest`` and ``shotseek serve``."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ShotseekError


def _cmd_ingest(args: argparse.Namespace) -> int:
    from .ingest import ingest_collection

    index, report = ingest_collection(
        args.manifest,
        args.out,
        annotations_path=args.annotations,
        classify_colors=not args.skip_colors,
        thumb_root=args.thumb_root,
    )
    print(
        f"ingested collection {index.collection_id!r}: "
        f"{report.shots} shots, {report.documents} manifest docs, "
        f"{report.extracted} extracted docs, {report.colored} colored"
    )
    for failure in report.extractor_failures:
        print(f"warning: {failure}", file=sys.stderr)
    print(f"index written to {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .config import load_config
    from .gateway import create_app_from_config

    config = load_config(args.config)
    app = create_app_from_config(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shotseek", description="video shot search service")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="build a search index from a collection manifest")
    ingest.add_argument("--manifest", required=True, help="newline-delimited manifest file")
    ingest.add_argument("--annotations", default=None, help="sidecar annotation file for the stub extractor")
    ingest.add_argument("--out", required=True, help="output index directory")
    ingest.add_argument("--thumb-root", default=None, help="base directory for relative keyframe paths")
    ingest.add_argument("--skip-colors", action="store_true", help="skip keyframe color classification")
    ingest.set_defaults(func=_cmd_ingest)

    serve = sub.add_parser("serve", help="serve the query/submit/collab API")
    serve.add_argument("--config", required=True, help="key=value config file")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShotseekError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

"""irqa — ``pipeline`` subcommand: run a whole manifest."""

from __future__ import annotations

import argparse
import logging

from irqa.config import Settings
from irqa.core.orchestrator import ExperimentPipeline, load_manifest
from irqa.exceptions import ConfigError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("pipeline", help="Run every stage of a run manifest into the output directory")
    parser.add_argument("--manifest", help="Run manifest YAML (default: IRQA_CONFIG)")
    parser.set_defaults(handler=cmd_pipeline)


def cmd_pipeline(args: argparse.Namespace, settings: Settings) -> int:
    path = args.manifest or settings.config
    if not path:
        raise ConfigError("no manifest given: pass --manifest or set IRQA_CONFIG")
    manifest = load_manifest(path)
    out = ExperimentPipeline(manifest, settings.output_dir, settings=settings).run()
    print(out)
    return 0

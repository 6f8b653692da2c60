"""irqa — Command-line entry point.

Global flags override the IRQA_* settings for one invocation; each
subcommand consumes the files the previous stage wrote.
"""

from __future__ import annotations

import argparse
import logging
import sys

from irqa import __version__
from irqa.commands.router import register_all
from irqa.config import Settings, get_settings
from irqa.exceptions import IrqaError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irqa",
        description="Retrieval analysis for question answering: coverage, difficult questions, "
        "helpful extension words and blind relevance feedback.",
    )
    parser.add_argument("--version", action="version", version=f"irqa {__version__}")
    parser.add_argument("--stopwords", help="Stopword file (default: shipped SMART list)")
    parser.add_argument("--titles", help="Title/appellation whitelist (default: shipped list)")
    parser.add_argument("--ignore-case", action="store_true", help="Match answer patterns case-insensitively")
    parser.add_argument("--workers", type=int, help="Worker threads")
    parser.add_argument("--output-dir", help="Directory for artifacts")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    register_all(parser)
    return parser


def _settings_for(args: argparse.Namespace) -> Settings:
    settings = get_settings()
    overrides = {
        "stopword_file": args.stopwords,
        "titles_file": args.titles,
        "workers": args.workers,
        "output_dir": args.output_dir,
        "log_level": args.log_level,
    }
    update = {k: v for k, v in overrides.items() if v is not None}
    if args.ignore_case:
        update["regex_ignore_case"] = True
    if update.get("workers", 1) < 1:
        raise IrqaError("--workers must be >= 1")
    return settings.model_copy(update=update)


def _configure_logging(settings: Settings) -> None:
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _settings_for(args)
        _configure_logging(settings)
        logger.debug("irqa v%s (%s) running %s", settings.version, settings.env, args.command)
        return args.handler(args, settings)
    except IrqaError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.message)
        return exc.exit_code
    except Exception as exc:
        logger.error("Unhandled error: %s", exc, exc_info=True)
        return 1


def run() -> None:
    """Entry point for the `irqa` console script."""
    sys.exit(main())

"""irqa — ``retrieve`` subcommand: ranked lists for a question set."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import load_questions, output_path
from irqa.config import Settings
from irqa.core.artifacts import RANKED_ARTIFACT, write_json
from irqa.core.retrieval.retriever import retrieve_questions
from irqa.core.retrieval.snapshot import load_index
from irqa.exceptions import ConfigError
from irqa.models.enums import VariantKind
from irqa.models.schemas import QueryVariant, RankedRun, fingerprint

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("retrieve", help="Retrieve the top n units for every question")
    parser.add_argument("--index", required=True, help="Index snapshot")
    parser.add_argument("--questions", required=True, help="Question file (TSV or JSONL)")
    parser.add_argument("--n", type=int, help="Retrieval depth (default: IRQA_DEFAULT_DEPTH)")
    parser.add_argument("--variant", choices=[v.value for v in VariantKind], default=VariantKind.Q.value)
    parser.add_argument("--extension", help="Extension term for the QE / QTE variants")
    parser.add_argument("--output", help="Ranked-list file (default: <output-dir>/ranked/<variant>.json)")
    parser.set_defaults(handler=cmd_retrieve)


def cmd_retrieve(args: argparse.Namespace, settings: Settings) -> int:
    n = args.n or settings.default_depth
    if n < 1:
        raise ConfigError("--n must be >= 1")
    try:
        variant = QueryVariant(kind=VariantKind(args.variant), extension=args.extension)
    except ValueError as exc:
        raise ConfigError(f"invalid query variant: {exc}") from exc

    index = load_index(args.index)
    questions = load_questions(args.questions)
    results = retrieve_questions(index, questions, variant, n, workers=settings.workers)
    ranked = RankedRun(
        granularity=index.granularity,
        index_fingerprint=index.cfg.fingerprint,
        analyzer_fingerprint=index.cfg.analyzer.fingerprint,
        variant=variant.kind,
        extension=variant.extension,
        n=n,
        results=results,
    )
    path = output_path(args.output, settings, f"ranked/{index.granularity.value}-{variant.kind.value}.json")
    fp = fingerprint({"index": index.cfg.fingerprint, "variant": variant.kind.value, "n": n})
    write_json(path, RANKED_ARTIFACT, fp, ranked)
    print(path)
    return 0

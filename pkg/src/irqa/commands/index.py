"""irqa — ``index`` subcommand: corpus files to an index snapshot."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import output_path
from irqa.config import Settings
from irqa.core.retrieval.index import index_corpus
from irqa.core.retrieval.snapshot import save_index
from irqa.models.enums import CorpusFormat, Granularity
from irqa.models.schemas import IndexConfig
from irqa.preprocessing.corpus_reader import load_corpus
from irqa.preprocessing.text_processor import default_analyzer_config

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("index", help="Build a document- or passage-level index snapshot")
    parser.add_argument("--corpus", nargs="+", required=True, help="Corpus files or directories")
    parser.add_argument("--format", choices=[f.value for f in CorpusFormat], help="Corpus format (default: by suffix)")
    parser.add_argument("--granularity", choices=[g.value for g in Granularity], default=Granularity.PASSAGE.value)
    parser.add_argument("--output", help="Snapshot path (default: <output-dir>/indexes/<granularity>.json)")
    parser.set_defaults(handler=cmd_index)


def cmd_index(args: argparse.Namespace, settings: Settings) -> int:
    gran = Granularity(args.granularity)
    documents = load_corpus(
        args.corpus,
        fmt=CorpusFormat(args.format) if args.format else None,
        workers=settings.workers,
    )
    cfg = IndexConfig(
        granularity=gran,
        analyzer=default_analyzer_config(settings),
        k1=settings.bm25_k1,
        b=settings.bm25_b,
    )
    index = index_corpus(documents, cfg, workers=settings.workers)
    path = save_index(index, output_path(args.output, settings, f"indexes/{gran.value}.json"))
    print(path)
    return 0

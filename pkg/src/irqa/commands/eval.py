"""irqa — ``eval`` subcommand: ranked lists plus answer keys to a run record."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import add_key_arguments, load_keys, output_path
from irqa.config import Settings
from irqa.core.artifacts import RANKED_ARTIFACT, read_json
from irqa.core.evaluation.metrics import coverage, evaluate_run, redundancy
from irqa.core.evaluation.run_log import RunLog
from irqa.core.retrieval.snapshot import load_index
from irqa.exceptions import IncompatibleIndexError
from irqa.models.enums import MatchMode
from irqa.models.schemas import RankedRun, RunConfig

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="Classify hits and append a run record to the run log")
    parser.add_argument("--ranked", required=True, help="Ranked-list file written by `irqa retrieve`")
    parser.add_argument("--index", required=True, help="Index snapshot the lists were retrieved from")
    add_key_arguments(parser)
    parser.add_argument("--n", type=int, help="Evaluation depth (default: the retrieval depth)")
    parser.add_argument("--question-set", default="default", help="Question set label")
    parser.add_argument("--run-id", help="Run id (default: derived from the configuration)")
    parser.add_argument("--run-log", help="Run log (default: <output-dir>/runs.jsonl)")
    parser.set_defaults(handler=cmd_eval)


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    _, body = read_json(args.ranked, RANKED_ARTIFACT)
    ranked = RankedRun.model_validate(body)
    index = load_index(args.index)
    if index.cfg.fingerprint != ranked.index_fingerprint:
        raise IncompatibleIndexError(f"{args.ranked} was not retrieved from index {args.index}")
    keys = load_keys(args.patterns, args.judgments, settings)

    config = RunConfig(
        granularity=ranked.granularity,
        analyzer_fingerprint=ranked.analyzer_fingerprint,
        n=min(args.n or ranked.n, ranked.n),
        variant=ranked.variant,
        question_set=args.question_set,
    )
    record = evaluate_run(
        ranked.results,
        keys,
        index,
        config,
        run_id=args.run_id,
        ignore_case=settings.regex_ignore_case,
        workers=settings.workers,
    )
    RunLog(output_path(args.run_log, settings, "runs.jsonl")).record_run(record)

    if record.per_question:
        print(
            f"{record.run_id}\tcoverage strict={coverage(record, MatchMode.STRICT):.3f} "
            f"lenient={coverage(record, MatchMode.LENIENT):.3f}\t"
            f"redundancy strict={redundancy(record, MatchMode.STRICT):.3f} "
            f"lenient={redundancy(record, MatchMode.LENIENT):.3f}\t"
            f"unevaluable={record.warning_count}"
        )
    else:
        print(f"{record.run_id}\tno evaluable questions\tunevaluable={record.warning_count}")
    return 0

"""irqa — ``difficult`` subcommand: zero-hit questions across logged runs."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import load_questions, output_path
from irqa.config import Settings
from irqa.core.artifacts import DIFFICULT_ARTIFACT, write_json
from irqa.core.evaluation.difficulty import identify_difficult
from irqa.core.evaluation.run_log import RunLog
from irqa.exceptions import ConfigError
from irqa.models.enums import DifficultyMode, Granularity, QuestionFormat, VariantKind
from irqa.models.schemas import fingerprint
from irqa.preprocessing.dataset_reader import dump_questions

logger = logging.getLogger(__name__)


def add_run_filters(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--run-log", help="Run log (default: <output-dir>/runs.jsonl)")
    parser.add_argument("--run-id", action="append", dest="run_ids", help="Select a run id (repeatable)")
    parser.add_argument("--granularity", choices=[g.value for g in Granularity])
    parser.add_argument("--variant", choices=[v.value for v in VariantKind])
    parser.add_argument("--run-n", type=int, help="Select runs evaluated at this depth")
    parser.add_argument("--question-set", help="Select runs over this question set")
    parser.add_argument("--with-rf", choices=["yes", "no"], help="Select feedback runs only, or non-feedback runs only")


def load_filtered_runs(args: argparse.Namespace, settings: Settings):
    log = RunLog(output_path(args.run_log, settings, "runs.jsonl"))
    return log.load_runs(
        run_ids=args.run_ids,
        granularity=args.granularity,
        variant=args.variant,
        n=args.run_n,
        question_set=args.question_set,
        rf=None if args.with_rf is None else args.with_rf == "yes",
    )


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("difficult", help="Identify difficult questions from logged runs")
    add_run_filters(parser)
    parser.add_argument("--n", type=int, help="Depth (default: IRQA_DEFAULT_DEPTH)")
    parser.add_argument("--threshold", type=float, default=0.0, help="Max hits for a difficult question")
    parser.add_argument("--mode", choices=[m.value for m in DifficultyMode], default=DifficultyMode.BOTH.value)
    parser.add_argument("--questions", help="Question file; when given, difficult questions are exported from it")
    parser.add_argument("--output", help="Difficult-set file (default: <output-dir>/difficult.json)")
    parser.set_defaults(handler=cmd_difficult)


def cmd_difficult(args: argparse.Namespace, settings: Settings) -> int:
    runs = load_filtered_runs(args, settings)
    if not runs:
        raise ConfigError("no runs match the filter")
    n = args.n or settings.default_depth
    difficult = identify_difficult(runs, n, threshold=args.threshold, mode=args.mode)
    path = output_path(args.output, settings, "difficult.json")
    fp = fingerprint(difficult.model_dump(mode="json"))
    write_json(path, DIFFICULT_ARTIFACT, fp, difficult)

    if args.questions:
        chosen = set(difficult.question_ids)
        export = [q for q in load_questions(args.questions) if q.question_id in chosen]
        export_path = path.with_name(path.stem + "-questions.tsv")
        export_path.write_text(dump_questions(export, QuestionFormat.TSV, fingerprint=fp), encoding="utf-8")
        logger.info("Exported %d difficult questions to %s", len(export), export_path)

    for qid in difficult.question_ids:
        print(qid)
    return 0

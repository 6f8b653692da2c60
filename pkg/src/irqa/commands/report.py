"""irqa — ``report`` subcommand: tables from the run log or HEW records."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import emit_table, load_questions, parse_ranks
from irqa.commands.difficult import add_run_filters, load_filtered_runs
from irqa.config import Settings
from irqa.core.artifacts import HEW_ARTIFACT, read_models
from irqa.core.evaluation import reports
from irqa.core.mining.hew_stats import hew_stats
from irqa.exceptions import ConfigError
from irqa.models.enums import ReportKind
from irqa.models.schemas import HewRecord

logger = logging.getLogger(__name__)

HEW_KINDS = {ReportKind.HEW_SUMMARY, ReportKind.HEW_EXAMPLES}


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("report", help="Render a report table")
    parser.add_argument("--kind", required=True, choices=[k.value for k in ReportKind])
    add_run_filters(parser)
    parser.add_argument("--n", type=int, help="Depth for difficulty counts")
    parser.add_argument("--ranks", help="Comma-separated ranks for rf_table")
    parser.add_argument("--depths", help="Comma-separated depths for coverage_curve")
    parser.add_argument("--hews", help="HEW records, for hew_summary and hew_examples")
    parser.add_argument("--difficult-used", type=int, help="Difficult questions mined, for hew_summary")
    parser.add_argument("--questions", help="Question file, for hew_examples")
    parser.add_argument("--format", choices=["text", "tsv"], default="text")
    parser.add_argument("--output", help="Write the table here instead of stdout")
    parser.set_defaults(handler=cmd_report)


def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    kind = ReportKind(args.kind)
    if kind in HEW_KINDS:
        table = _hew_report(kind, args)
    elif kind is ReportKind.RF_INTERSECTION:
        raise ConfigError("rf_intersection tables are written by `irqa rf --hews ...`")
    else:
        runs = load_filtered_runs(args, settings)
        if not runs:
            logger.warning("No runs match the filter; emitting an empty table")
        table = reports.report(
            runs,
            kind,
            n=args.n,
            ranks=parse_ranks(args.ranks) if args.ranks else None,
            depths=parse_ranks(args.depths) if args.depths else None,
        )
    emit_table(table, args.format, args.output)
    return 0


def _hew_report(kind: ReportKind, args: argparse.Namespace) -> reports.Table:
    if not args.hews:
        raise ConfigError(f"{kind.value} needs --hews")
    header, records = read_models(args.hews, HEW_ARTIFACT, HewRecord)
    if kind is ReportKind.HEW_EXAMPLES:
        questions = {q.question_id: q for q in load_questions(args.questions)} if args.questions else {}
        return reports.hew_examples_table(records, questions, header.fingerprint)
    used = args.difficult_used or len({r.question_id for r in records})
    return reports.hew_summary_table(hew_stats(records, used), header.fingerprint)

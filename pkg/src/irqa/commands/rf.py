"""irqa — ``rf`` subcommand: blind relevance feedback coverage and HEW intersection."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import (
    add_key_arguments,
    emit_table,
    load_keys,
    load_questions,
    output_path,
    parse_ranks,
    parse_rf_config,
)
from irqa.config import Settings
from irqa.core.artifacts import (
    DIFFICULT_ARTIFACT,
    HEW_ARTIFACT,
    RF_TERMS_ARTIFACT,
    read_json,
    read_models,
    write_jsonl,
    write_table,
)
from irqa.core.evaluation import reports
from irqa.core.evaluation.run_log import RunLog
from irqa.core.feedback.relevance_feedback import irt_stems, rf_coverage_experiment, rf_hew_intersection
from irqa.core.mining.hew_stats import hew_sets
from irqa.core.retrieval.snapshot import load_index
from irqa.exceptions import ConfigError
from irqa.models.schemas import DifficultSet, HewRecord, RfIntersection

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("rf", help="Run the blind relevance feedback experiment")
    parser.add_argument("--index", required=True, help="Baseline index snapshot (coverage is measured here)")
    parser.add_argument("--feedback-index", action="append", default=[], help="Extra index feeding term selection")
    parser.add_argument("--questions", required=True, help="Question file")
    add_key_arguments(parser)
    parser.add_argument(
        "--config",
        action="append",
        dest="configs",
        help="Feedback setting r:k:level (repeatable, default 5:5:document)",
    )
    parser.add_argument("--ranks", default="5,10,20,50", help="Comma-separated ranks (default 5,10,20,50)")
    parser.add_argument("--question-set", default="default")
    parser.add_argument("--hews", help="HEW records from `irqa eval-ext`, for the intersection table")
    parser.add_argument("--difficult", help="Difficult-set file limiting the intersection to difficult questions")
    parser.add_argument("--run-log", help="Append baseline and feedback runs to this run log")
    parser.add_argument("--format", choices=["text", "tsv"], default="text")
    parser.set_defaults(handler=cmd_rf)


def cmd_rf(args: argparse.Namespace, settings: Settings) -> int:
    index = load_index(args.index)
    sources = {index.granularity: index}
    for extra in args.feedback_index:
        idx = load_index(extra)
        sources[idx.granularity] = idx
    cfgs = [parse_rf_config(c) for c in (args.configs or ["5:5:document"])]
    ranks = parse_ranks(args.ranks)
    questions = load_questions(args.questions)
    keys = load_keys(args.patterns, args.judgments, settings)

    experiment = rf_coverage_experiment(
        index,
        questions,
        keys,
        cfgs,
        ranks,
        feedback_indexes=sources,
        question_set=args.question_set,
        ignore_case=settings.regex_ignore_case,
        workers=settings.workers,
    )
    if args.run_log:
        RunLog(args.run_log).record_runs(experiment.records)

    out = output_path(None, settings, "")
    write_table(out / "rf-table.tsv", experiment.table)
    selections = [s for label in sorted(experiment.selections) for s in experiment.selections[label]]
    write_jsonl(out / "rf-terms.jsonl", RF_TERMS_ARTIFACT, experiment.table.fingerprint, selections)
    emit_table(experiment.table, args.format)

    if args.hews:
        _, records = read_models(args.hews, HEW_ARTIFACT, HewRecord)
        helpful = hew_sets(records)
        wanted = set(helpful) | {r.question_id for r in records}
        if args.difficult:
            _, body = read_json(args.difficult, DIFFICULT_ARTIFACT)
            wanted = set(DifficultSet.model_validate(body).question_ids)
        if not wanted:
            raise ConfigError("no questions to intersect: the HEW file is empty")
        results: dict[str, RfIntersection] = {}
        for label, chosen in sorted(experiment.selections.items()):
            by_q = {s.question_id: s for s in chosen if s.question_id in wanted}
            if not by_q:
                continue
            source = sources[next(iter(by_q.values())).config.level]
            results[label] = rf_hew_intersection(
                {qid: helpful.get(qid, set()) for qid in by_q},
                {qid: irt_stems(sel, source) for qid, sel in by_q.items()},
                {qid: [t.stem for t in sel.terms] for qid, sel in by_q.items()},
            )
        table = reports.rf_intersection_table(results, experiment.table.fingerprint)
        write_table(out / "rf-intersection.tsv", table)
        emit_table(table, args.format)
    return 0

"""irqa — ``eval-ext`` subcommand: candidate extensions to HEW records and summary."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import add_key_arguments, emit_table, load_keys, load_questions, output_path
from irqa.config import Settings
from irqa.core.artifacts import (
    BASELINE_ARTIFACT,
    CANDIDATE_ARTIFACT,
    HEW_ARTIFACT,
    HEW_SUMMARY_ARTIFACT,
    read_models,
    write_json,
    write_jsonl,
    write_table,
)
from irqa.core.evaluation import reports
from irqa.core.mining.extension_miner import evaluate_extensions
from irqa.core.mining.hew_stats import hew_stats
from irqa.core.retrieval.snapshot import load_index
from irqa.models.schemas import CandidateSet, ExtensionBaseline, HewRecord
from irqa.preprocessing.text_processor import load_titles

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval-ext", help="Evaluate candidate extensions (Q+E, Q+T+E) and summarize HEWs")
    parser.add_argument("--candidates", required=True, help="Candidate file written by `irqa mine`")
    parser.add_argument("--index", required=True, help="Index snapshot to retrieve from")
    parser.add_argument("--questions", required=True, help="Question file")
    add_key_arguments(parser)
    parser.add_argument("--n", type=int, help="Retrieval depth (default: IRQA_DEFAULT_DEPTH)")
    parser.add_argument("--format", choices=["text", "tsv"], default="text", help="Summary format on stdout")
    parser.set_defaults(handler=cmd_eval_ext)


def cmd_eval_ext(args: argparse.Namespace, settings: Settings) -> int:
    header, candidate_sets = read_models(args.candidates, CANDIDATE_ARTIFACT, CandidateSet)
    index = load_index(args.index)
    questions = {q.question_id: q for q in load_questions(args.questions)}
    keys = load_keys(args.patterns, args.judgments, settings)
    titles = load_titles(settings.titles_file)
    n = args.n or settings.default_depth

    records: list[HewRecord] = []
    baselines: list[ExtensionBaseline] = []
    used = 0
    for cands in candidate_sets:
        qid = cands.question_id
        if qid not in questions or qid not in keys:
            logger.warning("Candidates for %s have no question text or answer key; skipped", qid)
            continue
        used += 1
        recs, base = evaluate_extensions(
            index,
            questions[qid],
            cands,
            n,
            keys[qid],
            ignore_case=settings.regex_ignore_case,
            titles=titles,
            workers=settings.workers,
        )
        records.extend(recs)
        baselines.extend(base)

    fp = header.fingerprint
    out = output_path(None, settings, "")
    write_jsonl(out / "hews.jsonl", HEW_ARTIFACT, fp, records)
    write_jsonl(out / "hew-baselines.jsonl", BASELINE_ARTIFACT, fp, baselines)
    summary = hew_stats(records, used)
    write_json(out / "hew-summary.json", HEW_SUMMARY_ARTIFACT, fp, summary)
    table = reports.hew_summary_table(summary, fp)
    write_table(out / "hew-summary.tsv", table)
    write_table(out / "hew-examples.tsv", reports.hew_examples_table(records, questions, fp))
    emit_table(table, args.format)
    return 0

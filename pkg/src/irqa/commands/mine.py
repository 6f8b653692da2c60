"""irqa — ``mine`` subcommand: candidate extensions for difficult questions."""

from __future__ import annotations

import argparse
import logging

from irqa.commands.common import add_key_arguments, load_keys, load_questions, output_path
from irqa.config import Settings
from irqa.core.artifacts import CANDIDATE_ARTIFACT, DIFFICULT_ARTIFACT, read_json, write_jsonl
from irqa.core.mining.extension_miner import collect_answer_passages, common_corpus_stems, mine_candidates
from irqa.core.retrieval.snapshot import load_index
from irqa.exceptions import ConfigError
from irqa.models.enums import CorpusFormat
from irqa.models.schemas import CandidateSet, DifficultSet, fingerprint
from irqa.preprocessing.corpus_reader import load_corpus
from irqa.preprocessing.text_processor import default_analyzer_config, load_titles

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("mine", help="Harvest candidate extension words from answer-bearing passages")
    parser.add_argument("--difficult", required=True, help="Difficult-set file written by `irqa difficult`")
    parser.add_argument("--corpus", nargs="+", required=True, help="Corpus files or directories")
    parser.add_argument("--format", choices=[f.value for f in CorpusFormat])
    parser.add_argument("--questions", required=True, help="Question file")
    add_key_arguments(parser)
    parser.add_argument("--index", help="Index snapshot; its analyzer is used and it feeds --common-stem-ratio")
    parser.add_argument("--common-stem-ratio", type=float, help="Also drop stems in more than this share of units")
    parser.add_argument("--output", help="Candidate file (default: <output-dir>/candidates.jsonl)")
    parser.set_defaults(handler=cmd_mine)


def cmd_mine(args: argparse.Namespace, settings: Settings) -> int:
    _, body = read_json(args.difficult, DIFFICULT_ARTIFACT)
    difficult = DifficultSet.model_validate(body)
    index = load_index(args.index) if args.index else None
    if args.common_stem_ratio is not None and index is None:
        raise ConfigError("--common-stem-ratio needs --index")
    analyzer_cfg = index.cfg.analyzer if index is not None else default_analyzer_config(settings)
    common = common_corpus_stems(index, args.common_stem_ratio) if index and args.common_stem_ratio else frozenset()
    titles = load_titles(settings.titles_file)

    corpus = {d.doc_id: d for d in load_corpus(args.corpus, fmt=CorpusFormat(args.format) if args.format else None)}
    questions = {q.question_id: q for q in load_questions(args.questions)}
    keys = load_keys(args.patterns, args.judgments, settings)

    sets: list[CandidateSet] = []
    for qid in difficult.question_ids:
        if qid not in questions or qid not in keys:
            logger.warning("Difficult question %s has no question text or answer key; skipped", qid)
            continue
        passages, missing = collect_answer_passages(keys[qid], corpus, ignore_case=settings.regex_ignore_case)
        sets.append(
            mine_candidates(
                passages,
                questions[qid],
                keys[qid],
                analyzer_cfg,
                titles=titles,
                ignore_case=settings.regex_ignore_case,
                common_stems=common,
                missing_doc_ids=missing,
            )
        )

    fp = fingerprint({"difficult": difficult.model_dump(mode="json"), "analyzer": analyzer_cfg.fingerprint})
    path = write_jsonl(output_path(args.output, settings, "candidates.jsonl"), CANDIDATE_ARTIFACT, fp, sets)
    logger.info("Mined candidates for %d questions (%d terms)", len(sets), sum(len(s.candidates) for s in sets))
    print(path)
    return 0

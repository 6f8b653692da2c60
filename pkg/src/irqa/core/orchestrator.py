"""irqa — Manifest-driven experiment pipeline.

1. Load inputs          → corpus, questions, answer keys
2. Index                → one index per granularity (+ snapshot)
3. Retrieve             → Q and Q+T at the deepest n
4. Evaluate             → run records at every depth (run log)
5. Difficult questions  → zero-hit questions across the consulted runs
6. Mine                 → candidate extensions from answer-bearing passages
7. Evaluate extensions  → HEW records + summary
8. Blind RF             → coverage table, term lists, HEW intersection
9. Reports              → coverage / difficulty tables
"""

from __future__ import annotations

import logging
import shutil
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from irqa.config import Settings, get_settings
from irqa.core.artifacts import (
    BASELINE_ARTIFACT,
    CANDIDATE_ARTIFACT,
    DIFFICULT_ARTIFACT,
    HEW_ARTIFACT,
    HEW_SUMMARY_ARTIFACT,
    RANKED_ARTIFACT,
    RF_TERMS_ARTIFACT,
    write_json,
    write_jsonl,
    write_table,
)
from irqa.core.evaluation import reports
from irqa.core.evaluation.difficulty import identify_difficult
from irqa.core.evaluation.metrics import default_run_id, evaluate_run, truncate
from irqa.core.evaluation.run_log import RunLog
from irqa.core.feedback.relevance_feedback import irt_stems, rf_coverage_experiment, rf_hew_intersection
from irqa.core.mining.extension_miner import (
    collect_answer_passages,
    common_corpus_stems,
    evaluate_extensions,
    mine_candidates,
)
from irqa.core.mining.hew_stats import hew_sets, hew_stats
from irqa.core.retrieval.index import InvertedIndex, index_corpus
from irqa.core.retrieval.retriever import retrieve_questions
from irqa.core.retrieval.snapshot import save_index
from irqa.exceptions import ConfigError, MissingInputError, UndefinedMetricError
from irqa.models.enums import CorpusFormat, DifficultyMode, Granularity, QuestionFormat, VariantKind
from irqa.models.registry import IndexRegistry
from irqa.models.schemas import (
    AnalyzerConfig,
    AnswerKey,
    CandidateSet,
    DifficultSet,
    Document,
    ExtensionBaseline,
    HewRecord,
    IndexConfig,
    Question,
    QueryVariant,
    RankedRun,
    RfConfig,
    RfIntersection,
    RunConfig,
    RunRecord,
    fingerprint,
)
from irqa.preprocessing.corpus_reader import load_corpus
from irqa.preprocessing.dataset_reader import dump_questions, parse_answer_keys, parse_questions
from irqa.preprocessing.text_processor import load_stopwords, load_titles

logger = logging.getLogger(__name__)

OWNER_MARKER = ".irqa-output"


# --- manifest ---


class CorpusSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    paths: list[str] = Field(min_length=1)
    format: CorpusFormat | None = None


class AnswerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    patterns: str
    judgments: str | None = None


class DifficultySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(20, ge=1)
    threshold: float = Field(0.0, ge=0.0)
    mode: DifficultyMode = DifficultyMode.BOTH
    granularities: list[Granularity] | None = None
    variants: list[VariantKind] = [VariantKind.Q]


class MiningSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    enabled: bool = True
    granularity: Granularity = Granularity.PASSAGE
    n: int | None = Field(None, ge=1)
    common_stem_ratio: float | None = Field(None, gt=0.0, le=1.0)


class FeedbackSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    enabled: bool = True
    granularity: Granularity = Granularity.PASSAGE
    ranks: list[int] = [5, 10, 20, 50]
    configs: list[RfConfig] = [RfConfig(r=5, k=5, level=Granularity.DOCUMENT)]

    @field_validator("ranks")
    @classmethod
    def _sorted(cls, v: list[int]) -> list[int]:
        if not v or any(r < 1 for r in v) or v != sorted(set(v)):
            raise ValueError("ranks must be distinct positive integers in ascending order")
        return v


class RunManifest(BaseModel):
    """Declarative experiment matrix; relative paths resolve against the manifest's directory."""

    model_config = ConfigDict(extra="forbid")

    corpus: CorpusSpec
    questions: str
    question_set: str = "default"
    answers: AnswerSpec
    granularities: list[Granularity] = [Granularity.DOCUMENT, Granularity.PASSAGE]
    depths: list[int] = [20]
    difficulty: DifficultySpec = Field(default_factory=DifficultySpec)
    mining: MiningSpec = Field(default_factory=MiningSpec)
    feedback: FeedbackSpec = Field(default_factory=FeedbackSpec)
    stopwords: str | None = None
    titles: str | None = None
    strip_numbers: bool = True
    ignore_case: bool = False
    base_dir: str = Field(".", exclude=True)

    @field_validator("depths")
    @classmethod
    def _depths(cls, v: list[int]) -> list[int]:
        if not v or any(d < 1 for d in v):
            raise ValueError("depths must be positive")
        return sorted(set(v))

    @model_validator(mode="after")
    def _resolvable(self) -> RunManifest:
        grans = set(self.granularities)
        if not grans:
            raise ValueError("at least one granularity is required")
        if self.difficulty.n > max(self.depths):
            raise ValueError(f"difficulty.n={self.difficulty.n} exceeds the deepest run n={max(self.depths)}")
        for g in self.difficulty.granularities or []:
            if g not in grans:
                raise ValueError(f"difficulty granularity {g.value} is not indexed")
        if self.mining.enabled and self.mining.granularity not in grans:
            raise ValueError(f"mining granularity {self.mining.granularity.value} is not indexed")
        if self.feedback.enabled:
            for g in {self.feedback.granularity, *(c.level for c in self.feedback.configs)}:
                if g not in grans:
                    raise ValueError(f"feedback needs a {g.value} index, which is not listed in granularities")
        return self

    def resolve(self, raw: str) -> Path:
        p = Path(raw)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def input_paths(self) -> list[Path]:
        paths = [self.resolve(p) for p in self.corpus.paths]
        paths.append(self.resolve(self.questions))
        paths.append(self.resolve(self.answers.patterns))
        if self.answers.judgments:
            paths.append(self.resolve(self.answers.judgments))
        for extra in (self.stopwords, self.titles):
            if extra:
                paths.append(self.resolve(extra))
        return paths

    def validate_inputs(self) -> None:
        missing = [str(p) for p in self.input_paths() if not p.exists()]
        if missing:
            raise MissingInputError(f"manifest references missing inputs: {', '.join(missing)}")

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.model_dump(mode="json"))


def load_manifest(path: str | Path) -> RunManifest:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"manifest not found: {p}")
    try:
        raw = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: invalid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{p}: manifest must be a mapping")
    try:
        manifest = RunManifest.model_validate({**raw, "base_dir": str(p.parent)})
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(x) for x in e['loc'])}: {e['msg']}" for e in exc.errors())
        raise ConfigError(f"{p}: {problems}") from exc
    manifest.validate_inputs()
    return manifest


# --- pipeline ---


class ExperimentPipeline:
    """Runs a manifest end to end into one output directory it owns."""

    def __init__(self, manifest: RunManifest, output_dir: str | Path, settings: Settings | None = None) -> None:
        self.manifest = manifest
        self.settings = settings or get_settings()
        self.out = Path(output_dir)
        self.workers = self.settings.workers
        self.ignore_case = manifest.ignore_case or self.settings.regex_ignore_case
        self.registry = IndexRegistry()
        self.fingerprint = manifest.fingerprint

        stop_path = manifest.resolve(manifest.stopwords) if manifest.stopwords else self.settings.stopword_file
        titles_path = manifest.resolve(manifest.titles) if manifest.titles else self.settings.titles_file
        self.analyzer_cfg = AnalyzerConfig(
            strip_numbers=manifest.strip_numbers,
            stopword_list=load_stopwords(stop_path),
        )
        self.titles = load_titles(titles_path)

        self.documents: list[Document] = []
        self.questions: list[Question] = []
        self.keys: dict[str, AnswerKey] = {}
        self.indexes: dict[Granularity, InvertedIndex] = {}
        self.runs: list[RunRecord] = []

    def run(self) -> Path:
        m = self.manifest
        logger.info("[pipeline] start fingerprint=%s output=%s", self.fingerprint[:12], self.out)
        self._prepare_output()

        # === Step 1: Load inputs ===
        self._load_inputs()

        # === Step 2: Index ===
        for gran in m.granularities:
            self.indexes[gran] = self._build_index(gran)

        # === Steps 3-4: Retrieve + evaluate ===
        log = RunLog(self.out / "runs.jsonl", fingerprint_value=self.fingerprint)
        for gran in m.granularities:
            for variant in (VariantKind.Q, VariantKind.QT):
                self.runs.extend(self._evaluate(gran, variant))
        log.record_runs(self.runs)

        # === Step 5: Difficult questions ===
        difficult = self._difficult()

        # === Steps 6-7: Mining + extension evaluation ===
        hew_records: list[HewRecord] = []
        if m.mining.enabled:
            hew_records = self._mine(difficult.question_ids)

        # === Step 8: Blind RF ===
        if m.feedback.enabled:
            self._feedback(log, difficult.question_ids, hew_records)

        # === Step 9: Reports ===
        self._reports()
        logger.info("[pipeline] done — %d runs, %d difficult questions", len(self.runs), len(difficult.question_ids))
        return self.out

    def _prepare_output(self) -> None:
        if self.out.exists():
            entries = list(self.out.iterdir())
            if entries and not (self.out / OWNER_MARKER).exists():
                raise ConfigError(f"output directory {self.out} is not empty and was not created by irqa")
            shutil.rmtree(self.out)
        self.out.mkdir(parents=True)
        (self.out / OWNER_MARKER).write_text(self.fingerprint + "\n", encoding="utf-8")

    def _load_inputs(self) -> None:
        m = self.manifest
        self.documents = load_corpus(
            [m.resolve(p) for p in m.corpus.paths],
            fmt=m.corpus.format,
            workers=self.workers,
        )
        self.questions = parse_questions(m.resolve(m.questions).read_bytes())
        judgments = m.resolve(m.answers.judgments).read_bytes() if m.answers.judgments else None
        self.keys = parse_answer_keys(
            m.resolve(m.answers.patterns).read_bytes(), judgments, ignore_case=self.ignore_case
        )
        logger.info(
            "[pipeline] inputs: %d documents, %d questions, %d answer keys",
            len(self.documents),
            len(self.questions),
            len(self.keys),
        )

    def _build_index(self, gran: Granularity) -> InvertedIndex:
        cfg = IndexConfig(
            granularity=gran,
            analyzer=self.analyzer_cfg,
            k1=self.settings.bm25_k1,
            b=self.settings.bm25_b,
        )
        key = f"{gran.value}:{cfg.fingerprint}:{self.fingerprint}"
        index = self.registry.get_or_build(key, lambda: index_corpus(self.documents, cfg, workers=self.workers))
        save_index(index, self.out / "indexes" / f"{gran.value}.json")
        return index

    def _evaluate(self, gran: Granularity, variant: VariantKind) -> list[RunRecord]:
        m = self.manifest
        index = self.indexes[gran]
        deepest = max(m.depths)
        results = retrieve_questions(index, self.questions, QueryVariant(kind=variant), deepest, workers=self.workers)
        ranked = RankedRun(
            granularity=gran,
            index_fingerprint=index.cfg.fingerprint,
            analyzer_fingerprint=self.analyzer_cfg.fingerprint,
            variant=variant,
            n=deepest,
            results=results,
        )
        write_json(
            self.out / "ranked" / f"{gran.value}-{variant.value}.json",
            RANKED_ARTIFACT,
            fingerprint({"index": index.cfg.fingerprint, "variant": variant.value, "n": deepest}),
            ranked,
        )
        config = RunConfig(
            granularity=gran,
            analyzer_fingerprint=self.analyzer_cfg.fingerprint,
            n=deepest,
            variant=variant,
            question_set=m.question_set,
        )
        full = evaluate_run(results, self.keys, index, config, ignore_case=self.ignore_case, workers=self.workers)
        records = []
        for depth in m.depths:
            sub = truncate(full, depth)
            records.append(sub.model_copy(update={"run_id": default_run_id(sub.config)}))
        return records

    def _difficult(self) -> DifficultSet:
        m = self.manifest
        rules = m.difficulty
        grans = set(rules.granularities or m.granularities)
        consulted = [
            r
            for r in self.runs
            if r.config.n == max(m.depths) and r.config.granularity in grans and r.config.variant in rules.variants
        ]
        difficult = identify_difficult(consulted, rules.n, threshold=rules.threshold, mode=rules.mode)
        write_json(self.out / "difficult.json", DIFFICULT_ARTIFACT, self.fingerprint, difficult)
        chosen = set(difficult.question_ids)
        export = [q for q in self.questions if q.question_id in chosen]
        text = dump_questions(export, QuestionFormat.TSV, fingerprint=self.fingerprint)
        (self.out / "difficult-questions.tsv").write_text(text, encoding="utf-8")
        return difficult

    def _mine(self, difficult_ids: list[str]) -> list[HewRecord]:
        m = self.manifest
        index = self.indexes[m.mining.granularity]
        n = m.mining.n or m.difficulty.n
        corpus = {d.doc_id: d for d in self.documents}
        by_id = {q.question_id: q for q in self.questions}
        common = common_corpus_stems(index, m.mining.common_stem_ratio) if m.mining.common_stem_ratio else frozenset()

        candidate_sets: list[CandidateSet] = []
        records: list[HewRecord] = []
        baselines: list[ExtensionBaseline] = []
        used = 0
        for qid in difficult_ids:
            key = self.keys.get(qid)
            if key is None:
                continue
            question = by_id[qid]
            passages, missing = collect_answer_passages(key, corpus, ignore_case=self.ignore_case)
            cands = mine_candidates(
                passages,
                question,
                key,
                self.analyzer_cfg,
                titles=self.titles,
                ignore_case=self.ignore_case,
                common_stems=common,
                missing_doc_ids=missing,
            )
            candidate_sets.append(cands)
            used += 1
            recs, base = evaluate_extensions(
                index,
                question,
                cands,
                n,
                key,
                ignore_case=self.ignore_case,
                titles=self.titles,
                workers=self.workers,
            )
            records.extend(recs)
            baselines.extend(base)

        write_jsonl(self.out / "candidates.jsonl", CANDIDATE_ARTIFACT, self.fingerprint, candidate_sets)
        write_jsonl(self.out / "hews.jsonl", HEW_ARTIFACT, self.fingerprint, records)
        write_jsonl(self.out / "hew-baselines.jsonl", BASELINE_ARTIFACT, self.fingerprint, baselines)
        if used:
            summary = hew_stats(records, used)
            write_json(self.out / "hew-summary.json", HEW_SUMMARY_ARTIFACT, self.fingerprint, summary)
            write_table(self.out / "hew-summary.tsv", reports.hew_summary_table(summary, self.fingerprint))
            write_table(
                self.out / "hew-examples.tsv",
                reports.hew_examples_table(records, by_id, self.fingerprint),
            )
        else:
            logger.warning("[pipeline] no difficult question has an answer key; HEW summary skipped")
        return records

    def _feedback(self, log: RunLog, difficult_ids: list[str], hew_records: list[HewRecord]) -> None:
        m = self.manifest
        fb = m.feedback
        experiment = rf_coverage_experiment(
            self.indexes[fb.granularity],
            self.questions,
            self.keys,
            fb.configs,
            fb.ranks,
            feedback_indexes=self.indexes,
            question_set=m.question_set,
            ignore_case=self.ignore_case,
            workers=self.workers,
        )
        log.record_runs(experiment.records)
        self.runs.extend(experiment.records)
        write_table(self.out / "rf-table.tsv", experiment.table)
        write_table(self.out / "rf-table.txt", experiment.table, text=True)
        write_jsonl(
            self.out / "rf-terms.jsonl",
            RF_TERMS_ARTIFACT,
            self.fingerprint,
            [s for label in sorted(experiment.selections) for s in experiment.selections[label]],
        )

        if not m.mining.enabled or not difficult_ids:
            return
        helpful = hew_sets(hew_records)
        intersections: dict[str, RfIntersection] = {}
        for label, chosen in sorted(experiment.selections.items()):
            by_q = {s.question_id: s for s in chosen if s.question_id in set(difficult_ids)}
            source = self.indexes[by_q[next(iter(by_q))].config.level] if by_q else None
            if source is None:
                continue
            try:
                intersections[label] = rf_hew_intersection(
                    {qid: helpful.get(qid, set()) for qid in by_q},
                    {qid: irt_stems(sel, source) for qid, sel in by_q.items()},
                    {qid: [t.stem for t in sel.terms] for qid, sel in by_q.items()},
                )
            except UndefinedMetricError as exc:
                logger.warning("[pipeline] RF/HEW intersection for %s skipped: %s", label, exc.message)
        if intersections:
            write_table(
                self.out / "rf-intersection.tsv",
                reports.rf_intersection_table(intersections, self.fingerprint),
            )

    def _reports(self) -> None:
        m = self.manifest
        base_runs = [r for r in self.runs if r.config.rf is None and not r.run_id.endswith(":rf-baseline")]
        deepest = [r for r in base_runs if r.config.n == max(m.depths)]
        tables = {
            "coverage-table": reports.coverage_table(base_runs),
            "difficult-counts": reports.difficult_counts(deepest, m.difficulty.n),
            "common-difficult": reports.common_difficult(
                [r for r in deepest if r.config.variant in m.difficulty.variants], m.difficulty.n
            ),
            "coverage-curve": reports.coverage_curve_table(deepest, m.depths),
            "question-redundancy": reports.question_redundancy(deepest),
        }
        for name, table in tables.items():
            write_table(self.out / "reports" / f"{name}.tsv", table)
            write_table(self.out / "reports" / f"{name}.txt", table, text=True)

"""irqa — Pydantic v2 record schemas.

Every record that crosses a file boundary is defined here so that it
round-trips through ``model_dump_json`` / ``model_validate_json``.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from irqa import SCHEMA_VERSION
from irqa.models.enums import DifficultyMode, Granularity, RetrievalStatus, VariantKind


def fingerprint(payload: Any) -> str:
    """SHA-256 over canonical JSON of ``payload``."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ArtifactHeader(BaseModel):
    """First record of every JSON/JSONL artifact."""

    artifact: str
    schema_version: int = SCHEMA_VERSION
    fingerprint: str


# --- text analysis ---


class AnalyzerConfig(BaseModel):
    """Text normalisation settings shared by indexing, queries, mining and RF."""

    model_config = ConfigDict(frozen=True)

    lowercase: bool = True
    strip_numbers: bool = True
    stem: bool = True
    stop: bool = True
    stopword_list: frozenset[str] = frozenset()

    @field_validator("stopword_list", mode="before")
    @classmethod
    def _fold(cls, v: Any) -> frozenset[str]:
        return frozenset(w.strip().lower() for w in v if w and w.strip())

    @field_serializer("stopword_list")
    def _sorted_list(self, v: frozenset[str]) -> list[str]:
        return sorted(v)

    @model_validator(mode="after")
    def _check_stopping(self) -> AnalyzerConfig:
        if self.stop and not self.stopword_list:
            raise ValueError("stopword_list must be non-empty when stopping is enabled")
        return self

    @property
    def fingerprint(self) -> str:
        return fingerprint(
            {
                "lowercase": self.lowercase,
                "strip_numbers": self.strip_numbers,
                "stem": self.stem,
                "stop": self.stop,
                "stopword_list": sorted(self.stopword_list),
            }
        )


# --- corpus ---


class Passage(BaseModel):
    model_config = ConfigDict(frozen=True)

    passage_id: str
    parent_doc_id: str
    ordinal: int = Field(ge=0)
    text: str = Field(min_length=1)


class Document(BaseModel):
    model_config = ConfigDict(frozen=True)

    doc_id: str = Field(min_length=1)
    text: str
    paragraphs: list[str] = []
    passages: list[Passage] = []


# --- QA dataset ---


class Question(BaseModel):
    model_config = ConfigDict(frozen=True)

    question_id: str = Field(min_length=1)
    series_id: str = ""
    target: str = ""
    raw_text: str
    resolved_text: str = ""

    @model_validator(mode="before")
    @classmethod
    def _default_resolved(cls, data: Any) -> Any:
        if isinstance(data, dict) and not str(data.get("resolved_text") or "").strip():
            data = {**data, "resolved_text": data.get("raw_text", "")}
        return data

    @field_validator("resolved_text")
    @classmethod
    def _non_empty(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("resolved_text must be non-empty")
        return v


class AnswerKey(BaseModel):
    """Answer regexes plus the judged supporting documents for one question."""

    model_config = ConfigDict(frozen=True)

    question_id: str
    patterns: list[str] = Field(min_length=1)
    supporting_doc_ids: list[str] = []

    @field_validator("supporting_doc_ids", mode="after")
    @classmethod
    def _sorted_unique(cls, v: list[str]) -> list[str]:
        return sorted(set(v))

    @property
    def supporting(self) -> frozenset[str]:
        return frozenset(self.supporting_doc_ids)


class QueryVariant(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: VariantKind
    extension: str | None = None

    @model_validator(mode="after")
    def _extension_iff_needed(self) -> QueryVariant:
        if self.kind.needs_extension and not (self.extension and self.extension.strip()):
            raise ValueError(f"variant {self.kind.value} requires an extension term")
        if not self.kind.needs_extension and self.extension is not None:
            raise ValueError(f"variant {self.kind.value} takes no extension")
        if self.extension is not None and len(self.extension.split()) != 1:
            raise ValueError("extension must be a single term")
        return self


# --- retrieval ---


class IndexConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    granularity: Granularity
    analyzer: AnalyzerConfig
    k1: float = Field(1.2, gt=0.0)
    b: float = Field(0.75, ge=0.0, le=1.0)

    @property
    def fingerprint(self) -> str:
        return fingerprint(
            {"granularity": self.granularity.value, "analyzer": self.analyzer.fingerprint, "k1": self.k1, "b": self.b}
        )


class RankedEntry(BaseModel):
    unit_id: str
    score: float

    @field_validator("score")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("score must be finite")
        return v


class RankedResult(BaseModel):
    question_id: str
    query: str = ""
    status: RetrievalStatus = RetrievalStatus.OK
    entries: list[RankedEntry] = []


class RankedRun(BaseModel):
    """Ranked lists for a question set under one index and query variant."""

    granularity: Granularity
    index_fingerprint: str
    analyzer_fingerprint: str
    variant: VariantKind = VariantKind.Q
    extension: str | None = None
    n: int = Field(ge=1)
    results: list[RankedResult] = []


# --- evaluation ---


class QuestionHits(BaseModel):
    """Hit counts for one question, plus the 1-based ranks they occurred at."""

    strict_hits: int = Field(0, ge=0)
    lenient_hits: int = Field(0, ge=0)
    retrieved: int = Field(0, ge=0)
    strict_ranks: list[int] = []
    lenient_ranks: list[int] = []

    def hits(self, strict: bool) -> int:
        return self.strict_hits if strict else self.lenient_hits

    def hits_within(self, depth: int, strict: bool) -> int:
        ranks = self.strict_ranks if strict else self.lenient_ranks
        return sum(1 for r in ranks if r <= depth)


class RfConfig(BaseModel):
    """Blind feedback settings: r feedback texts, k appended terms, source level."""

    model_config = ConfigDict(frozen=True)

    r: int = Field(ge=1)
    k: int = Field(5, ge=1)
    level: Granularity = Granularity.DOCUMENT

    @property
    def label(self) -> str:
        return f"r={self.r} {'Doc' if self.level is Granularity.DOCUMENT else 'Para'}"


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    granularity: Granularity
    analyzer_fingerprint: str
    n: int = Field(ge=1)
    variant: VariantKind = VariantKind.Q
    question_set: str = "default"
    rf: RfConfig | None = None

    @property
    def label(self) -> str:
        base = f"{self.granularity.value}/{self.variant.value}"
        return f"{base}/{self.rf.label}" if self.rf else base

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.model_dump(mode="json"))


class RunRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    run_id: str = Field(min_length=1)
    config: RunConfig
    per_question: dict[str, QuestionHits] = {}
    unevaluable: list[str] = []

    @model_validator(mode="after")
    def _check_bounds(self) -> RunRecord:
        for qid, h in self.per_question.items():
            if not (h.strict_hits <= h.lenient_hits <= h.retrieved <= self.config.n):
                raise ValueError(f"question {qid}: expected strict <= lenient <= retrieved <= n")
        return self

    @property
    def warning_count(self) -> int:
        return len(self.unevaluable)

    @property
    def question_ids(self) -> frozenset[str]:
        return frozenset(self.per_question) | frozenset(self.unevaluable)


class DifficultSet(BaseModel):
    question_ids: list[str] = []
    provenance: list[str] = []
    n: int = Field(ge=1)
    mode: DifficultyMode = DifficultyMode.BOTH
    threshold: float = 0.0
    question_set: str = "default"


# --- extension mining ---


class FilterCounts(BaseModel):
    """Tokens removed by each candidate filter, plus whitelist retentions."""

    question_words: int = 0
    target_words: int = 0
    answer_words: int = 0
    stopwords: int = 0
    numbers: int = 0
    common_stems: int = 0
    retained_titles: int = 0


class Candidate(BaseModel):
    model_config = ConfigDict(frozen=True)

    stem: str
    surface: str


class CandidateSet(BaseModel):
    question_id: str
    candidates: list[Candidate] = []
    source_passage_count: int = 0
    filters_applied: FilterCounts = Field(default_factory=FilterCounts)
    missing_doc_ids: list[str] = []


class HewRecord(BaseModel):
    """One (question, extension term, variant) retrieval observation."""

    question_id: str
    term: str
    surface: str = ""
    variant: VariantKind
    strict_redundancy: float = Field(ge=0.0)
    lenient_redundancy: float = Field(ge=0.0)
    baseline_strict: float = Field(0.0, ge=0.0)

    @field_validator("variant")
    @classmethod
    def _extended_only(cls, v: VariantKind) -> VariantKind:
        if not v.needs_extension:
            raise ValueError("HEW records describe extended variants only")
        return v

    @property
    def lifts(self) -> bool:
        return self.baseline_strict == 0 and self.strict_redundancy > 0


class HewSummary(BaseModel):
    difficult_used: int
    variations_tested: int
    questions_benefited: int
    benefited_fraction: float
    hew_count_strict: int
    mean_hew_per_question: float
    mean_redundancy_increase: float


class ExtensionBaseline(BaseModel):
    question_id: str
    variant: VariantKind
    strict_redundancy: float
    lenient_redundancy: float


# --- relevance feedback ---


class RfTerm(BaseModel):
    stem: str
    surface: str
    tf: int = Field(ge=1)


class RfSelection(BaseModel):
    question_id: str
    config: RfConfig
    terms: list[RfTerm] = []
    irt_unit_ids: list[str] = []
    empty_retrieval: bool = False


class RfIntersection(BaseModel):
    """Overlap between HEWs, initially retrieved texts and RF-selected terms."""

    hew_found_in_irt: float = Field(ge=0.0, le=1.0)
    irt_containing_hew: float = Field(ge=0.0, le=1.0)
    rf_words_in_hew: float = Field(ge=0.0, le=1.0)
    hew_found_in_irt_macro: float = Field(0.0, ge=0.0, le=1.0)
    irt_containing_hew_macro: float = Field(0.0, ge=0.0, le=1.0)
    rf_words_in_hew_macro: float = Field(0.0, ge=0.0, le=1.0)
    questions: int = 0

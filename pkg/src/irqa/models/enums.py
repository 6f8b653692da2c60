"""irqa — Shared enumerations."""

from enum import Enum


class Granularity(str, Enum):
    DOCUMENT = "document"
    PASSAGE = "passage"


class VariantKind(str, Enum):
    Q = "Q"
    QT = "QT"
    QE = "QE"
    QTE = "QTE"

    @property
    def needs_extension(self) -> bool:
        return self in (VariantKind.QE, VariantKind.QTE)


class HitClass(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"
    NONE = "none"


class MatchMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


class DifficultyMode(str, Enum):
    BOTH = "both"
    STRICT = "strict"


class RetrievalStatus(str, Enum):
    OK = "ok"
    EMPTY_QUERY = "empty_query"


class CorpusFormat(str, Enum):
    SGML = "sgml"
    JSONL = "jsonl"


class QuestionFormat(str, Enum):
    TSV = "tsv"
    JSONL = "jsonl"


class ReportKind(str, Enum):
    COVERAGE_TABLE = "coverage_table"
    DIFFICULT_COUNTS = "difficult_counts"
    COMMON_DIFFICULT = "common_difficult"
    RF_TABLE = "rf_table"
    COVERAGE_CURVE = "coverage_curve"
    QUESTION_REDUNDANCY = "question_redundancy"
    HEW_SUMMARY = "hew_summary"
    RF_INTERSECTION = "rf_intersection"
    HEW_EXAMPLES = "hew_examples"

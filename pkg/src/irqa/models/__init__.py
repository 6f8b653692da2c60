"""irqa — Models, schemas, and index registry.

Import enums and schemas directly. The registry should be imported from
its own module to avoid circular imports.
"""

from irqa.models.enums import (
    DifficultyMode,
    Granularity,
    HitClass,
    MatchMode,
    ReportKind,
    RetrievalStatus,
    VariantKind,
)
from irqa.models.schemas import (
    AnalyzerConfig,
    AnswerKey,
    Document,
    HewRecord,
    HewSummary,
    IndexConfig,
    Passage,
    Question,
    RankedResult,
    RunRecord,
)

__all__ = [
    "AnalyzerConfig",
    "AnswerKey",
    "DifficultyMode",
    "Document",
    "Granularity",
    "HewRecord",
    "HewSummary",
    "HitClass",
    "IndexConfig",
    "MatchMode",
    "Passage",
    "Question",
    "RankedResult",
    "ReportKind",
    "RetrievalStatus",
    "RunRecord",
    "VariantKind",
]

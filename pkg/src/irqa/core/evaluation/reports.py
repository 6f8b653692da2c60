"""irqa — Report tables.

Every table renders to TSV and to aligned text, both headed by a
``# fingerprint=<hex> schema_version=1`` line. Reals print with three
decimals.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Mapping, Sequence

from pydantic import BaseModel

from irqa import SCHEMA_VERSION
from irqa.core.evaluation.difficulty import identify_difficult
from irqa.core.evaluation.metrics import coverage, redundancy, truncate
from irqa.exceptions import ConfigError, UndefinedMetricError
from irqa.models.enums import DifficultyMode, MatchMode, ReportKind, VariantKind
from irqa.models.schemas import HewRecord, HewSummary, Question, RfIntersection, RunRecord, fingerprint

logger = logging.getLogger(__name__)

Cell = str | int | float | None

METRIC_COLUMNS = ["Coverage Len.", "Coverage Strict", "Redundancy Len.", "Redundancy Strict"]
DEFAULT_RF_RANKS = (5, 10, 20, 50)


class Table(BaseModel):
    kind: ReportKind
    fingerprint: str
    columns: list[str]
    rows: list[list[Cell]] = []


def format_cell(value: Cell) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def _header(table: Table) -> str:
    return f"# fingerprint={table.fingerprint} schema_version={SCHEMA_VERSION}\n"


def render_tsv(table: Table) -> str:
    lines = ["\t".join(table.columns)]
    lines.extend("\t".join(format_cell(c) for c in row) for row in table.rows)
    return _header(table) + "".join(line + "\n" for line in lines)


def render_text(table: Table) -> str:
    cells = [table.columns] + [[format_cell(c) for c in row] for row in table.rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(table.columns))]

    def _line(row: list[str]) -> str:
        head = row[0].ljust(widths[0])
        rest = [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        return "  ".join([head, *rest]).rstrip()

    out = [_line(table.columns), "  ".join("-" * w for w in widths)]
    out.extend(_line(row) for row in cells[1:])
    return _header(table) + "".join(line + "\n" for line in out)


def _runs_fingerprint(kind: ReportKind, runs: Sequence[RunRecord], **extra: object) -> str:
    return fingerprint(
        {"kind": kind.value, "runs": sorted((r.run_id, r.config.fingerprint) for r in runs), **extra}
    )


def _safe(metric, record: RunRecord, mode: MatchMode) -> float | None:
    try:
        return metric(record, mode)
    except UndefinedMetricError:
        return None


def _metric_cells(record: RunRecord) -> list[Cell]:
    return [
        _safe(coverage, record, MatchMode.LENIENT),
        _safe(coverage, record, MatchMode.STRICT),
        _safe(redundancy, record, MatchMode.LENIENT),
        _safe(redundancy, record, MatchMode.STRICT),
    ]


# --- run-based tables ---


def coverage_table(runs: Sequence[RunRecord]) -> Table:
    rows = [[r.run_id, *_metric_cells(r)] for r in runs]
    return Table(
        kind=ReportKind.COVERAGE_TABLE,
        fingerprint=_runs_fingerprint(ReportKind.COVERAGE_TABLE, runs),
        columns=["Run", *METRIC_COLUMNS],
        rows=rows,
    )


def difficult_counts(runs: Sequence[RunRecord], n: int | None = None) -> Table:
    """Difficult questions per run configuration, each run taken on its own."""
    rows: list[list[Cell]] = []
    for r in runs:
        depth = n or r.config.n
        rows.append([r.run_id, depth, len(identify_difficult([r], depth).question_ids)])
    return Table(
        kind=ReportKind.DIFFICULT_COUNTS,
        fingerprint=_runs_fingerprint(ReportKind.DIFFICULT_COUNTS, runs, n=n),
        columns=["Run", "n", "Difficult"],
        rows=rows,
    )


def common_difficult(runs: Sequence[RunRecord], n: int | None = None) -> Table:
    """Questions difficult in every run of a question set, by match type."""
    groups: dict[str, list[RunRecord]] = defaultdict(list)
    for r in runs:
        groups[r.config.question_set].append(r)
    rows: list[list[Cell]] = []
    for qset in sorted(groups):
        group = groups[qset]
        depth = n or min(r.config.n for r in group)
        strict = identify_difficult(group, depth, mode=DifficultyMode.STRICT)
        lenient = identify_difficult(group, depth, mode=DifficultyMode.BOTH)
        rows.append([qset, len(strict.question_ids), len(lenient.question_ids)])
    return Table(
        kind=ReportKind.COMMON_DIFFICULT,
        fingerprint=_runs_fingerprint(ReportKind.COMMON_DIFFICULT, runs, n=n),
        columns=["Question set", "Strict", "Lenient"],
        rows=rows,
    )


def _rf_column(record: RunRecord) -> str:
    return record.config.rf.label if record.config.rf is not None else "Baseline"


def rf_table(runs: Sequence[RunRecord], ranks: Sequence[int] = DEFAULT_RF_RANKS) -> Table:
    """Strict coverage per rank (rows) for each feedback setting plus the baseline (columns)."""
    feedback = sorted(
        (r for r in runs if r.config.rf is not None),
        key=lambda r: (r.config.rf.level.value, r.config.rf.r, r.config.rf.k, r.run_id),
    )
    baselines = [r for r in runs if r.config.rf is None and r.config.variant is VariantKind.Q]
    ordered = feedback + baselines
    labels = [_rf_column(r) for r in ordered]
    seen = defaultdict(int)
    for label in labels:
        seen[label] += 1
    columns = [f"{lbl} ({r.run_id})" if seen[lbl] > 1 else lbl for lbl, r in zip(labels, ordered)]
    rows: list[list[Cell]] = []
    if ordered:
        for rank in sorted(set(ranks)):
            row: list[Cell] = [rank]
            for r in ordered:
                row.append(_safe(coverage, truncate(r, rank), MatchMode.STRICT) if rank <= r.config.n else None)
            rows.append(row)
    return Table(
        kind=ReportKind.RF_TABLE,
        fingerprint=_runs_fingerprint(ReportKind.RF_TABLE, ordered, ranks=sorted(set(ranks))),
        columns=["Rank", *columns],
        rows=rows,
    )


def coverage_curve_table(runs: Sequence[RunRecord], depths: Sequence[int] | None = None) -> Table:
    rows: list[list[Cell]] = []
    for r in runs:
        for depth in sorted(set(depths or [r.config.n])):
            if depth > r.config.n:
                continue
            rows.append([r.run_id, depth, *_metric_cells(truncate(r, depth))])
    return Table(
        kind=ReportKind.COVERAGE_CURVE,
        fingerprint=_runs_fingerprint(ReportKind.COVERAGE_CURVE, runs, depths=sorted(set(depths or []))),
        columns=["Run", "n", *METRIC_COLUMNS],
        rows=rows,
    )


def question_redundancy(runs: Sequence[RunRecord]) -> Table:
    rows: list[list[Cell]] = [
        [r.run_id, qid, h.strict_hits, h.lenient_hits] for r in runs for qid, h in sorted(r.per_question.items())
    ]
    return Table(
        kind=ReportKind.QUESTION_REDUNDANCY,
        fingerprint=_runs_fingerprint(ReportKind.QUESTION_REDUNDANCY, runs),
        columns=["Run", "Question", "Redundancy Strict", "Redundancy Len."],
        rows=rows,
    )


def report(
    runs: Sequence[RunRecord],
    kind: ReportKind | str,
    n: int | None = None,
    ranks: Sequence[int] | None = None,
    depths: Sequence[int] | None = None,
) -> Table:
    """Build one of the run-based report tables."""
    kind = ReportKind(kind)
    if kind is ReportKind.COVERAGE_TABLE:
        return coverage_table(runs)
    if kind is ReportKind.DIFFICULT_COUNTS:
        return difficult_counts(runs, n)
    if kind is ReportKind.COMMON_DIFFICULT:
        return common_difficult(runs, n)
    if kind is ReportKind.RF_TABLE:
        return rf_table(runs, ranks or DEFAULT_RF_RANKS)
    if kind is ReportKind.COVERAGE_CURVE:
        return coverage_curve_table(runs, depths)
    if kind is ReportKind.QUESTION_REDUNDANCY:
        return question_redundancy(runs)
    raise ConfigError(f"report kind {kind.value} is not built from run records")


# --- extension / feedback tables ---


def hew_summary_table(summary: HewSummary, config_fingerprint: str = "") -> Table:
    rows: list[list[Cell]] = [
        ["Difficult questions used", summary.difficult_used],
        ["Variations tested", summary.variations_tested],
        ["Questions that benefited", f"{summary.questions_benefited} ({summary.benefited_fraction:.3f})"],
        ["Helpful extension words (strict)", summary.hew_count_strict],
        ["Mean helpful words per question", summary.mean_hew_per_question],
        ["Mean redundancy increase", summary.mean_redundancy_increase],
    ]
    return Table(
        kind=ReportKind.HEW_SUMMARY,
        fingerprint=config_fingerprint or fingerprint(summary.model_dump(mode="json")),
        columns=["Statistic", "Value"],
        rows=rows,
    )


def rf_intersection_table(results: Mapping[str, RfIntersection], config_fingerprint: str = "") -> Table:
    """One column per feedback setting; micro rows first, then the per-question means."""
    labels = sorted(results)
    metrics = [
        ("HEW found in IRT", "hew_found_in_irt"),
        ("IRT containing HEW", "irt_containing_hew"),
        ("RF words in HEW", "rf_words_in_hew"),
        ("HEW found in IRT (macro)", "hew_found_in_irt_macro"),
        ("IRT containing HEW (macro)", "irt_containing_hew_macro"),
        ("RF words in HEW (macro)", "rf_words_in_hew_macro"),
    ]
    rows: list[list[Cell]] = []
    if labels:
        rows = [[name, *(getattr(results[lbl], attr) for lbl in labels)] for name, attr in metrics]
        rows.append(["Questions", *(results[lbl].questions for lbl in labels)])
    return Table(
        kind=ReportKind.RF_INTERSECTION,
        fingerprint=config_fingerprint
        or fingerprint({lbl: results[lbl].model_dump(mode="json") for lbl in labels}),
        columns=["Metric", *labels],
        rows=rows,
    )


def hew_examples_table(
    records: Sequence[HewRecord],
    questions: Mapping[str, Question],
    config_fingerprint: str = "",
) -> Table:
    """Each helpful word with its strict redundancy averaged over the variants tested."""
    by_term: dict[tuple[str, str], list[HewRecord]] = defaultdict(list)
    for rec in records:
        by_term[(rec.question_id, rec.term)].append(rec)
    rows: list[list[Cell]] = []
    for (qid, term), recs in sorted(by_term.items()):
        if not any(r.lifts for r in recs):
            continue
        q = questions.get(qid)
        surface = next((r.surface for r in recs if r.surface), term)
        mean = sum(r.strict_redundancy for r in recs) / len(recs)
        rows.append([q.raw_text if q else qid, q.target if q else "", surface, mean])
    return Table(
        kind=ReportKind.HEW_EXAMPLES,
        fingerprint=config_fingerprint or fingerprint([r.model_dump(mode="json") for r in records]),
        columns=["Question", "Target", "Extension", "Redundancy"],
        rows=rows,
    )

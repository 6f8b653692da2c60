"""irqa — Helpers shared by the subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from irqa.config import Settings
from irqa.core.evaluation.reports import Table, render_text, render_tsv
from irqa.exceptions import ConfigError, MissingInputError
from irqa.models.enums import Granularity
from irqa.models.schemas import AnswerKey, Question, RfConfig
from irqa.preprocessing.dataset_reader import parse_answer_keys, parse_questions


def read_input(path: str | Path) -> bytes:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"input not found: {p}")
    return p.read_bytes()


def load_questions(path: str | Path) -> list[Question]:
    return parse_questions(read_input(path))


def load_keys(patterns: str | Path, judgments: str | Path | None, settings: Settings) -> dict[str, AnswerKey]:
    return parse_answer_keys(
        read_input(patterns),
        read_input(judgments) if judgments else None,
        ignore_case=settings.regex_ignore_case,
    )


def add_key_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--patterns", required=True, help="Answer patterns file (qid<ws>regex per line)")
    parser.add_argument("--judgments", help="Supporting documents file (qid<ws>docid per line)")


def output_path(explicit: str | None, settings: Settings, default_name: str) -> Path:
    return Path(explicit) if explicit else Path(settings.output_dir) / default_name


def parse_ranks(raw: str) -> list[int]:
    try:
        ranks = [int(x) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"ranks must be comma-separated integers: {raw!r}") from exc
    if not ranks or any(r < 1 for r in ranks):
        raise ConfigError(f"ranks must be positive: {raw!r}")
    return sorted(set(ranks))


def parse_rf_config(raw: str) -> RfConfig:
    """``r[:k[:level]]``, e.g. ``5:5:document`` or ``10:5:passage``."""
    parts = raw.split(":")
    try:
        r = int(parts[0])
        k = int(parts[1]) if len(parts) > 1 and parts[1] else 5
        level = Granularity(parts[2]) if len(parts) > 2 else Granularity.DOCUMENT
        return RfConfig(r=r, k=k, level=level)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"feedback setting must look like r:k:level, got {raw!r}") from exc


def emit_table(table: Table, fmt: str = "text", output: str | None = None) -> None:
    rendered = render_tsv(table) if fmt == "tsv" else render_text(table)
    if output:
        p = Path(output)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)

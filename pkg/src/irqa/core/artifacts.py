"""irqa — Artifact files: JSON/JSONL with a versioned header, and report tables.

Every artifact is written with sorted keys and no timestamps so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from irqa import SCHEMA_VERSION
from irqa.core.evaluation.reports import Table, render_text, render_tsv
from irqa.exceptions import MissingInputError, ParseError, SchemaVersionError
from irqa.models.schemas import ArtifactHeader

M = TypeVar("M", bound=BaseModel)

RANKED_ARTIFACT = "irqa-ranked"
DIFFICULT_ARTIFACT = "irqa-difficult"
CANDIDATE_ARTIFACT = "irqa-candidates"
HEW_ARTIFACT = "irqa-hews"
BASELINE_ARTIFACT = "irqa-hew-baselines"
HEW_SUMMARY_ARTIFACT = "irqa-hew-summary"
RF_TERMS_ARTIFACT = "irqa-rf-terms"


def _line(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"


def write_jsonl(path: str | Path, artifact: str, fingerprint: str, records: Iterable[BaseModel | dict]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        fh.write(_line(ArtifactHeader(artifact=artifact, fingerprint=fingerprint)))
        for record in records:
            fh.write(_line(record))
    return p


def write_json(path: str | Path, artifact: str, fingerprint: str, body: BaseModel | dict) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    payload = {"header": ArtifactHeader(artifact=artifact, fingerprint=fingerprint).model_dump(mode="json")}
    payload["body"] = body.model_dump(mode="json") if isinstance(body, BaseModel) else body
    p.write_text(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return p


def _check_header(path: Path, raw: Any, artifact: str) -> ArtifactHeader:
    try:
        header = ArtifactHeader.model_validate(raw)
    except ValidationError as exc:
        raise ParseError(f"{path}: missing artifact header") from exc
    if header.artifact != artifact:
        raise ParseError(f"{path}: expected {artifact} artifact, found {header.artifact}")
    if header.schema_version != SCHEMA_VERSION:
        raise SchemaVersionError(f"{path}: schema_version {header.schema_version}, expected {SCHEMA_VERSION}")
    return header


def read_jsonl(path: str | Path, artifact: str) -> tuple[ArtifactHeader, list[dict]]:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"artifact not found: {p}")
    rows: list[dict] = []
    header: ArtifactHeader | None = None
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{p}: malformed record", line=lineno) from exc
        if header is None:
            header = _check_header(p, raw, artifact)
            continue
        rows.append(raw)
    if header is None:
        raise ParseError(f"{p}: empty artifact")
    return header, rows


def read_models(path: str | Path, artifact: str, model: type[M]) -> tuple[ArtifactHeader, list[M]]:
    header, rows = read_jsonl(path, artifact)
    try:
        return header, [model.model_validate(r) for r in rows]
    except ValidationError as exc:
        raise ParseError(f"{path}: invalid {artifact} record: {exc.errors()[0]['msg']}") from exc


def read_json(path: str | Path, artifact: str) -> tuple[ArtifactHeader, dict]:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"artifact not found: {p}")
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: malformed JSON artifact") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"{p}: malformed JSON artifact")
    header = _check_header(p, payload.get("header"), artifact)
    return header, payload.get("body", {})


def write_table(path: str | Path, table: Table, text: bool = False) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(render_text(table) if text else render_tsv(table), encoding="utf-8")
    return p

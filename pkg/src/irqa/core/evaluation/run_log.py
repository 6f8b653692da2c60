"""irqa — Append-only run log (JSONL of RunRecord)."""

from __future__ import annotations

import json
import logging
import threading
from collections.abc import Iterable
from pathlib import Path

from pydantic import ValidationError

from irqa import SCHEMA_VERSION
from irqa.exceptions import DuplicateIdError, ParseError, SchemaVersionError
from irqa.models.enums import Granularity, VariantKind
from irqa.models.schemas import ArtifactHeader, RunRecord, fingerprint

logger = logging.getLogger(__name__)

ARTIFACT = "irqa-runs"


def _dump(record: RunRecord) -> str:
    return json.dumps(record.model_dump(mode="json"), sort_keys=True, ensure_ascii=False)


class RunLog:
    """Single-writer run log; appends are whole lines written under a lock."""

    def __init__(self, path: str | Path, fingerprint_value: str | None = None) -> None:
        self.path = Path(path)
        self.fingerprint = fingerprint_value or fingerprint({"artifact": ARTIFACT, "schema_version": SCHEMA_VERSION})
        self._lock = threading.Lock()
        self._ids: set[str] | None = None

    def _known_ids(self) -> set[str]:
        if self._ids is None:
            self._ids = {r.run_id for r in self._read()} if self.path.exists() else set()
        return self._ids

    def record_run(self, record: RunRecord) -> None:
        with self._lock:
            ids = self._known_ids()
            if record.run_id in ids:
                raise DuplicateIdError("run id", [record.run_id])
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists() or self.path.stat().st_size == 0
            with self.path.open("a", encoding="utf-8") as fh:
                if fresh:
                    header = ArtifactHeader(artifact=ARTIFACT, fingerprint=self.fingerprint)
                    fh.write(json.dumps(header.model_dump(mode="json"), sort_keys=True) + "\n")
                fh.write(_dump(record) + "\n")
                fh.flush()
            ids.add(record.run_id)
        logger.info("Recorded run %s (%d questions)", record.run_id, len(record.per_question))

    def record_runs(self, records: Iterable[RunRecord]) -> None:
        for record in records:
            self.record_run(record)

    def _read(self) -> list[RunRecord]:
        records: list[RunRecord] = []
        lines = self.path.read_text(encoding="utf-8").splitlines()
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{self.path}: malformed record", line=lineno) from exc
            if isinstance(raw, dict) and "artifact" in raw:
                header = ArtifactHeader.model_validate(raw)
                if header.artifact != ARTIFACT or header.schema_version != SCHEMA_VERSION:
                    raise SchemaVersionError(
                        f"{self.path}: unsupported run log {header.artifact} v{header.schema_version}"
                    )
                continue
            if isinstance(raw, dict) and raw.get("schema_version") != SCHEMA_VERSION:
                raise SchemaVersionError(f"{self.path} line {lineno}: schema_version {raw.get('schema_version')}")
            try:
                records.append(RunRecord.model_validate(raw))
            except ValidationError as exc:
                raise ParseError(f"{self.path}: invalid run record", line=lineno) from exc
        return records

    def load_runs(
        self,
        run_ids: Iterable[str] | None = None,
        granularity: Granularity | str | None = None,
        variant: VariantKind | str | None = None,
        n: int | None = None,
        question_set: str | None = None,
        rf: bool | None = None,
    ) -> list[RunRecord]:
        """Records in log order matching every given filter."""
        if not self.path.exists():
            return []
        wanted = set(run_ids) if run_ids is not None else None
        gran = Granularity(granularity) if granularity is not None else None
        var = VariantKind(variant) if variant is not None else None
        out = []
        for record in self._read():
            cfg = record.config
            if wanted is not None and record.run_id not in wanted:
                continue
            if gran is not None and cfg.granularity is not gran:
                continue
            if var is not None and cfg.variant is not var:
                continue
            if n is not None and cfg.n != n:
                continue
            if question_set is not None and cfg.question_set != question_set:
                continue
            if rf is not None and (cfg.rf is not None) != rf:
                continue
            out.append(record)
        return out

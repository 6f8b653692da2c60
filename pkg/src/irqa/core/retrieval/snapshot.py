"""irqa — Single-file index snapshots.

Layout (one JSON object, keys sorted)::

    {"header": {"artifact": "irqa-index", "schema_version": 1, "fingerprint": <IndexConfig fingerprint>},
     "config": <IndexConfig>,
     "units": [{"id", "parent", "text", "terms": [[surface, stem], ...]}, ...]}

Loading rebuilds postings from the stored terms, so a snapshot never
depends on the stopword file present at load time.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from irqa import SCHEMA_VERSION
from irqa.core.retrieval.index import IndexUnit, InvertedIndex
from irqa.exceptions import MissingInputError, ParseError, SchemaVersionError
from irqa.models.schemas import ArtifactHeader, IndexConfig
from irqa.preprocessing.text_processor import Term

logger = logging.getLogger(__name__)

ARTIFACT = "irqa-index"


def dumps_index(index: InvertedIndex) -> str:
    header = ArtifactHeader(artifact=ARTIFACT, fingerprint=index.cfg.fingerprint)
    payload = {
        "header": header.model_dump(mode="json"),
        "config": index.cfg.model_dump(mode="json"),
        "units": [
            {
                "id": uid,
                "parent": index.unit_parent[uid],
                "text": index.unit_text[uid],
                "terms": [[t.surface, t.stem] for t in index.unit_terms[uid]],
            }
            for uid in sorted(index.unit_text)
        ],
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"


def save_index(index: InvertedIndex, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps_index(index), encoding="utf-8")
    logger.info("Saved %s index snapshot (%d units) to %s", index.granularity.value, index.unit_count, p)
    return p


def load_index(path: str | Path) -> InvertedIndex:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"index snapshot not found: {p}")
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
        header = ArtifactHeader.model_validate(payload["header"])
    except (json.JSONDecodeError, KeyError, TypeError, ValidationError) as exc:
        raise ParseError(f"not an index snapshot: {p}") from exc
    if header.artifact != ARTIFACT or header.schema_version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"{p}: unsupported snapshot {header.artifact} v{header.schema_version}"
            f" (expected {ARTIFACT} v{SCHEMA_VERSION})"
        )
    try:
        cfg = IndexConfig.model_validate(payload["config"])
        units = [IndexUnit(u["id"], u["parent"], u["text"]) for u in payload["units"]]
        terms = {u["id"]: tuple(Term(surface=s, stem=st) for s, st in u["terms"]) for u in payload["units"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"corrupt index snapshot: {p}") from exc
    if cfg.fingerprint != header.fingerprint:
        raise SchemaVersionError(f"{p}: snapshot fingerprint does not match its config")
    index = InvertedIndex(cfg, units, terms)
    logger.info("Loaded %s index snapshot (%d units) from %s", cfg.granularity.value, index.unit_count, p)
    return index

"""irqa — Corpus ingest: TREC SGML and JSONL readers, passage segmentation."""

from __future__ import annotations

import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import IO

from pydantic import BaseModel, ValidationError, model_validator

from irqa.exceptions import DuplicateIdError, MissingInputError, ParseError
from irqa.models.enums import CorpusFormat
from irqa.models.schemas import Document, Passage

logger = logging.getLogger(__name__)

_DOC_OPEN = b"<DOC>"
_DOC_CLOSE = b"</DOC>"
_DOCNO_RE = re.compile(r"<DOCNO>(.*?)</DOCNO>", re.S | re.I)
_TEXT_RE = re.compile(r"<TEXT>(.*?)</TEXT>", re.S | re.I)
_P_RE = re.compile(r"<P>(.*?)</P>", re.S | re.I)
_TAG_RE = re.compile(r"<[^>]+>")
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos);")
_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_WS_RE = re.compile(r"\s+")

_JSONL_SUFFIXES = {".jsonl", ".json", ".ndjson"}


def _clean(fragment: str) -> str:
    text = _TAG_RE.sub(" ", fragment)
    text = _ENTITY_RE.sub(lambda m: _ENTITIES[m.group(1)], text)
    return _WS_RE.sub(" ", text).strip()


def _read_bytes(stream: bytes | str | IO) -> bytes:
    data = stream if isinstance(stream, (bytes, str)) else stream.read()
    return data.encode("utf-8") if isinstance(data, str) else data


def segment_passages(doc: Document) -> list[Passage]:
    """Passages from non-blank paragraphs in order; the whole text when there are none."""
    bodies = [p.strip() for p in doc.paragraphs if p.strip()]
    if not bodies and doc.text.strip():
        bodies = [doc.text.strip()]
    return [
        Passage(passage_id=f"{doc.doc_id}#{i}", parent_doc_id=doc.doc_id, ordinal=i, text=body)
        for i, body in enumerate(bodies)
    ]


def _make_document(doc_id: str, paragraphs: list[str]) -> Document | None:
    kept = [p for p in paragraphs if p.strip()]
    if not kept:
        logger.warning("Document %s has no text; skipped", doc_id)
        return None
    doc = Document(doc_id=doc_id, text="\n\n".join(kept), paragraphs=paragraphs)
    return doc.model_copy(update={"passages": segment_passages(doc)})


def _sgml_paragraphs(body: str) -> list[str]:
    paragraphs: list[str] = []
    for text_match in _TEXT_RE.finditer(body):
        inner = text_match.group(1)
        cursor = 0
        found = False
        for p in _P_RE.finditer(inner):
            found = True
            gap = _clean(inner[cursor : p.start()])
            if gap:
                paragraphs.append(gap)
            paragraphs.append(_clean(p.group(1)))
            cursor = p.end()
        tail = _clean(inner[cursor:])
        if tail or not found:
            paragraphs.append(tail)
    return paragraphs


def _check_unique(documents: list[Document]) -> None:
    counts = Counter(d.doc_id for d in documents)
    dups = sorted(k for k, c in counts.items() if c > 1)
    if dups:
        raise DuplicateIdError("document id", dups)


def parse_trec_sgml(stream: bytes | str | IO) -> list[Document]:
    """One Document per ``<DOC>`` block; ``<P>`` elements inside ``<TEXT>`` become passages."""
    data = _read_bytes(stream)
    documents: list[Document] = []
    last_good: str | None = None
    pos = 0
    while True:
        start = data.find(_DOC_OPEN, pos)
        if start < 0:
            break
        end = data.find(_DOC_CLOSE, start)
        reopened = data.find(_DOC_OPEN, start + len(_DOC_OPEN))
        if end < 0 or 0 <= reopened < end:
            raise ParseError("unclosed <DOC> block", offset=start, last_good_id=last_good)
        body = data[start + len(_DOC_OPEN) : end].decode("utf-8", errors="replace")
        docno = _DOCNO_RE.search(body)
        if docno is None or not docno.group(1).strip():
            raise ParseError("<DOC> block without DOCNO", offset=start, last_good_id=last_good)
        doc_id = docno.group(1).strip()
        doc = _make_document(doc_id, _sgml_paragraphs(body))
        if doc is not None:
            documents.append(doc)
        last_good = doc_id
        pos = end + len(_DOC_CLOSE)
    _check_unique(documents)
    return documents


class _JsonlRecord(BaseModel):
    id: str
    text: str | None = None
    paragraphs: list[str] | None = None

    @model_validator(mode="after")
    def _has_body(self) -> _JsonlRecord:
        if not self.id.strip() or (self.text is None and self.paragraphs is None):
            raise ValueError("record needs id and text or paragraphs")
        return self


def parse_jsonl(stream: bytes | str | IO) -> list[Document]:
    """One JSON object per line with ``id`` and ``text`` or ``paragraphs``."""
    data = _read_bytes(stream).decode("utf-8", errors="replace")
    documents: list[Document] = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = _JsonlRecord.model_validate_json(line)
        except ValidationError as exc:
            raise ParseError("malformed record", line=lineno) from exc
        paragraphs = record.paragraphs if record.paragraphs is not None else [record.text or ""]
        doc = _make_document(record.id.strip(), [_WS_RE.sub(" ", p).strip() for p in paragraphs])
        if doc is not None:
            documents.append(doc)
    _check_unique(documents)
    return documents


def detect_format(path: str | Path) -> CorpusFormat:
    return CorpusFormat.JSONL if Path(path).suffix.lower() in _JSONL_SUFFIXES else CorpusFormat.SGML


def _expand(paths: list[str | Path]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(f for f in p.iterdir() if f.is_file()))
        elif p.is_file():
            files.append(p)
        else:
            raise MissingInputError(f"corpus file not found: {p}")
    return files


def load_corpus(
    paths: list[str | Path],
    fmt: CorpusFormat | None = None,
    workers: int = 1,
) -> list[Document]:
    """Parse corpus files (in parallel, one file per task) preserving file order."""
    files = _expand(paths)

    def _parse(path: Path) -> list[Document]:
        kind = fmt or detect_format(path)
        reader = parse_jsonl if kind is CorpusFormat.JSONL else parse_trec_sgml
        logger.info("Parsing %s corpus file %s", kind.value, path)
        return reader(path.read_bytes())

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        parts = list(pool.map(_parse, files))
    documents = [doc for part in parts for doc in part]
    _check_unique(documents)
    logger.info(
        "Corpus loaded: %d documents, %d passages from %d files",
        len(documents),
        sum(len(d.passages) for d in documents),
        len(files),
    )
    return documents

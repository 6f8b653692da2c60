"""irqa — In-memory inverted index over documents or passages."""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

from irqa.exceptions import DuplicateIdError
from irqa.models.enums import Granularity
from irqa.models.schemas import Document, IndexConfig, Passage
from irqa.preprocessing.text_processor import Analyzer, Term, get_analyzer

logger = logging.getLogger(__name__)


class IndexUnit(NamedTuple):
    unit_id: str
    parent_doc_id: str
    text: str


class Posting(NamedTuple):
    unit_id: str
    tf: int


def units_for(documents: Iterable[Document], granularity: Granularity) -> list[IndexUnit]:
    """Retrievable units of a corpus at the given granularity."""
    if granularity is Granularity.DOCUMENT:
        return [IndexUnit(d.doc_id, d.doc_id, d.text) for d in documents]
    return [IndexUnit(p.passage_id, p.parent_doc_id, p.text) for d in documents for p in d.passages]


def _as_unit(item: Document | Passage | IndexUnit) -> IndexUnit:
    if isinstance(item, IndexUnit):
        return item
    if isinstance(item, Passage):
        return IndexUnit(item.passage_id, item.parent_doc_id, item.text)
    return IndexUnit(item.doc_id, item.doc_id, item.text)


class InvertedIndex:
    """Postings, unit lengths and stored texts; treat as read-only after build."""

    def __init__(
        self,
        cfg: IndexConfig,
        units: Sequence[IndexUnit],
        unit_terms: dict[str, tuple[Term, ...]],
    ) -> None:
        self.cfg = cfg
        ordered = sorted(units, key=lambda u: u.unit_id)
        self.unit_text: dict[str, str] = {u.unit_id: u.text for u in ordered}
        self.unit_parent: dict[str, str] = {u.unit_id: u.parent_doc_id for u in ordered}
        self.unit_terms = unit_terms
        self.unit_lengths: dict[str, int] = {u.unit_id: len(unit_terms[u.unit_id]) for u in ordered}
        self.unit_tf: dict[str, Counter[str]] = {}
        postings: dict[str, list[Posting]] = {}
        for u in ordered:
            tf = Counter(t.stem for t in unit_terms[u.unit_id])
            self.unit_tf[u.unit_id] = tf
            for stem, count in tf.items():
                postings.setdefault(stem, []).append(Posting(u.unit_id, count))
        self.postings = postings
        self.unit_count = len(self.unit_lengths)
        self.avg_length = sum(self.unit_lengths.values()) / self.unit_count if self.unit_count else 0.0

    @property
    def granularity(self) -> Granularity:
        return self.cfg.granularity

    @property
    def analyzer(self) -> Analyzer:
        return get_analyzer(self.cfg.analyzer)

    def df(self, stem: str) -> int:
        return len(self.postings.get(stem, ()))

    def idf(self, stem: str) -> float:
        df = self.df(stem)
        return math.log(1.0 + (self.unit_count - df + 0.5) / (df + 0.5))

    def __len__(self) -> int:
        return self.unit_count


def build_index(
    units: Iterable[Document | Passage | IndexUnit],
    cfg: IndexConfig,
    workers: int = 1,
) -> InvertedIndex:
    """Analyze every unit and build postings sorted by unit id."""
    items = [_as_unit(u) for u in units]
    counts = Counter(u.unit_id for u in items)
    dups = sorted(k for k, c in counts.items() if c > 1)
    if dups:
        raise DuplicateIdError("unit id", dups)

    analyzer = get_analyzer(cfg.analyzer)
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        analyzed = list(pool.map(lambda u: tuple(analyzer.analyze(u.text)), items))
    unit_terms = {u.unit_id: terms for u, terms in zip(items, analyzed)}

    index = InvertedIndex(cfg, items, unit_terms)
    logger.info(
        "Built %s index: %d units, %d stems, avg length %.1f",
        cfg.granularity.value,
        index.unit_count,
        len(index.postings),
        index.avg_length,
    )
    return index


def index_corpus(documents: Sequence[Document], cfg: IndexConfig, workers: int = 1) -> InvertedIndex:
    return build_index(units_for(documents, cfg.granularity), cfg, workers=workers)

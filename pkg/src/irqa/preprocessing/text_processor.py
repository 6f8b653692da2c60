"""irqa — Text analysis: tokenization, Porter stemming and stopping.

One pipeline serves indexing, query formulation, extension mining and
feedback term selection, so every stage sees identical stems.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING

from nltk.stem.porter import PorterStemmer

from irqa.exceptions import MissingInputError
from irqa.models.schemas import AnalyzerConfig

if TYPE_CHECKING:
    from irqa.config import Settings

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+(?:['’.][^\W_]+)*")
_DIGITS_RE = re.compile(r"^[0-9]+$")
_POSSESSIVE_RE = re.compile(r"['’]s$", re.IGNORECASE)
_APOSTROPHE_RE = re.compile(r"['’]")

_STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@dataclass(frozen=True, slots=True)
class Term:
    """An analyzed token. ``surface`` keeps the token's case so it re-analyzes to ``stem``."""

    surface: str
    stem: str


def tokenize(text: str | bytes) -> list[str]:
    """Split text into alphanumeric runs.

    Internal apostrophes are kept ("don't"). Period-joined runs become one
    token only when every segment is one or two letters ("U.S." -> "US");
    any other period splits the run ("3.5" -> "3", "5"). Trailing
    punctuation never reaches a token.
    """
    return [token for token, _, _ in tokenize_with_spans(text)]


def tokenize_with_spans(text: str | bytes) -> list[tuple[str, int, int]]:
    """Tokens with the character span of the run each came from."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    tokens: list[tuple[str, int, int]] = []
    for match in _TOKEN_RE.finditer(text):
        run, start, end = match.group(0), match.start(), match.end()
        if "." not in run:
            tokens.append((run, start, end))
            continue
        segments = run.split(".")
        if all(seg.isalpha() and len(seg) <= 2 for seg in segments):
            tokens.append(("".join(segments), start, end))
            continue
        offset = start
        for seg in segments:
            tokens.append((seg, offset, offset + len(seg)))
            offset += len(seg) + 1
    return tokens


@lru_cache(maxsize=65536)
def porter_stem(token: str) -> str:
    """Porter (1980) stem of ``token``, lowercased first."""
    word = token.lower()
    if len(word) <= 2:
        return word
    return _STEMMER.stem(word)


def normalize_token(token: str) -> str:
    """Drop a possessive 's and any remaining apostrophes."""
    return _APOSTROPHE_RE.sub("", _POSSESSIVE_RE.sub("", token))


class Analyzer:
    """Applies one AnalyzerConfig; holds the stemmed stopword closure."""

    def __init__(self, cfg: AnalyzerConfig) -> None:
        self.cfg = cfg
        self.stopwords = cfg.stopword_list if cfg.stop else frozenset()
        self.stop_closure: frozenset[str] = frozenset()
        if cfg.stop:
            folded = {normalize_token(w) for w in self.stopwords} | set(self.stopwords)
            folded.discard("")
            self.stop_closure = frozenset(porter_stem(w) for w in folded) if cfg.stem else frozenset(folded)

    def is_stopword(self, surface: str, stem: str | None = None) -> bool:
        if not self.cfg.stop:
            return False
        folded = surface.lower()
        if folded in self.stopwords or normalize_token(folded) in self.stopwords:
            return True
        return stem is not None and stem.lower() in self.stop_closure

    def stem(self, token: str) -> str:
        word = normalize_token(token)
        if self.cfg.lowercase:
            word = word.lower()
        if self.cfg.stem:
            return porter_stem(word)
        return word

    def analyze(self, text: str | bytes) -> list[Term]:
        terms: list[Term] = []
        for token in tokenize(text):
            surface = normalize_token(token)
            if not surface:
                continue
            folded = surface.lower() if self.cfg.lowercase else surface
            if self.cfg.stop and (token.lower() in self.stopwords or surface.lower() in self.stopwords):
                continue
            if self.cfg.strip_numbers and _DIGITS_RE.match(surface):
                continue
            stem = porter_stem(folded) if self.cfg.stem else folded
            if self.cfg.strip_numbers and _DIGITS_RE.match(stem):
                continue
            if self.cfg.stop and stem.lower() in self.stop_closure:
                continue
            terms.append(Term(surface=surface, stem=stem))
        return terms

    def stems(self, text: str | bytes) -> list[str]:
        return [t.stem for t in self.analyze(text)]

    def round_trips(self, surface: str, stem: str) -> bool:
        """True when ``surface`` alone analyzes to exactly ``stem``."""
        return self.stems(surface) == [stem]


@lru_cache(maxsize=32)
def get_analyzer(cfg: AnalyzerConfig) -> Analyzer:
    return Analyzer(cfg)


def analyze(text: str | bytes, cfg: AnalyzerConfig) -> list[Term]:
    """tokenize -> lowercase -> stop -> strip numbers -> stem, order and duplicates kept."""
    return get_analyzer(cfg).analyze(text)


def _read_word_list(path: str | Path | None, resource: str) -> frozenset[str]:
    if path is None:
        text = resources.files("irqa.resources").joinpath(resource).read_text(encoding="utf-8")
    else:
        p = Path(path)
        if not p.is_file():
            raise MissingInputError(f"word list not found: {p}")
        text = p.read_text(encoding="utf-8", errors="replace")
    words = {line.strip().lower() for line in text.splitlines()}
    return frozenset(w for w in words if w and not w.startswith("#"))


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword file, one word per line; the shipped list when ``path`` is None."""
    words = _read_word_list(path, "stopwords.txt")
    logger.debug("Loaded %d stopwords from %s", len(words), path or "shipped list")
    return words


def load_titles(path: str | Path | None = None) -> frozenset[str]:
    """Title/appellation whitelist, compared by lowercased surface form."""
    return frozenset(normalize_token(w) for w in _read_word_list(path, "titles.txt"))


def default_analyzer_config(settings: Settings) -> AnalyzerConfig:
    return AnalyzerConfig(
        strip_numbers=settings.strip_numbers,
        stopword_list=load_stopwords(settings.stopword_file),
    )

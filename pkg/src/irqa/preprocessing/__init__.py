"""irqa — Text analysis and input readers."""

from irqa.preprocessing.text_processor import Analyzer, Term, analyze, porter_stem, tokenize

__all__ = [
    "Analyzer",
    "Term",
    "analyze",
    "porter_stem",
    "tokenize",
]

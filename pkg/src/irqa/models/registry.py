"""irqa — Thread-safe registry of built or loaded indexes."""

from __future__ import annotations

import logging
import threading
from collections.abc import Callable
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from irqa.core.retrieval.index import InvertedIndex

logger = logging.getLogger(__name__)


class IndexRegistry:
    """Singleton cache of indexes keyed by (granularity, config fingerprint, source)."""

    _instance: IndexRegistry | None = None
    _lock = threading.Lock()

    def __new__(cls) -> IndexRegistry:
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._indexes = {}
        return cls._instance

    def register(self, key: str, index: InvertedIndex) -> None:
        with self._lock:
            self._indexes[key] = index
        logger.info("Registered index: %s (%d units)", key, index.unit_count)

    def get(self, key: str) -> InvertedIndex | None:
        return self._indexes.get(key)

    def get_or_build(self, key: str, build: Callable[[], InvertedIndex]) -> InvertedIndex:
        index = self.get(key)
        if index is None:
            index = build()
            self.register(key, index)
        return index

    @classmethod
    def reset(cls) -> None:
        """Reset singleton (for testing)."""
        with cls._lock:
            if cls._instance is not None:
                cls._instance._indexes.clear()
            cls._instance = None

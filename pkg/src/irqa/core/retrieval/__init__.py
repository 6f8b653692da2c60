"""BM25 inverted index and ranked retrieval."""

"""irqa — retrieval analysis for question answering."""

__version__ = "1.0.0"
SCHEMA_VERSION = 1

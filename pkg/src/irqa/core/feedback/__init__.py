"""Blind relevance feedback."""

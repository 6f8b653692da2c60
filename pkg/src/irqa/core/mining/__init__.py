"""Candidate extension mining and helpful-extension-word statistics."""

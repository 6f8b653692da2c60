"""Shipped word lists (stopwords, title whitelist)."""

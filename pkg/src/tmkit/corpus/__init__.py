"""Corpus files: the inventory case-study model and its scenarios."""

"""Lexicon unification toolkit."""

"""Ramsey numbers of pairs of trees: constructions, lemmas and exact search."""

__version__ = "0.1.0"

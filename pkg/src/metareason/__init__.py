"""Bounded relational reasoning over metamodels with first-order semantics."""

__version__ = "0.1.0"

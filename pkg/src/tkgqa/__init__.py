"""Temporal-KG question/answer dataset generation and retrieval evaluation."""

__version__ = "0.1.0"

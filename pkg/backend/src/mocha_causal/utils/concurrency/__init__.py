"""Concurrency helpers."""

from .batch_processor import BatchProcessor

__all__ = ["BatchProcessor"]

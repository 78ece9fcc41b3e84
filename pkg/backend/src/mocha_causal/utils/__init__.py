"""Utility helpers: errors, file formats and concurrency."""

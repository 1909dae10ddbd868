"""Bellscope test suite."""

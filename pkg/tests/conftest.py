"""Pytest anchor; keeps the tests directory importable for shared helpers."""

from __future__ import annotations

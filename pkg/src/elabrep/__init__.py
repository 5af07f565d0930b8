"""Exact modular representation theory for elementary abelian p-groups."""

from __future__ import annotations

__version__ = "0.1.0"

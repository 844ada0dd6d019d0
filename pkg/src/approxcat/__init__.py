"""Approximate categories for orbit and graph isomorphism problems over F_p."""

from __future__ import annotations

__version__ = "0.1.0"

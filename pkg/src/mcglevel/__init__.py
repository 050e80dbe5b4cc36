"""Exact computations for level subgroups of symplectic and mapping class groups."""

from __future__ import annotations

__version__ = "0.1.0"

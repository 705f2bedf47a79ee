"""Exact verification of holonomy-twisted matrix-tree identities."""

__version__ = "0.1.0"

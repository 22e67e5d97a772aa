"""Desk-scale app-delegation gateway built on a log-indexed ledger."""

__version__ = "0.1.0"

"""Carry wedge between an ETF-options rail and a futures rail for bitcoin.

The package extracts put-call-parity forwards from ETF option quotes,
compares their annualized carry with matched futures carry over a bitcoin
reference rate, and summarizes the difference as a daily wedge series.
"""

from __future__ import annotations

__version__ = "0.1.0"

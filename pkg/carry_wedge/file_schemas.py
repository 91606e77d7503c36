"""Metadata definitions for the pipeline's input and output files.

INPUT_SCHEMAS maps each canonical input kind to its file name, header and
uniqueness key. The *_META dictionaries map each output column to how its
value is obtained from a row object and encoded:

    - field: Attribute name read from the row object.
    - encode: "text", "date", "float" (shortest round-trip) or "fixed".
    - scale: Multiplier applied before encoding (100 for percentage points).
    - decimals: Fixed decimals for "fixed" encoding.

Output headers are the dictionary keys, in insertion order.
"""

from __future__ import annotations

from typing import Any

from .const import (
    ETF_CLOSE_COLUMNS,
    ETF_CLOSE_FILE,
    FUTURES_COLUMNS,
    FUTURES_FILE,
    HOLDINGS_COLUMNS,
    HOLDINGS_FILE,
    OPTIONS_COLUMNS,
    OPTIONS_FILE,
    PERCENT,
    RATES_COLUMNS,
    RATES_FILE,
    REFRATE_COLUMNS,
    REFRATE_FILE,
    SUMMARY_DECIMALS,
    TIMESERIES_DECIMALS,
)
from .value_codec import CarryValueCodec

INPUT_SCHEMAS = {
    "options": {
        "file": OPTIONS_FILE,
        "columns": OPTIONS_COLUMNS,
        "key": ("date", "expiration", "strike", "right"),
    },
    "etf_closes": {
        "file": ETF_CLOSE_FILE,
        "columns": ETF_CLOSE_COLUMNS,
        "key": ("date",),
    },
    "holdings": {
        "file": HOLDINGS_FILE,
        "columns": HOLDINGS_COLUMNS,
        "key": ("date",),
    },
    "futures": {
        "file": FUTURES_FILE,
        "columns": FUTURES_COLUMNS,
        "key": ("date", "contract_code"),
    },
    "refrate": {
        "file": REFRATE_FILE,
        "columns": REFRATE_COLUMNS,
        "key": ("date",),
    },
    "rates": {
        "file": RATES_FILE,
        "columns": RATES_COLUMNS,
        "key": ("date",),
    },
}


def _pp(field: str) -> dict[str, Any]:
    return {
        "field": field,
        "encode": "fixed",
        "scale": PERCENT,
        "decimals": TIMESERIES_DECIMALS,
    }


def _summary_pp(field: str) -> dict[str, Any]:
    return {"field": field, "encode": "fixed", "decimals": SUMMARY_DECIMALS}


WEDGE_TIMESERIES_META = {
    "date": {"field": "date", "encode": "date"},
    "bucket": {"field": "bucket", "encode": "text"},
    "strike": {"field": "strike", "encode": "float"},
    "option_expiration": {"field": "option_expiration", "encode": "date"},
    "option_tau": {
        "field": "option_tau",
        "encode": "fixed",
        "decimals": TIMESERIES_DECIMALS,
    },
    "futures_code": {"field": "futures_code", "encode": "text"},
    "futures_expiration": {"field": "futures_expiration", "encode": "date"},
    "etf_carry_raw_pp": _pp("etf_carry_raw"),
    "etf_carry_adj_pp": _pp("etf_carry_adj"),
    "cme_carry_pp": _pp("cme_carry"),
    "wedge_pp": _pp("wedge"),
}

CARRY_COMPARISON_META = {
    "date": {"field": "date", "encode": "date"},
    "bucket": {"field": "bucket", "encode": "text"},
    "cme_carry_pp": _pp("cme_carry"),
    "etf_carry_adj_pp": _pp("etf_carry_adj"),
}

IMPLIED_FORWARDS_META = {
    "date": {"field": "date", "encode": "date"},
    "bucket": {"field": "bucket", "encode": "text"},
    "strike": {"field": "strike", "encode": "float"},
    "option_expiration": {"field": "option_expiration", "encode": "date"},
    "forward_etf": {"field": "forward_etf", "encode": "fixed", "decimals": 6},
    "q": {"field": "q", "encode": "fixed", "decimals": 12},
    "implied_btc_forward": {
        "field": "implied_btc_forward",
        "encode": "fixed",
        "decimals": 2,
    },
    "futures_close": {"field": "futures_close", "encode": "float"},
    "refrate": {"field": "refrate", "encode": "float"},
}

# Overall row first, then one row per bucket
SUMMARY_STATS_META = {
    "group": {"field": "group", "encode": "text"},
    "observations": {"field": "n", "encode": "text"},
    "mean_pp": _summary_pp("mean"),
    "sd_pp": _summary_pp("sd"),
    "p05_pp": _summary_pp("p05"),
    "median_pp": _summary_pp("median"),
    "p95_pp": _summary_pp("p95"),
}

# Per-bucket table: count, mean, median, SD
WEDGE_BY_BUCKET_META = {
    "maturity_bucket": {"field": "group", "encode": "text"},
    "observations": {"field": "n", "encode": "text"},
    "mean_pp": _summary_pp("mean"),
    "median_pp": _summary_pp("median"),
    "sd_pp": _summary_pp("sd"),
}


def encode_cell(value: Any, meta: dict[str, Any]) -> str:
    """Encode one output cell according to its column metadata.

    Raises:
        ValueError: If the metadata names an unknown encoding.
    """
    kind = meta["encode"]
    if kind == "text":
        return str(value)
    if kind == "date":
        return CarryValueCodec.encode_date(value)
    if kind == "float":
        return CarryValueCodec.encode_float(value)
    if kind == "fixed":
        return CarryValueCodec.encode_fixed(
            value * meta.get("scale", 1.0), meta["decimals"]
        )
    raise ValueError(f"Unknown encode type: {kind}")


def render_rows(rows: list[Any], meta: dict[str, dict[str, Any]]) -> list[dict]:
    """Render row objects into ordered dicts of encoded cells."""
    return [
        {column: encode_cell(getattr(row, spec["field"]), spec)
         for column, spec in meta.items()}
        for row in rows
    ]

"""Parsing of the canonical input files into validated records.

Every parser takes the file contents as text and returns records in file
order, or raises a ParseError located at the offending physical line (the
header is line 1). Serializers write records back in the same canonical
format so that parse(serialize(records)) == records.
"""

from __future__ import annotations

from bisect import bisect_right
from collections.abc import Callable, Sequence
import csv
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
import io
import logging
from operator import attrgetter
import re
from typing import TypeVar

import pandas as pd

from .const import BITCOIN_TICKER, DEFAULT_MAX_RATE_FILL_DAYS
from .errors import (
    BadRow,
    DuplicateDate,
    MalformedHeader,
    MissingAsOfDate,
    MissingBitcoinRow,
    MissingSharesOutstanding,
    NonPositiveValue,
    NoUsableRate,
    ParseError,
)
from .file_schemas import INPUT_SCHEMAS
from .value_codec import CarryValueCodec, OptionRight

_LOGGER = logging.getLogger(__name__)

TradingDate = date
_Record = TypeVar("_Record")

codec = CarryValueCodec


@dataclass(frozen=True)
class OptionQuote:
    """One option leg quote."""

    date: TradingDate
    expiration: TradingDate
    strike: float
    right: OptionRight
    bid: float
    ask: float
    open_interest: int


@dataclass(frozen=True)
class EtfClose:
    """ETF closing price per share."""

    date: TradingDate
    close: float


@dataclass(frozen=True)
class HoldingsRecord:
    """Fund bitcoin holdings and shares outstanding on one date."""

    date: TradingDate
    btc_holdings: float
    shares_outstanding: float

    @property
    def q(self) -> float:
        """Bitcoin represented by one ETF share."""
        return self.btc_holdings / self.shares_outstanding


@dataclass(frozen=True)
class FuturesQuote:
    """Daily close of one futures contract."""

    date: TradingDate
    contract_code: str
    expiration: TradingDate
    close: float


@dataclass(frozen=True)
class ReferenceRate:
    """U.S.-close bitcoin reference rate value."""

    date: TradingDate
    value: float


@dataclass(frozen=True)
class RiskFreeRate:
    """Annualized, continuously-compounded risk-free rate."""

    date: TradingDate
    rate: float


# ---------------------------------------------------------------------------
# Table reading


def _read_table(text: str, columns: list[str], source: str) -> list[tuple[int, dict]]:
    """Read canonical CSV text into (line number, cell dict) pairs.

    Raises:
        MalformedHeader: If the header is missing or differs from columns.
        BadRow: If a row has more fields than the header.
    """
    # header=None keeps the header as row 0 so the field count is fixed by it
    # and every frame row maps to one physical line
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError as err:
        raise MalformedHeader("missing header row", source, 1) from err
    except pd.errors.ParserError as err:
        match = re.search(r"line (\d+)", str(err))
        line = int(match.group(1)) if match else None
        raise BadRow("wrong number of fields", source, line) from err

    table = [
        [value if isinstance(value, str) else "" for value in values]
        for values in frame.itertuples(index=False, name=None)
    ]
    header = [name.strip() for name in table[0]]
    if header != columns:
        raise MalformedHeader(
            f"expected columns {','.join(columns)}, got {','.join(header)}",
            source,
            1,
        )

    rows = []
    for index, cells in enumerate(table[1:]):
        if not any(cell.strip() for cell in cells):
            continue
        rows.append((index + 2, dict(zip(columns, cells))))
    _LOGGER.debug("Read %d rows from %s", len(rows), source)
    return rows


def _parse_rows(
    text: str,
    columns: list[str],
    source: str,
    build: Callable[[dict], _Record],
) -> list[tuple[int, _Record]]:
    """Build one record per row, turning decode failures into BadRow."""
    records = []
    for line, cells in _read_table(text, columns, source):
        try:
            records.append((line, build(cells)))
        except ParseError as err:
            err.source, err.line = source, line
            raise err.located(source) from None
        except ValueError as err:
            raise BadRow(str(err), source, line) from err
    return records


def _check_unique(
    records: list[tuple[int, _Record]],
    key: Callable[[_Record], tuple],
    source: str,
    error: type[ParseError] = DuplicateDate,
) -> list[_Record]:
    seen: dict[tuple, int] = {}
    for line, record in records:
        k = key(record)
        if k in seen:
            raise error(
                f"duplicate key {_render_key(k)} (first seen on line {seen[k]})",
                source,
                line,
            )
        seen[k] = line
    return [record for _, record in records]


def _render_key(key: tuple) -> str:
    parts = []
    for part in key:
        if isinstance(part, date):
            parts.append(codec.encode_date(part))
        elif isinstance(part, Enum):
            parts.append(str(part.value))
        else:
            parts.append(str(part))
    return ",".join(parts)


def _parse_canonical(
    text: str,
    kind: str,
    source: str | None,
    build: Callable[[dict], _Record],
    error: type[ParseError] = DuplicateDate,
) -> list[_Record]:
    """Parse one input kind against its INPUT_SCHEMAS header and key."""
    schema = INPUT_SCHEMAS[kind]
    source = source or schema["file"]
    key_fields = schema["key"]
    rows = _parse_rows(text, schema["columns"], source, build)
    return _check_unique(
        rows,
        lambda record: tuple(getattr(record, name) for name in key_fields),
        source,
        error,
    )


def _positive(value: float, name: str) -> float:
    if value <= 0:
        raise NonPositiveValue(f"{name} must be positive, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# Canonical parsers


def _build_option_quote(cells: dict) -> OptionQuote:
    quote = OptionQuote(
        date=codec.decode_date(cells["date"]),
        expiration=codec.decode_date(cells["expiration"]),
        strike=codec.decode_price(cells["strike"], positive=True),
        right=codec.decode_right(cells["right"]),
        bid=codec.decode_price(cells["bid"]),
        ask=codec.decode_price(cells["ask"]),
        open_interest=codec.decode_count(cells["open_interest"]),
    )
    if quote.expiration < quote.date:
        raise ValueError(
            f"expiration {quote.expiration} before quote date {quote.date}"
        )
    if quote.ask < quote.bid:
        raise ValueError(f"ask {quote.ask!r} below bid {quote.bid!r}")
    return quote


def parse_option_quotes(text: str, source: str | None = None) -> list[OptionQuote]:
    """Parse the canonical options file.

    Raises:
        MalformedHeader: Header differs from the canonical column list.
        BadRow: Unparseable field, negative price, ask below bid, unknown
            right code, or a repeated (date, expiration, strike, right) leg.
    """
    return _parse_canonical(text, "options", source, _build_option_quote, error=BadRow)


def _build_etf_close(cells: dict) -> EtfClose:
    return EtfClose(
        date=codec.decode_date(cells["date"]),
        close=_positive(codec.decode_float(cells["close"]), "close"),
    )


def parse_etf_closes(text: str, source: str | None = None) -> list[EtfClose]:
    """Parse the canonical ETF close file (one row per date)."""
    return _parse_canonical(text, "etf_closes", source, _build_etf_close)


def _build_holdings(cells: dict) -> HoldingsRecord:
    return HoldingsRecord(
        date=codec.decode_date(cells["date"]),
        btc_holdings=_positive(codec.decode_float(cells["btc_holdings"]), "btc_holdings"),
        shares_outstanding=_positive(
            codec.decode_float(cells["shares_outstanding"]), "shares_outstanding"
        ),
    )


def parse_holdings(text: str, source: str | None = None) -> list[HoldingsRecord]:
    """Parse the canonical holdings file.

    Raises:
        DuplicateDate: Two rows for one date.
        NonPositiveValue: Holdings or shares outstanding at or below zero.
    """
    return _parse_canonical(text, "holdings", source, _build_holdings)


def _build_futures(cells: dict) -> FuturesQuote:
    code = cells["contract_code"].strip()
    if not code:
        raise ValueError("empty contract_code")
    quote = FuturesQuote(
        date=codec.decode_date(cells["date"]),
        contract_code=code,
        expiration=codec.decode_date(cells["expiration"]),
        close=_positive(codec.decode_float(cells["close"]), "close"),
    )
    if quote.expiration < quote.date:
        raise ValueError(f"expiration {quote.expiration} before date {quote.date}")
    return quote


def parse_futures(text: str, source: str | None = None) -> list[FuturesQuote]:
    """Parse the canonical futures file, unique per (date, contract_code)."""
    return _parse_canonical(text, "futures", source, _build_futures)


def _build_refrate(cells: dict) -> ReferenceRate:
    return ReferenceRate(
        date=codec.decode_date(cells["date"]),
        value=_positive(codec.decode_float(cells["value"]), "value"),
    )


def parse_refrate(text: str, source: str | None = None) -> list[ReferenceRate]:
    """Parse the canonical reference rate file (one row per date)."""
    return _parse_canonical(text, "refrate", source, _build_refrate)


def _build_rate(cells: dict) -> RiskFreeRate:
    return RiskFreeRate(
        date=codec.decode_date(cells["date"]),
        rate=codec.decode_float(cells["rate"]),
    )


def parse_rates(text: str, source: str | None = None) -> list[RiskFreeRate]:
    """Parse the canonical risk-free rate file (decimal, continuous)."""
    return _parse_canonical(text, "rates", source, _build_rate)


# ---------------------------------------------------------------------------
# Vendor holdings adapter

_VENDOR_DATE_FORMATS = ("%b %d, %Y", "%Y-%m-%d", "%m/%d/%Y", "%d-%b-%Y", "%B %d, %Y")
_QUANTITY_COLUMNS = ("quantity", "shares", "par value")


def _vendor_date(text: str) -> date | None:
    value = text.strip().strip('"').strip()
    for fmt in _VENDOR_DATE_FORMATS:
        try:
            return datetime.strptime(value, fmt).date()
        except ValueError:
            continue
    return None


def adapt_vendor_holdings(text: str, source: str = "IBIT_holdings.csv") -> HoldingsRecord:
    """Adapt a vendor-style holdings file into one HoldingsRecord.

    The layout is a preamble of ``key,value`` lines (including the shares
    outstanding and an "as of" date) followed by a holdings table whose
    header starts with ``Ticker``. The bitcoin row is the one whose ticker
    is ``BTC``; its quantity column gives the fund's bitcoin holdings.

    Raises:
        MissingAsOfDate: No parseable "as of" line in the preamble.
        MissingSharesOutstanding: No shares-outstanding line.
        MissingBitcoinRow: No table row with the bitcoin ticker.
        BadRow: A required number could not be parsed.
    """
    as_of: date | None = None
    shares: float | None = None
    btc: float | None = None
    table_header: list[str] | None = None

    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    for line, row in enumerate(reader, start=1):
        cells = [cell.strip() for cell in row]
        if not any(cells):
            continue
        key = cells[0].lower()

        if table_header is None:
            if key == "ticker":
                table_header = [cell.lower() for cell in cells]
                continue
            if len(cells) < 2:
                continue
            if "shares outstanding" in key:
                try:
                    shares = codec.decode_vendor_number(cells[1])
                except ValueError as err:
                    raise BadRow(str(err), source, line) from err
            elif "as of" in key:
                as_of = _vendor_date(cells[1])
                if as_of is None:
                    raise BadRow(f"invalid as-of date '{cells[1]}'", source, line)
            continue

        if cells[0].strip('"').upper() != BITCOIN_TICKER or btc is not None:
            continue
        column = next(
            (table_header.index(name) for name in _QUANTITY_COLUMNS
             if name in table_header),
            len(cells) - 1,
        )
        if column >= len(cells):
            raise BadRow("bitcoin row has no quantity field", source, line)
        try:
            btc = codec.decode_vendor_number(cells[column])
        except ValueError as err:
            raise BadRow(str(err), source, line) from err

    if as_of is None:
        raise MissingAsOfDate("no 'as of' date line in preamble", source)
    if shares is None:
        raise MissingSharesOutstanding("no 'Shares Outstanding' line", source)
    if btc is None:
        raise MissingBitcoinRow(f"no row with ticker {BITCOIN_TICKER}", source)
    try:
        return HoldingsRecord(
            date=as_of,
            btc_holdings=_positive(btc, "btc_holdings"),
            shares_outstanding=_positive(shares, "shares_outstanding"),
        )
    except ParseError as err:
        raise err.located(source) from None


def serialize_vendor_holdings(record: HoldingsRecord, fund_name: str = "iShares Bitcoin Trust ETF") -> str:
    """Render a HoldingsRecord in the vendor layout read by adapt_vendor_holdings."""
    as_of = record.date.strftime("%b %d, %Y")
    lines = [
        fund_name,
        f'Fund Holdings as of,"{as_of}"',
        f'Shares Outstanding,"{record.shares_outstanding:,}"',
        " ",
        "Ticker,Name,Sector,Asset Class,Market Value,Weight (%),Quantity,Price",
        f'"{BITCOIN_TICKER}","BITCOIN","-","Cryptocurrency","-","99.98",'
        f'"{record.btc_holdings:,}","-"',
        '"USD","USD CASH","Cash and/or Derivatives","Cash","-","0.02","-","-"',
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Rate alignment


def align_rate_with_fill(
    when: TradingDate,
    rates: Sequence[RiskFreeRate],
    max_fill_days: int = DEFAULT_MAX_RATE_FILL_DAYS,
) -> tuple[RiskFreeRate, int]:
    """Return the rate for a date and the forward-fill distance in days.

    Args:
        when: The trading date needing a rate.
        rates: Rate records sorted by date.
        max_fill_days: Largest accepted distance to the last prior print.

    Raises:
        NoUsableRate: No print on or within max_fill_days before the date.
    """
    index = bisect_right(rates, when, key=attrgetter("date")) - 1
    if index < 0:
        raise NoUsableRate("no risk-free rate on or before date", when)
    record = rates[index]
    distance = (when - record.date).days
    if distance > max_fill_days:
        raise NoUsableRate(
            f"last rate print {record.date.isoformat()} is {distance} days old "
            f"(cap {max_fill_days})",
            when,
        )
    return record, distance


def align_rate(
    when: TradingDate,
    rates: Sequence[RiskFreeRate],
    max_fill_days: int = DEFAULT_MAX_RATE_FILL_DAYS,
) -> RiskFreeRate:
    """Return the exact-date rate, else the latest prior within the cap."""
    return align_rate_with_fill(when, rates, max_fill_days)[0]


# ---------------------------------------------------------------------------
# Canonical serializers


def _to_csv(columns: list[str], rows: list[list[str]]) -> str:
    frame = pd.DataFrame(rows, columns=columns, dtype=str)
    return frame.to_csv(index=False, lineterminator="\n")


def serialize_option_quotes(quotes: Sequence[OptionQuote]) -> str:
    """Write option quotes in the canonical options format."""
    return _to_csv(
        INPUT_SCHEMAS["options"]["columns"],
        [
            [
                codec.encode_date(q.date),
                codec.encode_date(q.expiration),
                codec.encode_float(q.strike),
                codec.encode_right(q.right),
                codec.encode_float(q.bid),
                codec.encode_float(q.ask),
                str(q.open_interest),
            ]
            for q in quotes
        ],
    )


def serialize_etf_closes(closes: Sequence[EtfClose]) -> str:
    """Write ETF closes in the canonical format."""
    return _to_csv(
        INPUT_SCHEMAS["etf_closes"]["columns"],
        [[codec.encode_date(c.date), codec.encode_float(c.close)] for c in closes],
    )


def serialize_holdings(records: Sequence[HoldingsRecord]) -> str:
    """Write holdings records in the canonical format."""
    return _to_csv(
        INPUT_SCHEMAS["holdings"]["columns"],
        [
            [
                codec.encode_date(r.date),
                codec.encode_float(r.btc_holdings),
                codec.encode_float(r.shares_outstanding),
            ]
            for r in records
        ],
    )


def serialize_futures(quotes: Sequence[FuturesQuote]) -> str:
    """Write futures closes in the canonical format."""
    return _to_csv(
        INPUT_SCHEMAS["futures"]["columns"],
        [
            [
                codec.encode_date(f.date),
                f.contract_code,
                codec.encode_date(f.expiration),
                codec.encode_float(f.close),
            ]
            for f in quotes
        ],
    )


def serialize_refrate(values: Sequence[ReferenceRate]) -> str:
    """Write reference rate values in the canonical format."""
    return _to_csv(
        INPUT_SCHEMAS["refrate"]["columns"],
        [[codec.encode_date(v.date), codec.encode_float(v.value)] for v in values],
    )


def serialize_rates(rates: Sequence[RiskFreeRate]) -> str:
    """Write risk-free rates in the canonical format."""
    return _to_csv(
        INPUT_SCHEMAS["rates"]["columns"],
        [[codec.encode_date(r.date), codec.encode_float(r.rate)] for r in rates],
    )

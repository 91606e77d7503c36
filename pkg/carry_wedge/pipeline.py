"""Per-date measurement chain from parsed inputs to carry observations."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from datetime import date
import logging
from pathlib import Path

from .carry import (
    CarryObservation,
    ExpenseRatio,
    build_observation,
    holdings_ratio,
    match_futures,
)
from .config import RunConfig
from .diagnostics import RunReport
from .errors import DataError, DataGap, NonPositiveForward, ParseError
from .ingest import (
    EtfClose,
    FuturesQuote,
    HoldingsRecord,
    OptionQuote,
    ReferenceRate,
    RiskFreeRate,
    align_rate_with_fill,
    parse_etf_closes,
    parse_futures,
    parse_holdings,
    parse_option_quotes,
    parse_rates,
    parse_refrate,
)
from .parity import OptionPair, merge_pairs, pcp_forward, year_fraction
from .select import BucketSpec, assign_bucket, filter_pairs, select_pair

_LOGGER = logging.getLogger(__name__)

PARSERS = {
    "options": parse_option_quotes,
    "etf_closes": parse_etf_closes,
    "holdings": parse_holdings,
    "futures": parse_futures,
    "refrate": parse_refrate,
    "rates": parse_rates,
}


@dataclass(frozen=True)
class MarketData:
    """All parsed inputs of one run."""

    quotes: list[OptionQuote]
    etf_closes: list[EtfClose]
    holdings: list[HoldingsRecord]
    futures: list[FuturesQuote]
    refrates: list[ReferenceRate]
    rates: list[RiskFreeRate]


def read_inputs(paths: dict[str, Path], report: RunReport) -> MarketData:
    """Read and parse the six canonical input files.

    Raises:
        ParseError: Located at the failing file and line.
    """
    parsed = {}
    for kind, parser in PARSERS.items():
        path = paths[kind]
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as err:
            raise ParseError(f"cannot read file: {err}", path.name) from err
        parsed[kind] = parser(text, source=path.name)
        report.rows_read[kind] = len(parsed[kind])
        _LOGGER.info("Parsed %d %s rows from %s", len(parsed[kind]), kind, path.name)
    return MarketData(
        quotes=parsed["options"],
        etf_closes=parsed["etf_closes"],
        holdings=parsed["holdings"],
        futures=parsed["futures"],
        refrates=parsed["refrate"],
        rates=sorted(parsed["rates"], key=lambda r: r.date),
    )


class WedgeMeasurer:
    """Runs the selection and carry chain date by date.

    Indexes are built once; measure_date only reads them, so dates are
    independent of each other and of processing order.
    """

    def __init__(self, data: MarketData, config: RunConfig, report: RunReport) -> None:
        """Index the inputs by date."""
        self.config = config
        self.report = report
        self.fee = ExpenseRatio(config.expense_ratio)
        self.buckets: list[BucketSpec] = list(config.buckets)
        self._bucket_order = {b.label: i for i, b in enumerate(self.buckets)}
        self._closes = {c.date: c.close for c in data.etf_closes}
        self._holdings = {h.date: h for h in data.holdings}
        self._refrates = {r.date: r for r in data.refrates}
        self._rates = data.rates
        self._futures: dict[date, list[FuturesQuote]] = defaultdict(list)
        for fut in data.futures:
            self._futures[fut.date].append(fut)
        self._pairs: dict[date, list[OptionPair]] = defaultdict(list)
        for pair in merge_pairs(data.quotes):
            self._pairs[pair.date].append(pair)
        report.pairs_formed = sum(len(pairs) for pairs in self._pairs.values())

    def measure(self) -> list[CarryObservation]:
        """Measure every quoted date, sorted by (date, bucket order).

        Raises:
            DataError: In strict mode, the first per-date failure.
        """
        observations = []
        for when in sorted(self._pairs):
            self.report.dates_seen += 1
            try:
                observations.extend(self.measure_date(when))
            except DataError as err:
                if self.config.strict:
                    raise
                self.report.drop_date(when, err.reason, err.detail)
        observations.sort(key=lambda obs: (obs.date, self._bucket_order[obs.bucket]))
        self.report.observations_emitted = len(observations)
        return observations

    def _require(self, index: dict, when: date, what: str):
        if when not in index:
            raise DataGap(f"no same-date {what}", when, reason=f"missing_{what}")
        return index[when]

    def measure_date(self, when: date) -> list[CarryObservation]:
        """Measure all buckets of one date.

        Raises:
            DataError: A required same-date input is missing (date-level), or
                in strict mode a bucket-level failure other than a
                non-positive forward.
        """
        etf_close = self._require(self._closes, when, "etf_close")
        holdings = self._require(self._holdings, when, "holdings")
        rate, fill_days = align_rate_with_fill(
            when, self._rates, self.config.max_rate_fill_days
        )
        if fill_days:
            _LOGGER.debug("Rate for %s forward-filled %d days", when, fill_days)
        self.report.max_rate_fill_days = max(self.report.max_rate_fill_days, fill_days)

        survivors, rejected = filter_pairs(self._pairs[when], etf_close, self.config.filters)
        self.report.pairs_passing_filters += len(survivors)
        self.report.filter_rejections.update(rejected)

        by_bucket: dict[str, list[OptionPair]] = defaultdict(list)
        for pair in survivors:
            label = assign_bucket(pair.days, self.buckets)
            if label is not None:
                by_bucket[label].append(pair)

        observations = []
        for bucket in self.buckets:
            selected = select_pair(when, bucket, by_bucket[bucket.label], etf_close)
            if selected is None:
                continue
            self.report.selections_made += 1
            try:
                forward = pcp_forward(
                    selected.pair,
                    rate.rate,
                    year_fraction(when, selected.pair.expiration),
                )
                fut = match_futures(forward.expiration, when, self._futures.get(when, []))
                observations.append(
                    build_observation(
                        selected,
                        forward,
                        holdings_ratio(holdings),
                        fut,
                        self._refrates.get(when),
                        self.fee,
                    )
                )
            except DataError as err:
                if self.config.strict and not isinstance(err, NonPositiveForward):
                    raise
                self.report.drop_observation(when, bucket.label, err.reason, err.detail)
        return observations


def measure(data: MarketData, config: RunConfig, report: RunReport) -> list[CarryObservation]:
    """Measure all dates of a dataset."""
    return WedgeMeasurer(data, config, report).measure()


def bucket_labels(buckets: Sequence[BucketSpec]) -> list[str]:
    """Labels in configured order."""
    return [bucket.label for bucket in buckets]

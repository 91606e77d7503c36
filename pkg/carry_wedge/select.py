"""Sample filters, maturity buckets and per-bucket pair selection.

A pair survives the filters when its tenor is within [min_days, max_days],
its absolute moneyness is below max_abs_moneyness, each leg's relative
spread is below max_rel_spread and each leg has at least min_open_interest
contracts open. Within a bucket, the expiration closest to the bucket target
is fixed first; among its strikes the one closest to the money wins, with
ties broken by higher pair open interest, lower combined spread and finally
lower strike.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
import logging
import math

from .const import (
    BUCKET_PRESETS,
    DEFAULT_BUCKET_PRESET,
    DEFAULT_MAX_ABS_MONEYNESS,
    DEFAULT_MAX_DAYS,
    DEFAULT_MAX_REL_SPREAD,
    DEFAULT_MIN_DAYS,
    DEFAULT_MIN_OPEN_INTEREST,
    MONEYNESS_RANK_DIGITS,
)
from .ingest import TradingDate
from .parity import OptionPair

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BucketSpec:
    """A calendar-days-to-expiration bucket with a target tenor."""

    label: str
    min_days: int
    max_days: int
    target_days: int

    def __post_init__(self) -> None:
        """Validate min_days <= target_days <= max_days."""
        if not self.label:
            raise ValueError("bucket label must not be empty")
        if not self.min_days <= self.target_days <= self.max_days:
            raise ValueError(
                f"bucket {self.label}: need min_days <= target_days <= max_days, "
                f"got {self.min_days}/{self.target_days}/{self.max_days}"
            )

    def contains(self, days: int) -> bool:
        """Return True if days falls inside [min_days, max_days]."""
        return self.min_days <= days <= self.max_days


def validate_buckets(buckets: Sequence[BucketSpec]) -> list[BucketSpec]:
    """Check labels are unique and day ranges are disjoint.

    Raises:
        ValueError: On an empty list, repeated label or overlapping ranges.
    """
    if not buckets:
        raise ValueError("at least one bucket is required")
    labels = [bucket.label for bucket in buckets]
    if len(set(labels)) != len(labels):
        raise ValueError(f"bucket labels must be unique: {labels}")
    ordered = sorted(buckets, key=lambda b: b.min_days)
    for low, high in zip(ordered, ordered[1:]):
        if high.min_days <= low.max_days:
            raise ValueError(f"buckets {low.label} and {high.label} overlap")
    return list(buckets)


def preset_buckets(name: str = DEFAULT_BUCKET_PRESET) -> list[BucketSpec]:
    """Return the bucket list for a named preset.

    Raises:
        ValueError: If the preset is unknown.
    """
    if name not in BUCKET_PRESETS:
        raise ValueError(
            f"unknown bucket preset '{name}', available: {sorted(BUCKET_PRESETS)}"
        )
    return [BucketSpec(*entry) for entry in BUCKET_PRESETS[name]]


@dataclass(frozen=True)
class FilterConfig:
    """Sample filter thresholds."""

    min_days: int = DEFAULT_MIN_DAYS
    max_days: int = DEFAULT_MAX_DAYS
    max_abs_moneyness: float = DEFAULT_MAX_ABS_MONEYNESS
    max_rel_spread: float = DEFAULT_MAX_REL_SPREAD
    min_open_interest: int = DEFAULT_MIN_OPEN_INTEREST

    def __post_init__(self) -> None:
        """Validate all thresholds are strictly positive."""
        for name in (
            "min_days",
            "max_days",
            "max_abs_moneyness",
            "max_rel_spread",
            "min_open_interest",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.min_days > self.max_days:
            raise ValueError("min_days must not exceed max_days")


class RejectReason(Enum):
    """Why a pair failed the sample filters."""

    TENOR = "tenor"
    MONEYNESS = "moneyness"
    SPREAD = "spread"
    OPEN_INTEREST = "open_interest"


@dataclass(frozen=True)
class FilterResult:
    """Outcome of passes_filters; truthy when the pair passed."""

    passed: bool
    reason: RejectReason | None = None

    def __bool__(self) -> bool:
        """Return whether the pair passed."""
        return self.passed


@dataclass(frozen=True)
class SelectedPair:
    """The pair chosen for one date and bucket."""

    pair: OptionPair
    bucket: str
    etf_close: float
    candidate_count: int
    tie_break: tuple[str, ...] = field(default_factory=tuple)


def moneyness(strike: float, etf_close: float) -> float:
    """Return strike / etf_close - 1 (signed)."""
    return strike / etf_close - 1


def relative_spread(bid: float, ask: float) -> float:
    """Return (ask - bid) / mid; infinite for a zero mid."""
    mid = (bid + ask) / 2
    if mid <= 0:
        return math.inf
    return (ask - bid) / mid


def combined_spread(pair: OptionPair) -> float:
    """Sum of the two legs' relative spreads."""
    return relative_spread(pair.call_bid, pair.call_ask) + relative_spread(
        pair.put_bid, pair.put_ask
    )


def passes_filters(pair: OptionPair, etf_close: float, cfg: FilterConfig) -> FilterResult:
    """Apply the four sample filters to a pair.

    Tenor and open-interest bounds are inclusive; moneyness and spread
    bounds are strict. A leg with a zero mid fails the spread test.
    """
    if not cfg.min_days <= pair.days <= cfg.max_days:
        return FilterResult(False, RejectReason.TENOR)
    if not abs(moneyness(pair.strike, etf_close)) < cfg.max_abs_moneyness:
        return FilterResult(False, RejectReason.MONEYNESS)
    if not (
        relative_spread(pair.call_bid, pair.call_ask) < cfg.max_rel_spread
        and relative_spread(pair.put_bid, pair.put_ask) < cfg.max_rel_spread
    ):
        return FilterResult(False, RejectReason.SPREAD)
    if pair.pair_open_interest < cfg.min_open_interest:
        return FilterResult(False, RejectReason.OPEN_INTEREST)
    return FilterResult(True)


def filter_pairs(
    pairs: Iterable[OptionPair], etf_close: float, cfg: FilterConfig
) -> tuple[list[OptionPair], Counter]:
    """Split pairs into survivors and a count of rejections by reason."""
    survivors = []
    rejected: Counter = Counter()
    for pair in pairs:
        result = passes_filters(pair, etf_close, cfg)
        if result:
            survivors.append(pair)
        else:
            rejected[result.reason.value] += 1
    return survivors, rejected


def assign_bucket(days: int, buckets: Sequence[BucketSpec]) -> str | None:
    """Return the label of the bucket containing days, if any."""
    for bucket in buckets:
        if bucket.contains(days):
            return bucket.label
    return None


_STRIKE_CRITERIA = ("moneyness", "open_interest", "spread", "strike")


def _strike_key(pair: OptionPair, etf_close: float) -> tuple:
    return (
        round(abs(moneyness(pair.strike, etf_close)), MONEYNESS_RANK_DIGITS),
        -pair.pair_open_interest,
        combined_spread(pair),
        pair.strike,
    )


def select_pair(
    when: TradingDate,
    bucket: BucketSpec,
    candidates: Sequence[OptionPair],
    etf_close: float,
) -> SelectedPair | None:
    """Choose one pair for a date and bucket.

    The expiration closest to the bucket target is fixed first (earlier
    expiration on ties); among its pairs the smallest absolute moneyness
    wins, then the larger pair open interest, then the smaller combined
    relative spread, then the lower strike. The result does not depend on
    candidate order.

    Args:
        when: Observation date.
        bucket: The bucket the candidates fall in.
        candidates: Pairs that passed the filters.
        etf_close: Same-date ETF close used for moneyness.

    Returns:
        The selection, or None when there are no candidates.
    """
    if not candidates:
        return None

    tie_break: list[str] = []
    expirations = sorted(
        {pair.expiration for pair in candidates},
        key=lambda exp: (abs((exp - when).days - bucket.target_days), exp),
    )
    chosen_expiration = expirations[0]
    if len(expirations) > 1 and abs(
        (expirations[1] - when).days - bucket.target_days
    ) == abs((chosen_expiration - when).days - bucket.target_days):
        tie_break.append("earlier_expiration")

    ranked = sorted(
        (pair for pair in candidates if pair.expiration == chosen_expiration),
        key=lambda pair: _strike_key(pair, etf_close),
    )
    if len(ranked) > 1:
        first = _strike_key(ranked[0], etf_close)
        second = _strike_key(ranked[1], etf_close)
        decided = next(
            (name for name, a, b in zip(_STRIKE_CRITERIA, first, second) if a != b),
            "identical",
        )
        tie_break.append(decided)
    else:
        tie_break.append("single")

    _LOGGER.debug(
        "Selected %s strike %s exp %s from %d candidates (%s)",
        bucket.label,
        ranked[0].strike,
        chosen_expiration,
        len(candidates),
        "/".join(tie_break),
    )
    return SelectedPair(
        pair=ranked[0],
        bucket=bucket.label,
        etf_close=etf_close,
        candidate_count=len(candidates),
        tie_break=tuple(tie_break),
    )

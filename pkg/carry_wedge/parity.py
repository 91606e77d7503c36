"""Put-call parity forward extraction.

Calls and puts quoted on the same date, expiration and strike are merged into
an OptionPair; the pair's midquotes give the ETF forward

    F = K + exp(r * tau) * (C - P)

with tau the calendar days to expiration divided by 365.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
import logging
import math

from .const import DAYS_PER_YEAR
from .errors import InvertedQuote, NegativeTenor, NonPositiveForward
from .ingest import OptionQuote, TradingDate
from .value_codec import OptionRight

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptionPair:
    """A call and a put sharing date, expiration and strike."""

    date: TradingDate
    expiration: TradingDate
    strike: float
    call_bid: float
    call_ask: float
    put_bid: float
    put_ask: float
    call_oi: int
    put_oi: int
    call_mid: float
    put_mid: float

    @property
    def days(self) -> int:
        """Calendar days from quote date to expiration."""
        return (self.expiration - self.date).days

    @property
    def pair_open_interest(self) -> int:
        """Open interest of the thinner leg."""
        return min(self.call_oi, self.put_oi)


@dataclass(frozen=True)
class YearFraction:
    """ACT/365 year fraction."""

    tau: float
    days: int


@dataclass(frozen=True)
class ForwardObservation:
    """Put-call-parity implied ETF forward for one pair."""

    date: TradingDate
    expiration: TradingDate
    strike: float
    tau: YearFraction
    rate: float
    forward_etf: float


def midquote(bid: float, ask: float) -> float:
    """Return (bid + ask) / 2.

    Raises:
        InvertedQuote: If ask is below bid.
    """
    if ask < bid:
        raise InvertedQuote(f"ask {ask!r} below bid {bid!r}")
    return (bid + ask) / 2


def year_fraction(when: TradingDate, expiration: TradingDate) -> YearFraction:
    """Return calendar days to expiration over 365.

    Raises:
        NegativeTenor: If expiration is before the date.
    """
    days = (expiration - when).days
    if days < 0:
        raise NegativeTenor(
            f"expiration {expiration.isoformat()} before date", when
        )
    return YearFraction(tau=days / DAYS_PER_YEAR, days=days)


def make_pair(call: OptionQuote, put: OptionQuote) -> OptionPair:
    """Merge a call and a put leg into an OptionPair.

    Raises:
        ValueError: If the legs are not a call and a put on one contract key.
    """
    if call.right is not OptionRight.CALL or put.right is not OptionRight.PUT:
        raise ValueError("make_pair expects a call and a put leg")
    if (call.date, call.expiration, call.strike) != (
        put.date, put.expiration, put.strike
    ):
        raise ValueError("legs differ in date, expiration or strike")
    return OptionPair(
        date=call.date,
        expiration=call.expiration,
        strike=call.strike,
        call_bid=call.bid,
        call_ask=call.ask,
        put_bid=put.bid,
        put_ask=put.ask,
        call_oi=call.open_interest,
        put_oi=put.open_interest,
        call_mid=midquote(call.bid, call.ask),
        put_mid=midquote(put.bid, put.ask),
    )


def merge_pairs(quotes: Iterable[OptionQuote]) -> list[OptionPair]:
    """Merge calls and puts on common (date, expiration, strike).

    Legs without a counterpart are dropped. Output is sorted by
    (date, expiration, strike).
    """
    calls: dict[tuple, OptionQuote] = {}
    puts: dict[tuple, OptionQuote] = {}
    for quote in quotes:
        key = (quote.date, quote.expiration, quote.strike)
        (calls if quote.right is OptionRight.CALL else puts)[key] = quote

    keys = sorted(calls.keys() & puts.keys())
    unmatched = len(calls) + len(puts) - 2 * len(keys)
    if unmatched:
        _LOGGER.debug("Dropped %d option legs without a counterpart", unmatched)
    return [make_pair(calls[key], puts[key]) for key in keys]


def pcp_forward(pair: OptionPair, rate: float, tau: YearFraction) -> ForwardObservation:
    """Compute the put-call-parity forward for a pair.

    Args:
        pair: The merged call-put pair with midquotes.
        rate: Continuously-compounded annual risk-free rate.
        tau: Year fraction to the pair's expiration.

    Returns:
        The implied forward observation.

    Raises:
        NonPositiveForward: If the implied forward is at or below zero.
    """
    forward = pair.strike + math.exp(rate * tau.tau) * (pair.call_mid - pair.put_mid)
    if forward <= 0:
        raise NonPositiveForward(
            f"implied forward {forward!r} at strike {pair.strike!r} "
            f"expiring {pair.expiration.isoformat()}",
            pair.date,
        )
    return ForwardObservation(
        date=pair.date,
        expiration=pair.expiration,
        strike=pair.strike,
        tau=tau,
        rate=rate,
        forward_etf=forward,
    )

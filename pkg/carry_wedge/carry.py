"""Carry legs and the wedge between them.

Both legs are exact effective annualized premiums, ratio ** (1 / tau) - 1.
The ETF leg is the selected parity forward over the ETF close, plus the fund
expense ratio. The futures leg is the matched futures close over the
same-date reference rate, annualized over the contract's own remaining days.
The wedge is the futures leg minus the fee-adjusted ETF leg.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math

from .const import DAYS_PER_YEAR, DEFAULT_EXPENSE_RATIO
from .errors import MissingReference, NoMatchableContract, ZeroTenor
from .ingest import FuturesQuote, HoldingsRecord, ReferenceRate, TradingDate
from .parity import ForwardObservation
from .select import SelectedPair

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class HoldingsRatio:
    """Bitcoin per ETF share on one date."""

    date: TradingDate
    q: float


@dataclass(frozen=True)
class ExpenseRatio:
    """Annual fund fee as a decimal."""

    annual: float = DEFAULT_EXPENSE_RATIO

    def __post_init__(self) -> None:
        """Reject negative or non-finite fees."""
        if not (math.isfinite(self.annual) and self.annual >= 0):
            raise ValueError(f"expense ratio must be >= 0, got {self.annual!r}")


@dataclass(frozen=True)
class CarryObservation:
    """One date-bucket measurement of both carry legs and the wedge."""

    date: TradingDate
    bucket: str
    strike: float
    option_expiration: TradingDate
    option_tau: float
    futures_code: str
    futures_expiration: TradingDate
    futures_tau: float
    forward_etf: float
    q: float
    implied_btc_forward: float
    futures_close: float
    refrate: float
    etf_carry_raw: float
    etf_carry_adj: float
    cme_carry: float
    wedge: float


def holdings_ratio(record: HoldingsRecord) -> HoldingsRatio:
    """Return q = btc_holdings / shares_outstanding."""
    return HoldingsRatio(date=record.date, q=record.btc_holdings / record.shares_outstanding)


def effective_annual_carry(ratio: float, tau: float) -> float:
    """Return the effective annual rate ratio ** (1 / tau) - 1.

    Raises:
        ZeroTenor: If tau is zero.
        ValueError: If ratio is not positive or tau is negative.
    """
    if tau == 0:
        raise ZeroTenor("cannot annualize over a zero year fraction")
    if tau < 0:
        raise ValueError(f"negative year fraction {tau!r}")
    if not ratio > 0:
        raise ValueError(f"price ratio must be positive, got {ratio!r}")
    return math.expm1(math.log(ratio) / tau)


def etf_carry(
    fwd: ForwardObservation,
    etf_close: float,
    fee: ExpenseRatio = ExpenseRatio(),
) -> tuple[float, float]:
    """Return the raw and fee-adjusted ETF carry.

    The carry uses forward_etf / etf_close directly; converting both prices
    to bitcoin units divides each by q, which cancels.

    Raises:
        ZeroTenor: If the forward's year fraction is zero.
    """
    if not etf_close > 0:
        raise ValueError(f"etf_close must be positive, got {etf_close!r}")
    try:
        raw = effective_annual_carry(fwd.forward_etf / etf_close, fwd.tau.tau)
    except ZeroTenor as err:
        raise ZeroTenor(err.detail, fwd.date) from None
    return raw, raw + fee.annual


def match_futures(
    option_expiration: TradingDate,
    when: TradingDate,
    futures: Sequence[FuturesQuote],
) -> FuturesQuote:
    """Pick the contract whose expiration is nearest the option expiration.

    Contracts with less than one remaining day are excluded; ties go to
    the earlier futures expiration.

    Raises:
        NoMatchableContract: If no contract has a remaining day.
    """
    live = [fut for fut in futures if (fut.expiration - when).days >= 1]
    if not live:
        raise NoMatchableContract(
            f"no futures contract with a remaining day "
            f"(option expiration {option_expiration.isoformat()})",
            when,
        )
    return min(
        live,
        key=lambda fut: (
            abs((fut.expiration - option_expiration).days),
            fut.expiration,
            fut.contract_code,
        ),
    )


def cme_carry(fut: FuturesQuote, refrate: ReferenceRate | None, when: TradingDate) -> float:
    """Return the futures carry over the reference rate.

    Annualized over the contract's remaining calendar days / 365.

    Raises:
        MissingReference: If there is no same-date reference value.
        ZeroTenor: If the contract has no remaining days.
    """
    if refrate is None or refrate.date != when:
        raise MissingReference("no same-date reference rate value", when)
    remaining_days = (fut.expiration - when).days
    try:
        return effective_annual_carry(
            fut.close / refrate.value, remaining_days / DAYS_PER_YEAR
        )
    except ZeroTenor as err:
        raise ZeroTenor(f"{fut.contract_code}: {err.detail}", when) from None


def wedge(cme: float, etf_adj: float) -> float:
    """Return the futures carry minus the fee-adjusted ETF carry."""
    return cme - etf_adj


def build_observation(
    selected: SelectedPair,
    forward: ForwardObservation,
    ratio: HoldingsRatio,
    fut: FuturesQuote,
    refrate: ReferenceRate | None,
    fee: ExpenseRatio,
) -> CarryObservation:
    """Combine the selected forward and matched futures into one observation."""
    raw, adjusted = etf_carry(forward, selected.etf_close, fee)
    cme = cme_carry(fut, refrate, forward.date)
    return CarryObservation(
        date=forward.date,
        bucket=selected.bucket,
        strike=forward.strike,
        option_expiration=forward.expiration,
        option_tau=forward.tau.tau,
        futures_code=fut.contract_code,
        futures_expiration=fut.expiration,
        futures_tau=(fut.expiration - forward.date).days / DAYS_PER_YEAR,
        forward_etf=forward.forward_etf,
        q=ratio.q,
        implied_btc_forward=forward.forward_etf / ratio.q,
        futures_close=fut.close,
        refrate=refrate.value,
        etf_carry_raw=raw,
        etf_carry_adj=adjusted,
        cme_carry=cme,
        wedge=wedge(cme, adjusted),
    )

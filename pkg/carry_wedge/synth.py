"""Arbitrage-consistent synthetic inputs with a known injected wedge.

The generator builds a reference-rate path, an ETF close from a holdings
ratio, option strike ladders whose midquotes satisfy put-call parity against
a forward growing at etf_carry_true, and futures priced at cme_carry_true
over the reference rate. The true wedge on every date and bucket is
cme_carry_true - (etf_carry_true + expense_ratio).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from datetime import date, timedelta
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .const import (
    BUCKET_PRESETS,
    DAYS_PER_YEAR,
    DEFAULT_BUCKET_PRESET,
    DEFAULT_EXPENSE_RATIO,
    DEFAULT_MAX_REL_SPREAD,
    DEFAULT_MIN_OPEN_INTEREST,
    ETF_CLOSE_FILE,
    FUTURES_FILE,
    GROUND_TRUTH_COLUMNS,
    GROUND_TRUTH_FILE,
    HOLDINGS_FILE,
    OPTIONS_FILE,
    PERCENT,
    RATES_FILE,
    REFRATE_FILE,
)
from .errors import ConfigError
from .ingest import (
    EtfClose,
    FuturesQuote,
    HoldingsRecord,
    OptionQuote,
    ReferenceRate,
    RiskFreeRate,
    serialize_etf_closes,
    serialize_futures,
    serialize_holdings,
    serialize_option_quotes,
    serialize_rates,
    serialize_refrate,
)
from .value_codec import CarryValueCodec, OptionRight

_LOGGER = logging.getLogger(__name__)

TRADING_DAYS_PER_YEAR = 252
FAR_CONTRACT_EXTRA_DAYS = 30
MONTH_CODES = "FGHJKMNQUVXZ"
PRICE_TICK = 0.01
SCALAR_FIELD_TYPES = ("int", "float", "date", "bool")


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of a synthetic dataset."""

    seed: int = 20250303
    n_days: int = 250
    start_date: date = date(2025, 1, 2)
    btc_spot_start: float = 95000.0
    spot_vol: float = 0.5
    rate: float = 0.043
    expense_ratio: float = DEFAULT_EXPENSE_RATIO
    q0: float = 0.000568
    q_drift: float = 0.0
    shares_outstanding: float = 880_000_000.0
    etf_carry_true: float = 0.07
    cme_carry_true: float = 0.1025
    half_spread_rel: float = 0.02
    cushion_rel: float = 0.03
    strikes_per_expiry: int = 7
    strike_step_rel: float = 0.01
    oi_range: tuple[int, int] = (150, 5000)
    bucket_targets: tuple[tuple[str, int], ...] = field(
        default_factory=lambda: tuple(
            (label, target) for label, _, _, target in BUCKET_PRESETS[DEFAULT_BUCKET_PRESET]
        )
    )
    futures_offset_days: int = 0
    include_far_contract: bool = True

    @property
    def injected_wedge(self) -> float:
        """True wedge as an annual decimal."""
        return self.cme_carry_true - (self.etf_carry_true + self.expense_ratio)

    def validate(self) -> SynthConfig:
        """Check the configuration can produce filter-compliant data.

        Raises:
            ConfigError: Naming the first invalid field.
        """
        positive = (
            "n_days", "btc_spot_start", "q0", "shares_outstanding",
            "strikes_per_expiry", "strike_step_rel", "cushion_rel",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError("must be strictly positive", name)
        for name in ("spot_vol", "expense_ratio", "half_spread_rel"):
            if not getattr(self, name) >= 0:
                raise ConfigError("must not be negative", name)
        for name in ("rate", "etf_carry_true", "cme_carry_true", "q_drift"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError("must be finite", name)
        if self.etf_carry_true <= -1 or self.cme_carry_true <= -1:
            raise ConfigError("carry must exceed -100%", "etf_carry_true")
        if not 2 * self.half_spread_rel < DEFAULT_MAX_REL_SPREAD:
            raise ConfigError(
                f"full spread must stay below {DEFAULT_MAX_REL_SPREAD}",
                "half_spread_rel",
            )
        if round(self.btc_spot_start * self.q0, 2) * self.strike_step_rel < PRICE_TICK:
            raise ConfigError(
                f"strike step at the starting close must be at least {PRICE_TICK}",
                "strike_step_rel",
            )
        low, high = self.oi_range
        if not DEFAULT_MIN_OPEN_INTEREST <= low <= high:
            raise ConfigError(
                f"need {DEFAULT_MIN_OPEN_INTEREST} <= oi_min <= oi_max", "oi_range"
            )
        if not self.bucket_targets:
            raise ConfigError("at least one bucket target is required", "bucket_targets")
        shortest = min(target for _, target in self.bucket_targets)
        if abs(self.futures_offset_days) >= shortest:
            raise ConfigError(
                f"offset must be smaller than the shortest target ({shortest})",
                "futures_offset_days",
            )
        return self


@dataclass(frozen=True)
class SynthDataset:
    """The six canonical input files plus the true wedge per date and bucket."""

    options: str
    etf_closes: str
    holdings: str
    futures: str
    refrate: str
    rates: str
    ground_truth: list[tuple[date, str, float]]

    def ground_truth_csv(self) -> str:
        """Render the ground truth as date,bucket,true_wedge_pp."""
        rows = [
            [
                CarryValueCodec.encode_date(when),
                bucket,
                CarryValueCodec.encode_float(value),
            ]
            for when, bucket, value in self.ground_truth
        ]
        frame = pd.DataFrame(rows, columns=GROUND_TRUTH_COLUMNS, dtype=str)
        return frame.to_csv(index=False, lineterminator="\n")

    def files(self) -> dict[str, str]:
        """Return file name -> contents for every dataset file."""
        return {
            OPTIONS_FILE: self.options,
            ETF_CLOSE_FILE: self.etf_closes,
            HOLDINGS_FILE: self.holdings,
            FUTURES_FILE: self.futures,
            REFRATE_FILE: self.refrate,
            RATES_FILE: self.rates,
            GROUND_TRUTH_FILE: self.ground_truth_csv(),
        }

    def write(self, out_dir: Path) -> list[Path]:
        """Write every dataset file into out_dir and return the paths."""
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in self.files().items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
        _LOGGER.info("Wrote %d synthetic files to %s", len(written), out_dir)
        return written


def _contract_code(expiration: date) -> str:
    return (
        f"BTC{MONTH_CODES[expiration.month - 1]}"
        f"{expiration.year % 100:02d}{expiration.day:02d}"
    )


def _option_legs(
    when: date,
    expiration: date,
    close: float,
    config: SynthConfig,
    rng: np.random.Generator,
) -> list[OptionQuote]:
    """Build the strike ladder for one expiration."""
    tau = (expiration - when).days / DAYS_PER_YEAR
    forward = close * (1 + config.etf_carry_true) ** tau
    discount = math.exp(-config.rate * tau)
    cushion = config.cushion_rel * close
    half = config.strikes_per_expiry // 2
    # Cent rounding collapses neighbouring steps on a low close
    ladder = sorted({
        round(close * (1 + step * config.strike_step_rel), 2)
        for step in range(-half, config.strikes_per_expiry - half)
    })

    legs = []
    for strike in ladder:
        if strike <= 0:
            continue
        # C - P = exp(-r tau) (F - K)
        parity_gap = discount * (forward - strike)
        call_mid = max(0.0, close - strike) + cushion
        put_mid = call_mid - parity_gap
        if put_mid < cushion:
            call_mid += cushion - put_mid
            put_mid = call_mid - parity_gap
        low, high = config.oi_range
        for right, mid in ((OptionRight.CALL, call_mid), (OptionRight.PUT, put_mid)):
            half_spread = mid * config.half_spread_rel
            legs.append(
                OptionQuote(
                    date=when,
                    expiration=expiration,
                    strike=strike,
                    right=right,
                    bid=mid - half_spread,
                    ask=mid + half_spread,
                    open_interest=int(rng.integers(low, high + 1)),
                )
            )
    return legs


def _futures_for_date(
    when: date, spot: float, expirations: list[date], config: SynthConfig
) -> list[FuturesQuote]:
    contract_expirations = [
        exp + timedelta(days=config.futures_offset_days) for exp in expirations
    ]
    if config.include_far_contract:
        contract_expirations.append(
            max(expirations) + timedelta(days=FAR_CONTRACT_EXTRA_DAYS)
        )
    quotes = []
    for expiration in sorted(set(contract_expirations)):
        tau = (expiration - when).days / DAYS_PER_YEAR
        quotes.append(
            FuturesQuote(
                date=when,
                contract_code=_contract_code(expiration),
                expiration=expiration,
                close=spot * (1 + config.cme_carry_true) ** tau,
            )
        )
    return quotes


def generate(config: SynthConfig | None = None) -> SynthDataset:
    """Generate a deterministic synthetic dataset.

    Raises:
        ConfigError: If the configuration is invalid.
    """
    config = (config or SynthConfig()).validate()
    rng = np.random.default_rng(config.seed)
    dates = [ts.date() for ts in pd.bdate_range(start=config.start_date, periods=config.n_days)]

    dt = 1 / TRADING_DAYS_PER_YEAR
    shocks = rng.normal(
        -0.5 * config.spot_vol**2 * dt,
        config.spot_vol * math.sqrt(dt),
        size=len(dates) - 1,
    )
    path = config.btc_spot_start * np.exp(np.concatenate(([0.0], np.cumsum(shocks))))

    options: list[OptionQuote] = []
    closes: list[EtfClose] = []
    holdings: list[HoldingsRecord] = []
    futures: list[FuturesQuote] = []
    refrates: list[ReferenceRate] = []
    rates: list[RiskFreeRate] = []
    truth: list[tuple[date, str, float]] = []
    true_wedge_pp = config.injected_wedge * PERCENT

    for index, when in enumerate(dates):
        spot = round(float(path[index]), 2)
        record = HoldingsRecord(
            date=when,
            btc_holdings=config.q0 * (1 + config.q_drift) ** index * config.shares_outstanding,
            shares_outstanding=config.shares_outstanding,
        )
        close = round(spot * record.q, 2)
        expirations = [
            when + timedelta(days=target) for _, target in config.bucket_targets
        ]

        refrates.append(ReferenceRate(date=when, value=spot))
        closes.append(EtfClose(date=when, close=close))
        holdings.append(record)
        rates.append(RiskFreeRate(date=when, rate=config.rate))
        for expiration in expirations:
            options.extend(_option_legs(when, expiration, close, config, rng))
        futures.extend(_futures_for_date(when, spot, expirations, config))
        truth.extend((when, label, true_wedge_pp) for label, _ in config.bucket_targets)

    _LOGGER.info(
        "Generated %d dates, %d option legs, %d futures closes (wedge %.4f pp)",
        len(dates),
        len(options),
        len(futures),
        true_wedge_pp,
    )
    return SynthDataset(
        options=serialize_option_quotes(options),
        etf_closes=serialize_etf_closes(closes),
        holdings=serialize_holdings(holdings),
        futures=serialize_futures(futures),
        refrate=serialize_refrate(refrates),
        rates=serialize_rates(rates),
        ground_truth=truth,
    )


def synth_config_fields() -> list[tuple[str, str, Any]]:
    """Scalar SynthConfig fields as (name, type name, default).

    Tuple-valued fields (oi_range, bucket_targets) are left out; the config
    layer builds them from flat keys.
    """
    defaults = SynthConfig()
    return [
        (f.name, f.type, getattr(defaults, f.name))
        for f in fields(SynthConfig)
        if f.type in SCALAR_FIELD_TYPES
    ]

"""Tests for pair merging and the put-call-parity forward."""
from datetime import date, timedelta
import math

import numpy as np
import pytest

from carry_wedge.errors import InvertedQuote, NegativeTenor, NonPositiveForward
from carry_wedge.ingest import OptionQuote
from carry_wedge.parity import (
    YearFraction,
    make_pair,
    merge_pairs,
    midquote,
    pcp_forward,
    year_fraction,
)
from carry_wedge.value_codec import OptionRight

from tests.test_helpers import make_pair as build_pair

WHEN = date(2025, 3, 3)


def leg(right, strike=57.0, days=25, bid=2.10, ask=2.20, oi=450, when=WHEN):
    """Build one option leg."""
    return OptionQuote(when, when + timedelta(days=days), strike, right, bid, ask, oi)


class TestMidquote:
    """Test midquote computation."""

    def test_mid(self):
        """Test the average of bid and ask."""
        assert midquote(2.10, 2.20) == pytest.approx(2.15, abs=1e-12)

    def test_locked(self):
        """Test a locked market."""
        assert midquote(1.0, 1.0) == 1.0

    def test_zero_bid(self):
        """Test a zero bid is allowed."""
        assert midquote(0.0, 0.10) == pytest.approx(0.05)

    def test_inverted(self):
        """Test ask below bid."""
        with pytest.raises(InvertedQuote):
            midquote(2.20, 2.10)


class TestYearFraction:
    """Test ACT/365 year fractions."""

    def test_thirty_days(self):
        """Test 30 calendar days."""
        tau = year_fraction(date(2025, 3, 3), date(2025, 4, 2))
        assert tau == YearFraction(tau=30 / 365, days=30)

    def test_same_day(self):
        """Test expiration on the quote date."""
        assert year_fraction(WHEN, WHEN).tau == 0.0

    def test_leap_year(self):
        """Test a leap year still divides by 365."""
        tau = year_fraction(date(2024, 1, 1), date(2024, 12, 31))
        assert tau.days == 365
        assert tau.tau == 1.0

    def test_negative(self):
        """Test an expiration before the date."""
        with pytest.raises(NegativeTenor):
            year_fraction(date(2025, 4, 2), date(2025, 3, 3))


class TestMerge:
    """Test merging legs into pairs."""

    def test_make_pair(self):
        """Test a call and a put merge with midquotes."""
        pair = make_pair(leg(OptionRight.CALL), leg(OptionRight.PUT, bid=1.0, ask=1.2, oi=90))
        assert pair.call_mid == pytest.approx(2.15)
        assert pair.put_mid == pytest.approx(1.1)
        assert pair.pair_open_interest == 90
        assert pair.days == 25

    def test_make_pair_mismatched(self):
        """Test legs on different strikes do not pair."""
        with pytest.raises(ValueError):
            make_pair(leg(OptionRight.CALL), leg(OptionRight.PUT, strike=58.0))

    def test_make_pair_wrong_rights(self):
        """Test two calls do not pair."""
        with pytest.raises(ValueError):
            make_pair(leg(OptionRight.CALL), leg(OptionRight.CALL))

    def test_merge_drops_unmatched(self):
        """Test a call without a put is dropped."""
        quotes = [
            leg(OptionRight.CALL, strike=57.0),
            leg(OptionRight.PUT, strike=57.0),
            leg(OptionRight.CALL, strike=58.0),
        ]
        pairs = merge_pairs(quotes)
        assert [p.strike for p in pairs] == [57.0]

    def test_merge_sorted(self):
        """Test output order is (date, expiration, strike)."""
        quotes = []
        for strike, days in ((58.0, 40), (56.0, 40), (57.0, 20)):
            quotes.append(leg(OptionRight.PUT, strike=strike, days=days))
            quotes.append(leg(OptionRight.CALL, strike=strike, days=days))
        pairs = merge_pairs(quotes)
        assert [(p.days, p.strike) for p in pairs] == [(20, 57.0), (40, 56.0), (40, 58.0)]


class TestForward:
    """Test the parity forward F = K + exp(r tau) (C - P)."""

    def test_equal_mids(self):
        """Test C == P gives the strike back."""
        pair = build_pair(strike=60.0, days=30, call_mid=2.0, put_mid=2.0)
        fwd = pcp_forward(pair, 0.05, year_fraction(pair.date, pair.expiration))
        assert fwd.forward_etf == 60.0

    def test_zero_rate(self):
        """Test zero rates give K + C - P exactly."""
        pair = build_pair(strike=60.0, days=30, call_mid=3.0, put_mid=1.0)
        fwd = pcp_forward(pair, 0.0, year_fraction(pair.date, pair.expiration))
        assert fwd.forward_etf == 62.0

    def test_positive_rate(self):
        """Test the discount factor scales the parity gap."""
        pair = build_pair(strike=60.0, days=30, call_mid=3.0, put_mid=1.0)
        fwd = pcp_forward(pair, 0.05, year_fraction(pair.date, pair.expiration))
        assert fwd.forward_etf == pytest.approx(60 + 2 * math.exp(0.05 * 30 / 365), abs=1e-12)
        assert fwd.forward_etf == pytest.approx(62.00823609, abs=1e-7)
        assert fwd.rate == 0.05
        assert fwd.tau.days == 30

    def test_symmetry(self):
        """Test swapping call and put mirrors the forward around K."""
        tau = YearFraction(45 / 365, 45)
        a = pcp_forward(build_pair(strike=50.0, call_mid=4.0, put_mid=1.5), 0.04, tau)
        b = pcp_forward(build_pair(strike=50.0, call_mid=1.5, put_mid=4.0), 0.04, tau)
        assert a.forward_etf - 50.0 == pytest.approx(-(b.forward_etf - 50.0), rel=1e-12)

    def test_strike_translation(self):
        """Test F - K depends only on C - P."""
        tau = YearFraction(22 / 365, 22)
        a = pcp_forward(build_pair(strike=50.0, call_mid=3.0, put_mid=2.0), 0.04, tau)
        b = pcp_forward(build_pair(strike=70.0, call_mid=3.0, put_mid=2.0), 0.04, tau)
        assert a.forward_etf - 50.0 == pytest.approx(b.forward_etf - 70.0, rel=1e-12)

    def test_monotone_in_call(self):
        """Test a richer call raises the forward."""
        tau = YearFraction(22 / 365, 22)
        low = pcp_forward(build_pair(call_mid=3.0, put_mid=2.0), 0.04, tau)
        high = pcp_forward(build_pair(call_mid=3.1, put_mid=2.0), 0.04, tau)
        assert high.forward_etf > low.forward_etf

    def test_non_positive(self):
        """Test a deep put premium drives the forward below zero."""
        pair = build_pair(strike=1.0, call_mid=0.0, put_mid=5.0)
        with pytest.raises(NonPositiveForward) as err:
            pcp_forward(pair, 0.04, YearFraction(25 / 365, 25))
        assert err.value.date == pair.date

    def test_recovers_known_forward(self):
        """Test mids priced off a known forward give that forward back."""
        rng = np.random.default_rng(20250303)
        for _ in range(1000):
            strike = float(rng.uniform(20, 100))
            forward = strike * float(rng.uniform(0.5, 1.5))
            rate = float(rng.uniform(-0.01, 0.10))
            days = int(rng.integers(1, 731))
            tau = YearFraction(days / 365, days)
            gap = math.exp(-rate * tau.tau) * (forward - strike)
            put_mid = float(rng.uniform(0.5, 10)) + max(0.0, -gap)
            call_mid = put_mid + gap
            pair = build_pair(strike=strike, days=days, call_mid=call_mid, put_mid=put_mid)
            fwd = pcp_forward(pair, rate, tau)
            assert fwd.forward_etf == pytest.approx(forward, rel=1e-10)

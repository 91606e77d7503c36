"""Tests for summary statistics."""
from datetime import date, timedelta
import logging

import numpy as np
import pytest

from carry_wedge.errors import EmptyGroup
from carry_wedge.stats import bucket_summaries, summarize

from tests.test_helpers import make_observation, reference_summary


class TestSummarize:
    """Test one-group summaries."""

    def test_one_to_five(self):
        """Test the textbook five-value case."""
        row = summarize([1, 2, 3, 4, 5], "g")
        assert row.n == 5
        assert row.mean == 3.0
        assert row.sd == pytest.approx(1.5811388300841898, rel=1e-12)
        assert row.p05 == pytest.approx(1.2)
        assert row.median == 3.0
        assert row.p95 == pytest.approx(4.8)
        assert row.sd_defined

    def test_constant(self):
        """Test identical values have zero spread."""
        row = summarize([2.5] * 7, "g")
        assert (row.mean, row.sd, row.p05, row.median, row.p95) == (2.5, 0.0, 2.5, 2.5, 2.5)

    def test_single_value(self, caplog):
        """Test one value reports SD 0 and clears sd_defined."""
        caplog.set_level(logging.WARNING)
        row = summarize([4.2], "solo")
        assert row.n == 1
        assert row.sd == 0.0
        assert not row.sd_defined
        assert row.p05 == row.median == row.p95 == 4.2
        assert "one value" in caplog.text

    def test_empty(self):
        """Test an empty group."""
        with pytest.raises(EmptyGroup):
            summarize([], "g")

    def test_non_finite(self):
        """Test NaN values are rejected."""
        with pytest.raises(ValueError, match="non-finite"):
            summarize([1.0, float("nan")], "g")

    def test_order_free(self):
        """Test input order does not matter."""
        assert summarize([5, 1, 4, 2, 3], "g") == summarize([1, 2, 3, 4, 5], "g")

    def test_matches_reference(self):
        """Test against direct formulas on random vectors."""
        rng = np.random.default_rng(1234)
        for _ in range(200):
            size = int(rng.integers(1, 10001))
            values = rng.normal(3.0, 2.0, size)
            row = summarize(values, "g")
            n, mean, sd, p05, median, p95 = reference_summary(values.tolist())
            assert row.n == n
            for got, want in ((row.mean, mean), (row.sd, sd), (row.p05, p05), (row.median, median), (row.p95, p95)):
                assert got == pytest.approx(want, rel=1e-10, abs=1e-12)

    def test_affine_equivariance(self):
        """Test shifting and scaling the data moves the summary alike."""
        rng = np.random.default_rng(99)
        values = rng.normal(0.0, 1.0, 250)
        base = summarize(values, "g")
        moved = summarize(2.5 * values + 1.0, "g")
        assert moved.mean == pytest.approx(2.5 * base.mean + 1.0, rel=1e-10)
        assert moved.sd == pytest.approx(2.5 * base.sd, rel=1e-10)
        assert moved.p05 == pytest.approx(2.5 * base.p05 + 1.0, rel=1e-10)
        assert moved.median == pytest.approx(2.5 * base.median + 1.0, rel=1e-10)
        assert moved.p95 == pytest.approx(2.5 * base.p95 + 1.0, rel=1e-10)


class TestBucketSummaries:
    """Test overall and per-bucket rows."""

    @staticmethod
    def _observations(n_dates, buckets):
        start = date(2025, 1, 2)
        return [
            make_observation(start + timedelta(days=i), bucket, 0.03 + 0.001 * (i % 5))
            for i in range(n_dates)
            for bucket in buckets
        ]

    def test_overall_then_buckets(self):
        """Test row order and counts."""
        rows = bucket_summaries(self._observations(193, ["14-30d", "31-60d"]), ["14-30d", "31-60d"])
        assert [(r.group, r.n) for r in rows] == [("overall", 386), ("14-30d", 193), ("31-60d", 193)]

    def test_percentage_points(self):
        """Test wedges are reported in percentage points."""
        rows = bucket_summaries([make_observation(date(2025, 1, 2), "14-30d", 0.03)] * 3, ["14-30d"])
        assert rows[0].mean == pytest.approx(3.0)

    def test_empty_bucket_omitted(self, caplog):
        """Test a configured bucket with no observations is left out."""
        caplog.set_level(logging.WARNING)
        rows = bucket_summaries(self._observations(5, ["14-30d"]), ["14-30d", "31-60d"])
        assert [r.group for r in rows] == ["overall", "14-30d"]
        assert "31-60d" in caplog.text

    def test_no_observations(self):
        """Test nothing to summarize gives no rows."""
        assert bucket_summaries([], ["14-30d"]) == []

    def test_default_labels_sorted(self):
        """Test buckets default to sorted labels."""
        rows = bucket_summaries(self._observations(3, ["b", "a"]))
        assert [r.group for r in rows] == ["overall", "a", "b"]

    def test_single_bucket(self):
        """Test a one-bucket configuration gives two rows."""
        rows = bucket_summaries(self._observations(10, ["14-30d"]), ["14-30d"])
        assert len(rows) == 2
        assert rows[0].mean == rows[1].mean

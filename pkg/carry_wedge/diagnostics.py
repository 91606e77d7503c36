"""Run diagnostics for the carry wedge pipeline.

The RunReport collects row counts, selection counts and the reasons dates
or observations were dropped, so a run can be audited without rerunning it.
Its rendered form is run_report.txt.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import date
import logging
from typing import Any

_LOGGER = logging.getLogger(__name__)


@dataclass
class RunReport:
    """Counts collected during one run."""

    rows_read: dict[str, int] = field(default_factory=dict)
    dates_seen: int = 0
    pairs_formed: int = 0
    pairs_passing_filters: int = 0
    selections_made: int = 0
    observations_emitted: int = 0
    filter_rejections: Counter = field(default_factory=Counter)
    dates_dropped: Counter = field(default_factory=Counter)
    observations_dropped: Counter = field(default_factory=Counter)
    max_rate_fill_days: int = 0
    empty_groups: list[str] = field(default_factory=list)
    single_value_groups: list[str] = field(default_factory=list)
    output_rows: dict[str, int] = field(default_factory=dict)
    exit_code: int = 0

    def drop_date(self, when: date, reason: str, detail: str) -> None:
        """Record a date dropped before selection."""
        self.dates_dropped[reason] += 1
        _LOGGER.warning("Dropping %s (%s): %s", when.isoformat(), reason, detail)

    def drop_observation(self, when: date, bucket: str, reason: str, detail: str) -> None:
        """Record a selected pair that produced no observation."""
        self.observations_dropped[reason] += 1
        _LOGGER.warning(
            "Dropping %s %s (%s): %s", when.isoformat(), bucket, reason, detail
        )

    def is_consistent(self) -> bool:
        """Check emitted <= selections <= filtered pairs <= formed pairs."""
        return (
            self.observations_emitted
            <= self.selections_made
            <= self.pairs_passing_filters
            <= self.pairs_formed
        ) and (
            self.selections_made - self.observations_emitted
            == sum(self.observations_dropped.values())
        )

    def as_dict(self) -> dict[str, Any]:
        """Return the report as a flat, key-sorted mapping."""
        data: dict[str, Any] = {
            "dates_seen": self.dates_seen,
            "pairs_formed": self.pairs_formed,
            "pairs_passing_filters": self.pairs_passing_filters,
            "selections_made": self.selections_made,
            "observations_emitted": self.observations_emitted,
            "max_rate_fill_days": self.max_rate_fill_days,
            "dates_dropped_total": sum(self.dates_dropped.values()),
            "observations_dropped_total": sum(self.observations_dropped.values()),
            "empty_groups": ",".join(self.empty_groups),
            "single_value_groups": ",".join(self.single_value_groups),
            "exit_code": self.exit_code,
        }
        for name, counts in (
            ("rows_read", self.rows_read),
            ("filter_rejected", self.filter_rejections),
            ("dates_dropped", self.dates_dropped),
            ("observations_dropped", self.observations_dropped),
            ("output_rows", self.output_rows),
        ):
            for key, value in counts.items():
                data[f"{name}.{key}"] = value
        return dict(sorted(data.items()))

    def render(self) -> str:
        """Render the report as key=value lines."""
        return "".join(f"{key}={value}\n" for key, value in self.as_dict().items())

"""Summary statistics for wedge series."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging

import numpy as np

from .carry import CarryObservation
from .const import OVERALL_GROUP, PERCENT
from .errors import EmptyGroup

_LOGGER = logging.getLogger(__name__)

QUANTILES = (5.0, 50.0, 95.0)


@dataclass(frozen=True)
class SummaryRow:
    """Count, mean, SD and quantiles of one group, in percentage points."""

    group: str
    n: int
    mean: float
    sd: float
    p05: float
    median: float
    p95: float
    sd_defined: bool = True


def summarize(values: Sequence[float], group: str) -> SummaryRow:
    """Summarize a group of values.

    The SD uses the n - 1 denominator; percentiles interpolate linearly
    between order statistics at h = (n - 1) p. A single value has no sample
    SD: it is reported as 0 with sd_defined cleared.

    Args:
        values: The values, already in output units.
        group: Group label for the row.

    Raises:
        EmptyGroup: If values is empty.
        ValueError: If any value is not finite.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise EmptyGroup(f"no values in group '{group}'")
    if not np.all(np.isfinite(data)):
        raise ValueError(f"non-finite value in group '{group}'")

    sd_defined = data.size > 1
    if not sd_defined:
        _LOGGER.warning("Group %s has one value; SD reported as 0", group)
    p05, median, p95 = np.percentile(data, QUANTILES, method="linear")
    return SummaryRow(
        group=group,
        n=int(data.size),
        mean=float(data.mean()),
        sd=float(data.std(ddof=1)) if sd_defined else 0.0,
        p05=float(p05),
        median=float(median),
        p95=float(p95),
        sd_defined=sd_defined,
    )


def bucket_summaries(
    observations: Sequence[CarryObservation],
    bucket_labels: Sequence[str] | None = None,
) -> list[SummaryRow]:
    """Summarize wedges overall and per bucket, in percentage points.

    Rows come overall-first, then in bucket_labels order (sorted labels when
    not given). Groups without observations are omitted.
    """
    if bucket_labels is None:
        bucket_labels = sorted({obs.bucket for obs in observations})

    rows = []
    groups = [(OVERALL_GROUP, list(observations))] + [
        (label, [obs for obs in observations if obs.bucket == label])
        for label in bucket_labels
    ]
    for label, members in groups:
        if not members:
            _LOGGER.warning("No observations for group %s; row omitted", label)
            continue
        rows.append(summarize([obs.wedge * PERCENT for obs in members], label))
    return rows

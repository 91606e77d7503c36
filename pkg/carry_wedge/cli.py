"""Command-line entry point.

Usage:
    carry-wedge run --config run.conf [--options PATH ... --out DIR --strict]
    carry-wedge synth --config synth.conf --out DIR

Exit codes: 0 success, 2 config error, 3 parse error, 4 no usable
observations (or a data gap in strict mode).
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
from typing import Any

import pandas as pd

from .config import RunConfig, load_run_config, load_synth_config
from .const import (
    CARRY_COMPARISON_FILE,
    DEFAULT_LOG_LEVEL,
    EXIT_NO_OBSERVATIONS,
    EXIT_OK,
    IMPLIED_FORWARDS_FILE,
    LOG_LEVELS,
    OVERALL_GROUP,
    RUN_REPORT_FILE,
    SUMMARY_STATS_FILE,
    WEDGE_BY_BUCKET_FILE,
    WEDGE_TIMESERIES_FILE,
)
from .diagnostics import RunReport
from .errors import CarryWedgeError
from .file_schemas import (
    CARRY_COMPARISON_META,
    IMPLIED_FORWARDS_META,
    SUMMARY_STATS_META,
    WEDGE_BY_BUCKET_META,
    WEDGE_TIMESERIES_META,
    render_rows,
)
from .pipeline import bucket_labels, measure, read_inputs
from .stats import bucket_summaries
from .synth import generate

_LOGGER = logging.getLogger(__name__)


def write_table(path: Path, rows: Sequence[Any], meta: dict[str, dict]) -> int:
    """Write row objects as CSV with the columns described by meta."""
    frame = pd.DataFrame(render_rows(list(rows), meta), columns=list(meta), dtype=str)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return len(frame)


def run(config: RunConfig) -> RunReport:
    """Run the pipeline end to end and write every output file.

    Returns:
        The run report; its exit_code is 4 when no observation was produced.

    Raises:
        ParseError: An input file failed to parse.
        DataError: In strict mode, a per-date data gap.
    """
    report = RunReport()
    data = read_inputs(config.input_paths(), report)
    observations = measure(data, config, report)

    labels = bucket_labels(config.buckets)
    summaries = bucket_summaries(observations, labels)
    present = {row.group for row in summaries}
    report.empty_groups = [g for g in [OVERALL_GROUP, *labels] if g not in present]
    report.single_value_groups = [row.group for row in summaries if not row.sd_defined]
    bucket_rows = [row for row in summaries if row.group != OVERALL_GROUP]

    config.out.mkdir(parents=True, exist_ok=True)
    outputs = (
        (WEDGE_TIMESERIES_FILE, observations, WEDGE_TIMESERIES_META),
        (CARRY_COMPARISON_FILE, observations, CARRY_COMPARISON_META),
        (IMPLIED_FORWARDS_FILE, observations, IMPLIED_FORWARDS_META),
        (SUMMARY_STATS_FILE, summaries, SUMMARY_STATS_META),
        (WEDGE_BY_BUCKET_FILE, bucket_rows, WEDGE_BY_BUCKET_META),
    )
    for name, rows, meta in outputs:
        report.output_rows[name] = write_table(config.out / name, rows, meta)

    if not observations:
        report.exit_code = EXIT_NO_OBSERVATIONS
        _LOGGER.error("No usable observations produced")
    (config.out / RUN_REPORT_FILE).write_text(report.render(), encoding="utf-8", newline="")

    _LOGGER.info(
        "Emitted %d observations from %d selections (%d pairs passed filters)",
        report.observations_emitted,
        report.selections_made,
        report.pairs_passing_filters,
    )
    if not report.is_consistent():
        _LOGGER.error("Run report counts do not reconcile: %s", report.as_dict())
    return report


def synth(config_path: Path | None, out_dir: Path, overrides: dict | None = None) -> list[Path]:
    """Generate a synthetic dataset and write it to out_dir."""
    config, log_level = load_synth_config(config_path, overrides)
    _set_log_level(log_level)
    return generate(config).write(out_dir)


def _set_log_level(level: str) -> None:
    logging.getLogger().setLevel(getattr(logging, level.upper(), logging.INFO))


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser for both subcommands."""
    parser = argparse.ArgumentParser(
        prog="carry-wedge",
        description="Measure the carry wedge between ETF options and futures.",
    )
    parser.add_argument(
        "--log-level",
        choices=sorted(LOG_LEVELS),
        default=None,
        help="Logging level (overrides log_level in the config file)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Measure wedges from input files")
    run_parser.add_argument("--config", type=Path, help="key=value config file")
    for flag, key in (
        ("--options", "options"),
        ("--etf-closes", "etf_closes"),
        ("--holdings", "holdings"),
        ("--futures", "futures"),
        ("--refrate", "refrate"),
        ("--rates", "rates"),
    ):
        run_parser.add_argument(flag, dest=key, type=Path, help=f"{key} CSV file")
    run_parser.add_argument("--out", type=Path, help="Output directory")
    run_parser.add_argument(
        "--strict",
        action="store_true",
        default=None,
        help="Fail on the first data gap instead of dropping the date",
    )

    synth_parser = commands.add_parser("synth", help="Write a synthetic dataset")
    synth_parser.add_argument("--config", type=Path, help="key=value config file")
    synth_parser.add_argument("--out", type=Path, required=True, help="Output directory")
    synth_parser.add_argument("--seed", type=int, default=None, help="Override the seed")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run the requested command and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, (args.log_level or DEFAULT_LOG_LEVEL).upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        if args.command == "synth":
            synth(args.config, args.out, {"seed": args.seed, "log_level": args.log_level})
            return EXIT_OK

        overrides = {
            key: getattr(args, key)
            for key in (
                "options", "etf_closes", "holdings", "futures", "refrate",
                "rates", "out", "strict",
            )
        }
        overrides["log_level"] = args.log_level
        config = load_run_config(args.config, overrides)
        _set_log_level(config.log_level)
        return run(config).exit_code
    except CarryWedgeError as err:
        _LOGGER.error("%s: %s", err.category, err)
        return err.exit_code
    except OSError as err:
        _LOGGER.error("I/O error: %s", err)
        return 1

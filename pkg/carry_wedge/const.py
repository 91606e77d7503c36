"""Constants for the carry wedge pipeline.

This module defines default filter thresholds, bucket presets, canonical file
headers, output file names and the process exit codes used by the CLI.

Constants:
    DAYS_PER_YEAR: Day-count denominator for year fractions (ACT/365).
    DEFAULT_EXPENSE_RATIO: Annual fund fee added to the raw ETF carry.
    DEFAULT_MAX_RATE_FILL_DAYS: Forward-fill cap for risk-free rates.
    BUCKET_PRESETS: Data-driven preset name -> bucket definitions.
    EXIT_*: Process exit codes per error category.
"""

DAYS_PER_YEAR = 365
PERCENT = 100.0

# Fund fee, annual decimal
DEFAULT_EXPENSE_RATIO = 0.0025
DEFAULT_MAX_RATE_FILL_DAYS = 7

# Sample filters
DEFAULT_MIN_DAYS = 14
DEFAULT_MAX_DAYS = 90
DEFAULT_MAX_ABS_MONEYNESS = 0.05
DEFAULT_MAX_REL_SPREAD = 0.10
DEFAULT_MIN_OPEN_INTEREST = 100

# Moneyness is rounded to this many places before ranking strikes, so
# strikes equidistant from the close tie
MONEYNESS_RANK_DIGITS = 12

# Bitcoin asset ticker in the vendor holdings table
BITCOIN_TICKER = "BTC"

# Data-driven preset -> (label, min_days, max_days, target_days)
BUCKET_PRESETS = {
    "default": [
        ("14-30d", 14, 30, 22),
        ("31-60d", 31, 60, 45),
    ],
    "extended": [
        ("14-30d", 14, 30, 22),
        ("31-60d", 31, 60, 45),
        ("61-90d", 61, 90, 75),
    ],
}
DEFAULT_BUCKET_PRESET = "default"

# Canonical input headers
OPTIONS_COLUMNS = [
    "date", "expiration", "strike", "right", "bid", "ask", "open_interest",
]
ETF_CLOSE_COLUMNS = ["date", "close"]
HOLDINGS_COLUMNS = ["date", "btc_holdings", "shares_outstanding"]
FUTURES_COLUMNS = ["date", "contract_code", "expiration", "close"]
REFRATE_COLUMNS = ["date", "value"]
RATES_COLUMNS = ["date", "rate"]
GROUND_TRUTH_COLUMNS = ["date", "bucket", "true_wedge_pp"]

# Canonical input file names (synth output, default run inputs)
OPTIONS_FILE = "options.csv"
ETF_CLOSE_FILE = "etf_close.csv"
HOLDINGS_FILE = "holdings.csv"
FUTURES_FILE = "futures.csv"
REFRATE_FILE = "refrate.csv"
RATES_FILE = "rates.csv"
GROUND_TRUTH_FILE = "ground_truth.csv"

# Output file names
WEDGE_TIMESERIES_FILE = "wedge_timeseries.csv"
CARRY_COMPARISON_FILE = "carry_comparison.csv"
SUMMARY_STATS_FILE = "summary_stats.csv"
WEDGE_BY_BUCKET_FILE = "wedge_by_bucket.csv"
IMPLIED_FORWARDS_FILE = "implied_forwards.csv"
RUN_REPORT_FILE = "run_report.txt"

# Output precision
TIMESERIES_DECIMALS = 6
SUMMARY_DECIMALS = 3
OVERALL_GROUP = "overall"

# Exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_PARSE_ERROR = 3
EXIT_NO_OBSERVATIONS = 4

LOG_LEVELS = ("error", "warning", "info", "debug")
DEFAULT_LOG_LEVEL = "info"

"""End-to-end tests for the command-line entry point."""
import pytest

from carry_wedge.cli import build_parser, main
from carry_wedge.const import (
    EXIT_CONFIG_ERROR,
    EXIT_NO_OBSERVATIONS,
    EXIT_OK,
    EXIT_PARSE_ERROR,
)

from tests.conftest import OPTIONS_HEADER, write_run_conf

GOLDEN_HEADERS = {
    "wedge_timeseries.csv": "date,bucket,strike,option_expiration,option_tau,futures_code,"
    "futures_expiration,etf_carry_raw_pp,etf_carry_adj_pp,cme_carry_pp,wedge_pp",
    "carry_comparison.csv": "date,bucket,cme_carry_pp,etf_carry_adj_pp",
    "implied_forwards.csv": "date,bucket,strike,option_expiration,forward_etf,q,"
    "implied_btc_forward,futures_close,refrate",
    "summary_stats.csv": "group,observations,mean_pp,sd_pp,p05_pp,median_pp,p95_pp",
    "wedge_by_bucket.csv": "maturity_bucket,observations,mean_pp,median_pp,sd_pp",
}


def read_lines(path):
    """Read a text file as lines."""
    return path.read_text(encoding="utf-8").splitlines()


def read_report(path):
    """Parse run_report.txt into a dict."""
    return dict(line.split("=", 1) for line in read_lines(path))


class TestParser:
    """Test argument parsing."""

    def test_run_flags(self):
        """Test run flags map to config keys."""
        args = build_parser().parse_args(
            ["--log-level", "debug", "run", "--options", "o.csv", "--etf-closes", "e.csv", "--strict"]
        )
        assert args.command == "run"
        assert str(args.options) == "o.csv"
        assert str(args.etf_closes) == "e.csv"
        assert args.strict is True
        assert args.log_level == "debug"

    def test_strict_unset(self):
        """Test an absent --strict does not override the file."""
        assert build_parser().parse_args(["run"]).strict is None

    def test_command_required(self):
        """Test a subcommand is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestSynthCommand:
    """Test the synth subcommand."""

    def test_writes_dataset(self, tmp_path):
        """Test a short dataset is written from a config file."""
        conf = tmp_path / "synth.conf"
        conf.write_text("n_days = 5\n", encoding="utf-8")
        out = tmp_path / "synth"
        assert main(["synth", "--config", str(conf), "--out", str(out), "--seed", "7"]) == EXIT_OK
        assert len(read_lines(out / "etf_close.csv")) == 1 + 5
        assert (out / "ground_truth.csv").is_file()

    def test_bad_config(self, tmp_path):
        """Test an invalid generator setting exits with the config code."""
        conf = tmp_path / "synth.conf"
        conf.write_text("half_spread_rel = 0.2\n", encoding="utf-8")
        assert main(["synth", "--config", str(conf), "--out", str(tmp_path / "x")]) == EXIT_CONFIG_ERROR


class TestRunCommand:
    """Test the run subcommand end to end."""

    def test_outputs(self, run_conf, tmp_path, small_config):
        """Test every output file is written with its golden header."""
        assert main(["run", "--config", str(run_conf)]) == EXIT_OK
        out = tmp_path / "out"
        for name, header in GOLDEN_HEADERS.items():
            assert read_lines(out / name)[0] == header
        assert len(read_lines(out / "wedge_timeseries.csv")) == 1 + 2 * small_config.n_days
        assert (out / "run_report.txt").is_file()

    def test_summary_values(self, run_conf, tmp_path, small_config):
        """Test the injected 3 pp wedge shows in the summary tables."""
        main(["run", "--config", str(run_conf)])
        out = tmp_path / "out"
        overall, short, long = (line.split(",") for line in read_lines(out / "summary_stats.csv")[1:])
        assert overall[:4] == ["overall", str(2 * small_config.n_days), "3.000", "0.000"]
        assert short[0] == "14-30d"
        assert long[0] == "31-60d"
        by_bucket = [line.split(",") for line in read_lines(out / "wedge_by_bucket.csv")[1:]]
        assert [row[0] for row in by_bucket] == ["14-30d", "31-60d"]
        assert by_bucket[0][1] == by_bucket[1][1] == str(small_config.n_days)
        assert all(row[2] == "3.000" for row in by_bucket)

    def test_timeseries_precision(self, run_conf, tmp_path):
        """Test time-series values carry six decimals."""
        main(["run", "--config", str(run_conf)])
        first = read_lines(tmp_path / "out" / "wedge_timeseries.csv")[1].split(",")
        assert first[1] == "14-30d"
        assert first[-1] == "3.000000"
        assert first[-3] == "7.250000"
        assert first[-2] == "10.250000"

    def test_deterministic(self, run_conf, tmp_path):
        """Test two runs produce byte-identical files."""
        assert main(["run", "--config", str(run_conf), "--out", str(tmp_path / "a")]) == EXIT_OK
        assert main(["run", "--config", str(run_conf), "--out", str(tmp_path / "b")]) == EXIT_OK
        for name in [*GOLDEN_HEADERS, "run_report.txt"]:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_report_reconciles(self, run_conf, tmp_path):
        """Test report counts match the written rows."""
        main(["run", "--config", str(run_conf)])
        out = tmp_path / "out"
        report = read_report(out / "run_report.txt")
        rows = len(read_lines(out / "wedge_timeseries.csv")) - 1
        assert int(report["observations_emitted"]) == rows
        assert int(report["output_rows.wedge_timeseries.csv"]) == rows
        assert int(report["output_rows.summary_stats.csv"]) == 3
        assert int(report["selections_made"]) == rows + int(report["observations_dropped_total"])
        assert int(report["pairs_passing_filters"]) <= int(report["pairs_formed"])
        assert report["exit_code"] == "0"

    def test_dropped_date_reported(self, run_conf, input_dir, tmp_path):
        """Test a missing close drops one date and is reported."""
        closes = input_dir / "etf_close.csv"
        lines = read_lines(closes)
        closes.write_text("\n".join([lines[0], *lines[2:]]) + "\n", encoding="utf-8")
        assert main(["run", "--config", str(run_conf)]) == EXIT_OK
        report = read_report(tmp_path / "out" / "run_report.txt")
        assert report["dates_dropped.missing_etf_close"] == "1"

    def test_strict_gap(self, run_conf, input_dir):
        """Test strict mode turns the same gap into exit 4."""
        closes = input_dir / "etf_close.csv"
        lines = read_lines(closes)
        closes.write_text("\n".join([lines[0], *lines[2:]]) + "\n", encoding="utf-8")
        assert main(["run", "--config", str(run_conf), "--strict"]) == EXIT_NO_OBSERVATIONS

    def test_empty_options(self, run_conf, input_dir, tmp_path):
        """Test a header-only options file yields no observations."""
        (input_dir / "options.csv").write_text(OPTIONS_HEADER, encoding="utf-8")
        assert main(["run", "--config", str(run_conf)]) == EXIT_NO_OBSERVATIONS
        assert main(["run", "--config", str(run_conf), "--strict"]) == EXIT_NO_OBSERVATIONS
        out = tmp_path / "out"
        assert read_lines(out / "wedge_timeseries.csv") == [GOLDEN_HEADERS["wedge_timeseries.csv"]]
        assert read_report(out / "run_report.txt")["empty_groups"] == "overall,14-30d,31-60d"

    def test_parse_error(self, run_conf, input_dir):
        """Test a malformed header exits with the parse code."""
        (input_dir / "futures.csv").write_text("date,code,close\n", encoding="utf-8")
        assert main(["run", "--config", str(run_conf)]) == EXIT_PARSE_ERROR

    def test_config_error(self, tmp_path, input_dir):
        """Test a missing input file exits with the config code."""
        conf = write_run_conf(tmp_path / "run.conf", input_dir, tmp_path / "out")
        (input_dir / "holdings.csv").unlink()
        assert main(["run", "--config", str(conf)]) == EXIT_CONFIG_ERROR

    def test_flag_override(self, run_conf, tmp_path, small_dataset):
        """Test an input flag replaces the configured path."""
        alt = tmp_path / "alt"
        small_dataset.write(alt)
        (alt / "options.csv").write_text(OPTIONS_HEADER, encoding="utf-8")
        code = main(["run", "--config", str(run_conf), "--options", str(alt / "options.csv")])
        assert code == EXIT_NO_OBSERVATIONS

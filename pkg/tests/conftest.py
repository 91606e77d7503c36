"""Pytest configuration and fixtures."""
from pathlib import Path

import pytest

from carry_wedge.synth import SynthConfig, generate

# Small enough to keep end-to-end runs quick, long enough to span month ends
SMALL_N_DAYS = 30

OPTIONS_HEADER = "date,expiration,strike,right,bid,ask,open_interest\n"


@pytest.fixture(scope="session")
def small_config():
    """A short synthetic configuration with default parameters."""
    return SynthConfig(n_days=SMALL_N_DAYS)


@pytest.fixture(scope="session")
def small_dataset(small_config):
    """Synthetic dataset generated once per test session."""
    return generate(small_config)


@pytest.fixture
def input_dir(tmp_path, small_dataset):
    """Directory holding the small synthetic dataset's files."""
    directory = tmp_path / "data"
    small_dataset.write(directory)
    return directory


def write_run_conf(path: Path, data_dir: Path, out_dir: Path, **extra) -> Path:
    """Write a run config file pointing at a dataset directory."""
    lines = [
        "# run configuration",
        f"options = {data_dir / 'options.csv'}",
        f"etf_closes = {data_dir / 'etf_close.csv'}",
        f"holdings = {data_dir / 'holdings.csv'}",
        f"futures = {data_dir / 'futures.csv'}",
        f"refrate = {data_dir / 'refrate.csv'}",
        f"rates = {data_dir / 'rates.csv'}",
        f"out = {out_dir}",
    ]
    lines.extend(f"{key} = {value}" for key, value in extra.items())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def run_conf(tmp_path, input_dir):
    """Run config file for the small dataset, writing to tmp_path/out."""
    return write_run_conf(tmp_path / "run.conf", input_dir, tmp_path / "out")

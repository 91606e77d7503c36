"""Configuration loading for the run and synth commands.

Configuration files are flat ``key=value`` text; ``#`` starts a comment and
blank lines are ignored. Command-line flags override file values. The merged
mapping is validated with voluptuous schemas and turned into a RunConfig or
SynthConfig. Relative paths in a file resolve against the file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    BUCKET_PRESETS,
    DEFAULT_BUCKET_PRESET,
    DEFAULT_EXPENSE_RATIO,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_ABS_MONEYNESS,
    DEFAULT_MAX_DAYS,
    DEFAULT_MAX_RATE_FILL_DAYS,
    DEFAULT_MAX_REL_SPREAD,
    DEFAULT_MIN_DAYS,
    DEFAULT_MIN_OPEN_INTEREST,
    LOG_LEVELS,
)
from .errors import ConfigError
from .select import BucketSpec, FilterConfig, preset_buckets, validate_buckets
from .synth import SynthConfig, synth_config_fields
from .value_codec import CarryValueCodec

_LOGGER = logging.getLogger(__name__)

INPUT_KEYS = ("options", "etf_closes", "holdings", "futures", "refrate", "rates")
PATH_KEYS = INPUT_KEYS + ("out",)


def read_config_file(path: Path) -> dict[str, str]:
    """Read a key=value configuration file.

    Raises:
        ConfigError: If the file is missing or a line has no '='.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err

    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value, got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{number}: empty key")
        if key in values:
            _LOGGER.warning("Config key %s repeated on line %d; last value wins", key, number)
        values[key] = value

    for key in PATH_KEYS:
        if key in values and values[key]:
            candidate = Path(values[key])
            if not candidate.is_absolute():
                values[key] = str((path.parent / candidate).resolve())
    _LOGGER.debug("Read %d config keys from %s", len(values), path)
    return values


def parse_buckets(value: Any) -> list[BucketSpec]:
    """Parse ``label:min:max:target,...`` into a validated bucket list."""
    if isinstance(value, list):
        return validate_buckets(value)
    specs = []
    for item in str(value).split(","):
        parts = [part.strip() for part in item.split(":")]
        if len(parts) != 4:
            raise vol.Invalid(f"bucket '{item.strip()}' is not label:min:max:target")
        label, low, high, target = parts
        try:
            specs.append(BucketSpec(label, int(low), int(high), int(target)))
        except ValueError as err:
            raise vol.Invalid(str(err)) from err
    try:
        return validate_buckets(specs)
    except ValueError as err:
        raise vol.Invalid(str(err)) from err


def _date(value: Any) -> date:
    if isinstance(value, date):
        return value
    try:
        return CarryValueCodec.decode_date(str(value))
    except ValueError as err:
        raise vol.Invalid(str(err)) from err


_POSITIVE_INT = vol.All(vol.Coerce(int), vol.Range(min=1))
_POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))
_LOG_LEVEL = vol.All(vol.Lower, vol.In(LOG_LEVELS))

RUN_SCHEMA = vol.Schema(
    {
        **{vol.Required(key): vol.All(str, vol.Length(min=1)) for key in PATH_KEYS},
        vol.Optional("strict", default=False): vol.Boolean(),
        vol.Optional("expense_ratio", default=DEFAULT_EXPENSE_RATIO): vol.All(
            vol.Coerce(float), vol.Range(min=0)
        ),
        vol.Optional("min_days", default=DEFAULT_MIN_DAYS): _POSITIVE_INT,
        vol.Optional("max_days", default=DEFAULT_MAX_DAYS): _POSITIVE_INT,
        vol.Optional("max_abs_moneyness", default=DEFAULT_MAX_ABS_MONEYNESS): _POSITIVE_FLOAT,
        vol.Optional("max_rel_spread", default=DEFAULT_MAX_REL_SPREAD): _POSITIVE_FLOAT,
        vol.Optional("min_open_interest", default=DEFAULT_MIN_OPEN_INTEREST): _POSITIVE_INT,
        vol.Optional("bucket_preset", default=DEFAULT_BUCKET_PRESET): vol.In(
            list(BUCKET_PRESETS)
        ),
        vol.Optional("buckets"): parse_buckets,
        vol.Optional("max_rate_fill_days", default=DEFAULT_MAX_RATE_FILL_DAYS): vol.All(
            vol.Coerce(int), vol.Range(min=0)
        ),
        vol.Optional("log_level", default=DEFAULT_LOG_LEVEL): _LOG_LEVEL,
    }
)

_SYNTH_DEFAULTS = SynthConfig()
_SYNTH_COERCE = {
    "int": vol.Coerce(int),
    "float": vol.Coerce(float),
    "date": _date,
    "bool": vol.Boolean(),
}

SYNTH_SCHEMA = vol.Schema(
    {
        **{
            vol.Optional(name, default=default): _SYNTH_COERCE[type_name]
            for name, type_name, default in synth_config_fields()
        },
        vol.Optional("oi_min", default=_SYNTH_DEFAULTS.oi_range[0]): vol.Coerce(int),
        vol.Optional("oi_max", default=_SYNTH_DEFAULTS.oi_range[1]): vol.Coerce(int),
        vol.Optional("bucket_preset", default=DEFAULT_BUCKET_PRESET): vol.In(
            list(BUCKET_PRESETS)
        ),
        vol.Optional("log_level", default=DEFAULT_LOG_LEVEL): _LOG_LEVEL,
    }
)


def _validate(schema: vol.Schema, values: dict[str, Any]) -> dict[str, Any]:
    try:
        return schema(values)
    except vol.MultipleInvalid as err:
        first = err.errors[0]
        key = ".".join(str(part) for part in first.path) or None
        raise ConfigError(first.msg, key) from err


def _merge(config_path: Path | None, overrides: dict[str, Any] | None) -> dict[str, Any]:
    values: dict[str, Any] = read_config_file(config_path) if config_path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = str(value) if isinstance(value, Path) else value
    return values


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one pipeline run."""

    options: Path
    etf_closes: Path
    holdings: Path
    futures: Path
    refrate: Path
    rates: Path
    out: Path
    filters: FilterConfig = field(default_factory=FilterConfig)
    buckets: list[BucketSpec] = field(default_factory=preset_buckets)
    expense_ratio: float = DEFAULT_EXPENSE_RATIO
    strict: bool = False
    max_rate_fill_days: int = DEFAULT_MAX_RATE_FILL_DAYS
    log_level: str = DEFAULT_LOG_LEVEL

    def input_paths(self) -> dict[str, Path]:
        """Input kind -> path."""
        return {key: getattr(self, key) for key in INPUT_KEYS}


def load_run_config(
    config_path: Path | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """Load, merge and validate a run configuration.

    Raises:
        ConfigError: On an invalid value, a missing key, overlapping buckets
            or an input path that does not exist.
    """
    values = _validate(RUN_SCHEMA, _merge(config_path, overrides))
    try:
        filters = FilterConfig(
            min_days=values["min_days"],
            max_days=values["max_days"],
            max_abs_moneyness=values["max_abs_moneyness"],
            max_rel_spread=values["max_rel_spread"],
            min_open_interest=values["min_open_interest"],
        )
    except ValueError as err:
        raise ConfigError(str(err), "filters") from err

    buckets = values.get("buckets") or preset_buckets(values["bucket_preset"])
    config = RunConfig(
        **{key: Path(values[key]) for key in PATH_KEYS},
        filters=filters,
        buckets=buckets,
        expense_ratio=values["expense_ratio"],
        strict=values["strict"],
        max_rate_fill_days=values["max_rate_fill_days"],
        log_level=values["log_level"],
    )
    for key, path in config.input_paths().items():
        if not path.is_file():
            raise ConfigError(f"input file not found: {path}", key)
    return config


def load_synth_config(
    config_path: Path | None = None, overrides: dict[str, Any] | None = None
) -> tuple[SynthConfig, str]:
    """Load, merge and validate a synth configuration.

    Returns:
        The generator configuration and the requested log level.

    Raises:
        ConfigError: On an invalid or unknown key.
    """
    values = _validate(SYNTH_SCHEMA, _merge(config_path, overrides))
    targets = tuple(
        (label, target) for label, _, _, target in BUCKET_PRESETS[values.pop("bucket_preset")]
    )
    log_level = values.pop("log_level")
    oi_range = (values.pop("oi_min"), values.pop("oi_max"))
    config = SynthConfig(**values, oi_range=oi_range, bucket_targets=targets)
    return config.validate(), log_level

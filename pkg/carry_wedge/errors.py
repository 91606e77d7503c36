"""Exception hierarchy for the carry wedge pipeline.

Errors fall into three categories, each mapped to a CLI exit code:
configuration problems, input parse problems, and data problems found while
measuring. Parse errors carry the source file and physical line; data errors
carry the trading date they concern.
"""

from __future__ import annotations

from datetime import date

from .const import EXIT_CONFIG_ERROR, EXIT_NO_OBSERVATIONS, EXIT_PARSE_ERROR


class CarryWedgeError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1
    category = "error"


class ConfigError(CarryWedgeError, ValueError):
    """Invalid or missing configuration."""

    exit_code = EXIT_CONFIG_ERROR
    category = "config error"

    def __init__(self, message: str, key: str | None = None) -> None:
        """Store the offending config key, if any."""
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class ParseError(CarryWedgeError, ValueError):
    """An input file could not be parsed into valid records."""

    exit_code = EXIT_PARSE_ERROR
    category = "parse error"

    def __init__(
        self, message: str, source: str | None = None, line: int | None = None
    ) -> None:
        """Attach file/line context to the message."""
        self.source = source
        self.line = line
        self.detail = message
        super().__init__(self._render())

    def _render(self) -> str:
        where = self.source or "<input>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.detail}"

    def located(self, source: str) -> ParseError:
        """Return this error with its source file name set."""
        self.source = source
        self.args = (self._render(),)
        return self


class MalformedHeader(ParseError):
    """Header row does not match the canonical column list."""


class BadRow(ParseError):
    """A data row has an unparseable or invalid field."""


class DuplicateDate(ParseError):
    """Two rows share the same uniqueness key."""


class NonPositiveValue(ParseError):
    """A field that must be strictly positive is not."""


class MissingBitcoinRow(ParseError):
    """Vendor holdings file has no bitcoin row."""


class MissingSharesOutstanding(ParseError):
    """Vendor holdings file has no shares-outstanding line."""


class MissingAsOfDate(ParseError):
    """Vendor holdings file has no as-of date line."""


class DataError(CarryWedgeError, ValueError):
    """A measurement step could not be completed for a date."""

    exit_code = EXIT_NO_OBSERVATIONS
    category = "data error"
    reason = "data_error"

    def __init__(self, message: str, when: date | None = None) -> None:
        """Attach the trading date the failure concerns."""
        self.date = when
        self.detail = message
        super().__init__(f"{when.isoformat()}: {message}" if when else message)


class InvertedQuote(DataError):
    """Ask below bid."""

    reason = "inverted_quote"


class NegativeTenor(DataError):
    """Expiration before the observation date."""

    reason = "negative_tenor"


class ZeroTenor(DataError):
    """Annualization over a zero year fraction."""

    reason = "zero_tenor"


class NonPositiveForward(DataError):
    """Put-call parity produced a forward at or below zero."""

    reason = "non_positive_forward"


class NoUsableRate(DataError):
    """No risk-free rate on or within the fill window before the date."""

    reason = "no_usable_rate"


class MissingReference(DataError):
    """No same-date reference rate value."""

    reason = "missing_reference"


class NoMatchableContract(DataError):
    """No futures contract with at least one remaining day."""

    reason = "no_matchable_contract"


class DataGap(DataError):
    """A required same-date input record is missing."""

    reason = "data_gap"

    def __init__(
        self, message: str, when: date | None = None, reason: str = "data_gap"
    ) -> None:
        """Record which input was missing as the drop reason."""
        super().__init__(message, when)
        self.reason = reason


class EmptyGroup(DataError):
    """Summary statistics requested over no values."""

    reason = "empty_group"


class NoObservations(DataError):
    """The run produced no carry observations."""

    reason = "no_observations"

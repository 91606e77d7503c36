"""Value encoding and decoding for canonical CSV cells.

This module centralizes the logic for decoding text fields read from the
canonical input files and encoding values written back out, so that every
file parser and writer shares one set of conventions (ISO dates, `.` decimal
point, shortest round-trip float text).
"""

from __future__ import annotations

from datetime import date
from enum import Enum
import logging
import math
import re

_LOGGER = logging.getLogger(__name__)

# Plain decimal with optional exponent; no digit grouping or special values
DECIMAL_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?", re.ASCII)
INTEGER_RE = re.compile(r"[+-]?\d+", re.ASCII)


class OptionRight(Enum):
    """Option right as coded in the options file."""

    CALL = "C"
    PUT = "P"


RIGHT_MAP = {right.value: right for right in OptionRight}


class CarryValueCodec:
    """Handles encoding and decoding of canonical CSV field values.

    Decoders raise ValueError with a short description; the file parsers
    attach file and line context.
    """

    @staticmethod
    def decode_date(text: str) -> date:
        """Decode a YYYY-MM-DD date.

        Args:
            text: The raw cell text.

        Returns:
            The calendar date.

        Raises:
            ValueError: If the text is not a valid ISO calendar date.
        """
        value = text.strip()
        if len(value) != 10:
            raise ValueError(f"invalid date '{text}'")
        try:
            return date.fromisoformat(value)
        except ValueError as err:
            raise ValueError(f"invalid date '{text}'") from err

    @staticmethod
    def encode_date(value: date) -> str:
        """Encode a date as YYYY-MM-DD."""
        return value.isoformat()

    @staticmethod
    def decode_float(text: str) -> float:
        """Decode a finite decimal number.

        Raises:
            ValueError: If the text is empty, not a number, or not finite.
        """
        value = text.strip()
        if not value:
            raise ValueError("empty numeric field")
        if not DECIMAL_RE.fullmatch(value):
            raise ValueError(f"invalid number '{text}'")
        number = float(value)
        if not math.isfinite(number):
            raise ValueError(f"non-finite number '{text}'")
        return number

    @staticmethod
    def decode_price(text: str, positive: bool = False) -> float:
        """Decode a price, requiring >= 0 (or > 0 when positive is set)."""
        number = CarryValueCodec.decode_float(text)
        if positive and number <= 0:
            raise ValueError(f"price must be positive, got {text.strip()}")
        if number < 0:
            raise ValueError(f"negative price {text.strip()}")
        return number

    @staticmethod
    def decode_count(text: str) -> int:
        """Decode a non-negative integer count.

        Raises:
            ValueError: If the text is not a non-negative integer.
        """
        value = text.strip()
        if not INTEGER_RE.fullmatch(value):
            raise ValueError(f"invalid count '{text}'")
        count = int(value)
        if count < 0:
            raise ValueError(f"negative count {value}")
        return count

    @staticmethod
    def decode_right(text: str) -> OptionRight:
        """Decode an option right code (C or P).

        Raises:
            ValueError: If the code is not a known right.
        """
        value = text.strip()
        if value not in RIGHT_MAP:
            raise ValueError(
                f"invalid right '{value}', expected one of {sorted(RIGHT_MAP)}"
            )
        return RIGHT_MAP[value]

    @staticmethod
    def encode_right(right: OptionRight) -> str:
        """Encode an option right as its one-letter code."""
        return right.value

    @staticmethod
    def encode_float(value: float) -> str:
        """Encode a float with the shortest text that parses back exactly."""
        return repr(float(value))

    @staticmethod
    def encode_fixed(value: float, decimals: int) -> str:
        """Encode a float with a fixed number of decimals.

        Negative zero is normalized so reruns produce identical bytes
        regardless of the sign of a vanishing result.
        """
        text = f"{value:.{decimals}f}"
        if text.startswith("-") and float(text) == 0:
            text = text[1:]
        return text

    @staticmethod
    def decode_vendor_number(text: str) -> float:
        """Decode a vendor-formatted number.

        Vendor files quote numbers and use thousands separators, e.g.
        ``"1,234.5"``.

        Raises:
            ValueError: If nothing numeric remains after cleanup.
        """
        cleaned = text.strip().strip('"').strip().replace(",", "")
        if cleaned in ("", "-"):
            raise ValueError(f"invalid vendor number '{text}'")
        _LOGGER.debug("Vendor number '%s' -> '%s'", text, cleaned)
        return CarryValueCodec.decode_float(cleaned)

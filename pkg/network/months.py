"""Month-resolution time axis. Month 0 is January 1893."""
from __future__ import annotations

import re

from core.errors import ParameterError

MonthStamp = int

EPOCH_YEAR = 1893
MAX_MONTH = 4000

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def validate_month(value: int) -> MonthStamp:
    value = int(value)
    if value < 0 or value > MAX_MONTH:
        raise ParameterError(f"Month stamp {value} outside [0, {MAX_MONTH}] (epoch {EPOCH_YEAR}-01)")
    return value


def month_of(year: int, month: int) -> MonthStamp:
    if not 1 <= month <= 12:
        raise ParameterError(f"Invalid calendar month: {month}")
    return validate_month((year - EPOCH_YEAR) * 12 + (month - 1))


def month_from_string(text: str) -> MonthStamp:
    """Parse `YYYY-MM` (command-line form)."""
    match = _MONTH_RE.match((text or "").strip())
    if not match:
        raise ParameterError(f"Expected a date as YYYY-MM, got '{text}'")
    return month_of(int(match.group(1)), int(match.group(2)))


def month_to_string(value: MonthStamp) -> str:
    year, month = divmod(int(value), 12)
    return f"{EPOCH_YEAR + year:04d}-{month + 1:02d}"

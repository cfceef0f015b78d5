"""Small helpers shared across the separated dgL engine."""

from __future__ import annotations

import pathlib
import re
from fractions import Fraction
from typing import Sequence


__all__ = [
    "koszul_sign",
    "sort_sign",
    "parse_int_list",
    "parse_fraction",
    "format_fraction",
    "ensure_directory",
]


INT_LIST_PATTERN = re.compile(r"^\s*\d+(\s*,\s*\d+)*\s*$")


def koszul_sign(a: int, b: int) -> int:
    """Return ``(-1)^(a*b)``."""
    return -1 if (a * b) % 2 else 1


def sort_sign(items: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of sorting *items* ascending, each item weighted by ``degrees[item]``."""
    sign = 1
    values = list(items)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign *= koszul_sign(degrees[values[i]], degrees[values[j]])
    return sign


def parse_int_list(text: str) -> list[int]:
    """Parse ``"2,2,3"`` into ``[2, 2, 3]``; raise ``ValueError`` on anything else."""
    if not INT_LIST_PATTERN.match(text or ""):
        raise ValueError(f"Expected a comma separated list of integers, got {text!r}.")
    return [int(part) for part in text.split(",")]


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; raise ``ValueError`` on a zero denominator or junk."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Invalid rational coefficient {text!r}.") from exc


def format_fraction(value: Fraction) -> str:
    """Always ``"p/q"``, including ``"3/1"``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def ensure_directory(directory: pathlib.Path) -> pathlib.Path:
    """Ensure *directory* exists and return the ``Path`` instance."""
    directory.mkdir(parents=True, exist_ok=True)
    return directory

"""Small numeric helpers shared by the analytics and reporting modules."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence


def nearest_rank(sorted_values: Sequence, pct: float):
    """Nearest-rank percentile of an ascending-sorted sequence.

    The p-th percentile is the value at rank ceil(p/100 * n); for even-sized
    inputs the median therefore lands on the lower middle element.
    """
    n = len(sorted_values)
    if n == 0:
        raise ValueError("percentile of empty sequence")
    rank = -(-int(pct * n) // 100)  # ceil(pct*n/100) without floats
    rank = max(1, min(n, rank))
    return sorted_values[rank - 1]


def median(values: Sequence):
    return nearest_rank(sorted(values), 50)


def round_half_up(value: float, places: int = 2) -> float:
    """Decimal round-half-up, matching how the report tables are printed."""
    q = Decimal(10) ** -places
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def pct(numerator: int, denominator: int, places: int = 2) -> float:
    """100*num/den rounded half-up; 0.0 when the denominator is zero."""
    if denominator == 0:
        return 0.0
    return round_half_up(100.0 * numerator / denominator, places)

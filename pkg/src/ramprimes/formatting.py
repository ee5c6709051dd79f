"""Display rounding helpers.

Reference tables round probabilities and ratios half-up at three decimals,
and expectations half-up to whole numbers; Python's bankers rounding would
disagree on exact halves, so these helpers are used everywhere a displayed
number is compared against a table.
"""

from __future__ import annotations

import math


def round_half_up(x: float) -> int:
    """Nearest integer, exact halves going up."""
    return math.floor(x + 0.5)


def ratio_display(num: int, den: int, places: int = 3) -> float:
    """num/den rounded half-up at `places` decimals, in exact integer math."""
    if den <= 0 or num < 0:
        raise ValueError(f"ratio_display needs num >= 0 and den > 0, got {num}/{den}")
    scale = 10 ** places
    return (2 * num * scale + den) // (2 * den) / scale


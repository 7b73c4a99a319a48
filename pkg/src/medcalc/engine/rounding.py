"""Canonical decimal rendering of computed results.

Targets are matched as text, so the rendering must be deterministic: exactly
`precision` fractional digits, half-away-from-zero on the exact binary value
of the double, never exponent notation, and no negative zero.
"""

from __future__ import annotations

import decimal
import math

# enough digits for any double (|x| < 1.8e308) at any supported precision
_CTX = decimal.Context(prec=400, rounding=decimal.ROUND_HALF_UP)


def round_to(value: float, precision: int) -> str:
    """Render `value` with exactly `precision` fractional digits.

    precision 0 yields no decimal point. Ties round half away from zero.
    """
    if not math.isfinite(value):
        raise ValueError(f"value must be finite, got {value!r}")
    if precision < 0:
        raise ValueError(f"precision must be >= 0, got {precision}")
    exact = decimal.Decimal(value)  # exact binary value, not the repr shortcut
    quantum = decimal.Decimal(1).scaleb(-precision)
    rounded = exact.quantize(quantum, context=_CTX)
    if rounded == 0:
        rounded = abs(rounded)  # normalize -0.00 to 0.00
    return format(rounded, "f")

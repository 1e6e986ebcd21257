"""Fixed-point quantization between physical reals and signed 64-bit integers.

A file carries one QuantizationScheme: integer steps per GeV for momenta,
energies and masses, and steps per millimeter for vertex positions. The
default momentum unit of 100000 makes one integer step 0.01 MeV, so a 1 GeV
momentum maps to 100000 and a 20 TeV momentum to 2000000000.

Rounding is half-away-from-zero and is computed in exact integer
arithmetic on the binary64 input (via as_integer_ratio), never through a
second float rounding, so quantize(-v) == -quantize(v) holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvariantViolation, NonFiniteError
from .wire import I64_MAX, I64_MIN, uvarint_length, zigzag_encode

DEFAULT_MOMENTUM_UNIT = 100_000  # steps per GeV: 0.01 MeV granularity
DEFAULT_LENGTH_UNIT = 1_000      # steps per mm: 1 um granularity


@dataclass(frozen=True)
class QuantizationScheme:
    momentum_unit: int = DEFAULT_MOMENTUM_UNIT
    length_unit: int = DEFAULT_LENGTH_UNIT

    def validate(self) -> "QuantizationScheme":
        if self.momentum_unit < 1:
            raise InvariantViolation(f"momentum_unit must be >= 1, got {self.momentum_unit}")
        if self.length_unit < 1:
            raise InvariantViolation(f"length_unit must be >= 1, got {self.length_unit}")
        return self


def quantize(value: float, unit: int) -> int:
    """round(value * unit), ties away from zero, as a signed 64-bit integer."""
    if not math.isfinite(value):
        raise NonFiniteError(f"cannot quantize {value!r}")
    num, den = value.as_integer_ratio()  # exact: den > 0, sign on num
    scaled = num * unit
    if scaled >= 0:
        q = (2 * scaled + den) // (2 * den)
    else:
        q = -((-2 * scaled + den) // (2 * den))
    if not I64_MIN <= q <= I64_MAX:
        raise OverflowError(f"{value!r} * {unit} overflows the signed 64-bit range")
    return q


def dequantize(q: int, unit: int) -> float:
    return q / unit


def wire_cost(value: float, unit: int) -> int:
    """Payload bytes this value occupies inside a packed column."""
    return uvarint_length(zigzag_encode(quantize(value, unit)))

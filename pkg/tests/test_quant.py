import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from provent.errors import InvariantViolation, NonFiniteError
from provent.quant import QuantizationScheme, dequantize, quantize, wire_cost

UNIT = 100_000  # default momentum unit: 0.01 MeV per step


def oracle_cost(q: int) -> int:
    # independent byte-count oracle: zigzag by formula, then 7-bit groups
    u = (q << 1) ^ (q >> 63)
    n = 1
    while u > 0x7F:
        n += 1
        u >>= 7
    return n


class TestUnitTable:
    """The published unit mapping: energies against their integer form."""

    @pytest.mark.parametrize("gev,expected", [
        (1.0e-5, 1),            # 0.01 MeV
        (1.0e-4, 10),           # 0.1 MeV
        (1.0e-3, 100),          # 1 MeV
        (1.0, 100_000),         # 1 GeV
        (1000.0, 100_000_000),  # 1 TeV
        (20000.0, 2_000_000_000),  # 20 TeV
    ])
    def test_integer_representation(self, gev, expected):
        assert quantize(gev, UNIT) == expected

    @pytest.mark.parametrize("gev,expected_bytes", [
        (1.0e-5, 1),
        (1.0e-4, 1),
        (1.0e-3, 2),
    ])
    def test_wire_cost_published_rows(self, gev, expected_bytes):
        assert wire_cost(gev, UNIT) == expected_bytes
        assert oracle_cost(quantize(gev, UNIT)) == expected_bytes

    @pytest.mark.parametrize("gev,formula_bytes", [
        (1.0, 3),       # zigzag(100000)=200000: 18 bits -> 3 groups
        (1000.0, 4),    # zigzag(1e8)=2e8: 28 bits -> 4 groups
        (20000.0, 5),   # zigzag(2e9)=4e9: 32 bits -> 5 groups
    ])
    def test_wire_cost_formula_rows(self, gev, formula_bytes):
        # the published table quotes 4/8/8 here, which does not follow from
        # base-128 arithmetic; the codec is held to the formula
        assert wire_cost(gev, UNIT) == formula_bytes
        assert oracle_cost(quantize(gev, UNIT)) == formula_bytes


class TestQuantize:
    def test_zero(self):
        assert quantize(0.0, UNIT) == 0
        assert quantize(-0.0, UNIT) == 0

    def test_sign_symmetry(self):
        for v in (1.0, 0.137, 3.0e-6, 1234.5678):
            assert quantize(-v, UNIT) == -quantize(v, UNIT)

    @pytest.mark.parametrize("unit", [1, 2, 1024, UNIT])
    def test_tie_rounds_away_from_zero(self, unit):
        assert quantize(0.5 / unit, unit) == 1
        assert quantize(-0.5 / unit, unit) == -1

    def test_half_integers_round_away(self):
        assert quantize(1.5, 1) == 2
        assert quantize(2.5, 1) == 3
        assert quantize(-1.5, 1) == -2

    def test_overflow(self):
        with pytest.raises(OverflowError):
            quantize(1.0e18, UNIT)
        with pytest.raises(OverflowError):
            quantize(-1.0e18, UNIT)
        # the i64 extremes themselves are fine
        assert quantize(float(2**62), 1) == 2**62

    def test_non_finite(self):
        for bad in (math.inf, -math.inf, math.nan):
            with pytest.raises(NonFiniteError):
                quantize(bad, UNIT)

    @given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False),
           st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=500)
    def test_reconstruction_bound(self, value, unit):
        q = quantize(value, unit)
        # exact statement: the grid point is within half a step of the input
        assert abs(Fraction(q, unit) - Fraction(value)) <= Fraction(1, 2 * unit)

    @given(st.integers(min_value=-(2**52), max_value=2**52),
           st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=500)
    def test_idempotent_on_grid(self, q, unit):
        assert quantize(dequantize(q, unit), unit) == q

    @given(st.floats(min_value=0, max_value=1e9, allow_nan=False),
           st.floats(min_value=0, max_value=1e9, allow_nan=False))
    @settings(max_examples=300)
    def test_monotone_cost(self, a, b):
        if abs(a) > abs(b):
            a, b = b, a
        assert wire_cost(a, UNIT) <= wire_cost(b, UNIT)
        assert wire_cost(-a, UNIT) <= wire_cost(b, UNIT)


class TestDequantize:
    def test_published_inverse(self):
        assert dequantize(100_000, UNIT) == 1.0
        assert dequantize(1, UNIT) == 1.0e-5  # 0.01 MeV
        assert dequantize(0, 12345) == 0.0

    def test_default_bound_is_0005_mev(self):
        # half a step at the default unit
        assert 0.5 / UNIT == 5e-6  # GeV, i.e. 0.005 MeV


class TestScheme:
    def test_defaults(self):
        scheme = QuantizationScheme()
        assert scheme.momentum_unit == 100_000
        assert scheme.length_unit == 1_000

    @pytest.mark.parametrize("momentum,length", [(0, 1000), (100000, 0), (-1, 1)])
    def test_rejects_non_positive_units(self, momentum, length):
        with pytest.raises(InvariantViolation):
            QuantizationScheme(momentum, length).validate()

"""Scalar plumbing: exact rationals and round-trip serialization."""

import numpy as np

from grad_adversary.numerics import (
    LD,
    ExactReal,
    fmt_scalar,
    fraction_to_longdouble,
    ld,
    longdouble_to_fraction,
    parse_scalar,
)


class TestExactReal:
    def test_lossless_float_conversion(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            x = LD(rng.uniform(-1e6, 1e6)) / LD(rng.uniform(1, 1e6))
            assert fraction_to_longdouble(longdouble_to_fraction(x)) == x

    def test_mixed_arithmetic_is_exact(self):
        x = ExactReal(2**200)
        y = x + LD(1)  # far below the ulp of 2^200 in any float format
        assert y - x == 1
        assert y != x
        assert y > x

    def test_numpy_scalars_defer(self):
        x = ExactReal(1) / 3
        s = LD(2) + x  # must route through ExactReal.__radd__, not numpy
        assert isinstance(s, ExactReal)
        assert s * 3 == 7

    def test_comparisons_and_abs(self):
        assert abs(ExactReal(-3)) == 3
        assert ExactReal(1) / 2 == 0.5
        assert ExactReal(1) / 3 < 0.5

    def test_ld_rounds_correctly(self):
        third = ExactReal(1) / 3
        assert ld(third) == LD(1) / 3


class TestScalarFormat:
    def test_round_trip_longdouble(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            x = LD(rng.uniform(-1, 1)) * LD(10) ** int(rng.integers(-300, 300))
            assert parse_scalar(fmt_scalar(x)) == x

    def test_special_values(self):
        assert parse_scalar(fmt_scalar(LD("inf"))) == LD("inf")
        assert parse_scalar(fmt_scalar(LD("-inf"))) == LD("-inf")
        assert np.isnan(parse_scalar(fmt_scalar(LD("nan"))))
        assert parse_scalar(fmt_scalar(LD(0))) == 0

    def test_exact_real_formats_via_longdouble(self):
        assert parse_scalar(fmt_scalar(ExactReal(1) / 4)) == LD(0.25)

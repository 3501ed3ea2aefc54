"""Extended-precision scalar helpers.

All objective values and optimizer state are kept in ``numpy.longdouble``
(80-bit extended precision on x86). The line-search constructions place
function values far beyond the double range, so scalars round-trip through
text as shortest decimal-scientific strings rather than JSON doubles.

Positions in the bump-objective scenarios need more care still: successive
window centers are separated by doubly exponentially growing gaps, so a
fixed-precision float eventually cannot distinguish "center of window j"
from "far outside window j". :class:`ExactReal` keeps those positions as
exact rationals (every float added to them converts losslessly), while
objective values remain longdoubles.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

LD = np.longdouble

LD_INFO = np.finfo(LD)
F64_MAX = np.finfo(np.float64).max


def longdouble_to_fraction(x) -> Fraction:
    """Exact rational value of a finite longdouble."""
    v = LD(x)
    if not np.isfinite(v):
        raise ValueError(f"cannot convert non-finite value {v} to a fraction")
    if v == 0:
        return Fraction(0)
    m, e = np.frexp(v)  # m in (-1, -0.5] or [0.5, 1), 64-bit significand
    hi = int(np.ldexp(m, 32))  # truncation keeps both halves exact
    lo = int(np.ldexp(np.ldexp(m, 32) - LD(hi), 32))
    return Fraction((hi << 32) + lo) * Fraction(2) ** (int(e) - 64)


def fraction_to_longdouble(fr: Fraction) -> np.longdouble:
    """Round a rational to the nearest longdouble (half away from zero)."""
    n, d = fr.numerator, fr.denominator
    if n == 0:
        return LD(0)
    sign = LD(1) if n > 0 else LD(-1)
    n = abs(n)
    shift = n.bit_length() - d.bit_length() - 70
    if shift >= 0:
        q, r = divmod(n, d << shift)
        half = d << shift
    else:
        q, r = divmod(n << (-shift), d)
        half = d
    if 2 * r >= half:
        q += 1
    hi, lo = divmod(q, 1 << 32)
    with np.errstate(over="ignore"):
        return sign * np.ldexp(np.ldexp(LD(hi), 32) + LD(lo), shift)


class ExactReal:
    """Exact rational scalar with lossless mixed arithmetic against floats."""

    __slots__ = ("fr",)
    __array_ufunc__ = None  # force numpy scalars to defer to our operators

    def __init__(self, value=0):
        if isinstance(value, ExactReal):
            self.fr = value.fr
        elif isinstance(value, (int, Fraction)):
            self.fr = Fraction(value)
        else:
            self.fr = longdouble_to_fraction(value)

    @staticmethod
    def _coerce(other) -> Fraction:
        if isinstance(other, ExactReal):
            return other.fr
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return longdouble_to_fraction(other)

    def to_longdouble(self) -> np.longdouble:
        return fraction_to_longdouble(self.fr)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        return ExactReal(self.fr + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ExactReal(self.fr - self._coerce(other))

    def __rsub__(self, other):
        return ExactReal(self._coerce(other) - self.fr)

    def __mul__(self, other):
        return ExactReal(self.fr * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ExactReal(self.fr / self._coerce(other))

    def __rtruediv__(self, other):
        return ExactReal(self._coerce(other) / self.fr)

    def __neg__(self):
        return ExactReal(-self.fr)

    def __pos__(self):
        return self

    def __abs__(self):
        return ExactReal(abs(self.fr))

    # comparisons ----------------------------------------------------------

    def __eq__(self, other):
        try:
            return self.fr == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.fr < self._coerce(other)

    def __le__(self, other):
        return self.fr <= self._coerce(other)

    def __gt__(self, other):
        return self.fr > self._coerce(other)

    def __ge__(self, other):
        return self.fr >= self._coerce(other)

    def __hash__(self):
        return hash(self.fr)

    def __float__(self):
        return float(self.to_longdouble())

    def __repr__(self):
        return f"ExactReal({self.fr})"


def ld(x) -> np.longdouble:
    """Coerce a number, decimal string or ExactReal to longdouble."""
    if isinstance(x, ExactReal):
        return x.to_longdouble()
    if isinstance(x, str):
        return LD(x)
    return LD(x)


def as_position(x):
    """State initializer: preserves exact positions, coerces the rest."""
    if isinstance(x, ExactReal):
        return x
    return ld(x)


def is_finite(x) -> bool:
    if isinstance(x, ExactReal):
        return True
    return bool(np.isfinite(LD(x)))


def fits_double(x) -> bool:
    """True if x is finite and within the float64 range."""
    if isinstance(x, ExactReal):
        return abs(x.to_longdouble()) <= F64_MAX
    v = LD(x)
    return bool(np.isfinite(v)) and abs(v) <= F64_MAX


def fmt_scalar(x) -> str:
    """Shortest decimal string that parses back to the same longdouble."""
    v = ld(x)
    if np.isnan(v):
        return "nan"
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return np.format_float_scientific(v)


def parse_scalar(s: str) -> np.longdouble:
    if s == "nan":
        return LD(np.nan)
    if s == "inf":
        return LD(np.inf)
    if s == "-inf":
        return LD(-np.inf)
    return LD(s)

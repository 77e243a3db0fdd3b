"""Exact rationals and outward-rounded interval arithmetic.

Rationals are :class:`fractions.Fraction` (normalized on construction).
Intervals carry MPFR endpoints; every endpoint is produced by a correctly
rounded MPFR operation in the outward direction, so for any ``x in X`` and
``y in Y`` the true ``x op y`` lies in ``X op Y``.

The working precision (significand bits) is held in a context variable and
can be raised locally::

    with working_precision(256):
        third = Interval.from_rational(Fraction(1, 3))
"""
from __future__ import annotations

import contextvars
import math
import numbers
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError

ExactRational = Fraction

BASE_PRECISION = 64
MAX_DOUBLINGS = 3
MAX_PRECISION = BASE_PRECISION << MAX_DOUBLINGS

_precision: contextvars.ContextVar[int] = contextvars.ContextVar(
    "signsum_precision", default=BASE_PRECISION
)


def get_precision() -> int:
    return _precision.get()


@contextmanager
def working_precision(bits: int):
    """Temporarily set the significand size used by interval operations."""
    if bits < 2:
        raise ValueError("precision must be at least 2 bits")
    token = _precision.set(int(bits))
    try:
        yield bits
    finally:
        _precision.reset(token)


def precision_ladder(start: int | None = None) -> list[int]:
    """Precisions tried by retry loops: start, 2*start, ... up to MAX_PRECISION."""
    bits = max(start or get_precision(), BASE_PRECISION)
    ladder = [bits]
    while ladder[-1] * 2 <= MAX_PRECISION:
        ladder.append(ladder[-1] * 2)
    return ladder


@lru_cache(maxsize=None)
def _contexts(bits: int) -> tuple[gmpy2.context, gmpy2.context]:
    down = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
    return down, up


def _ctx() -> tuple[gmpy2.context, gmpy2.context]:
    return _contexts(_precision.get())


def _negate(x: mpfr) -> mpfr:
    # gmpy2's unary minus rounds to the global context; keep the operand's size
    return _contexts(x.precision)[0].minus(x)


def as_fraction(value) -> Fraction:
    """Exact conversion of an int, Fraction, float, mpq or mpfr to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, (type(mpq()), type(mpz()))):
        value = mpq(value)
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, type(mpfr())):
        if not gmpy2.is_finite(value):
            raise DomainError(f"non-finite value {value!r}")
        num, den = value.as_integer_ratio()
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer, or a finite decimal string exactly."""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    return value


def _to_mpq(value: Fraction) -> mpq:
    return mpq(value.numerator, value.denominator)


Real = Union["Interval", Fraction, int, float]


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval ``[lo, hi]`` with MPFR endpoints."""

    lo: mpfr
    hi: mpfr

    def __post_init__(self):
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise DomainError("NaN interval endpoint")
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    # -- construction ---------------------------------------------------
    @classmethod
    def from_rational(cls, r) -> Interval:
        r = as_fraction(r)
        down, up = _ctx()
        num, den = mpz(r.numerator), mpz(r.denominator)
        return cls(down.div(num, den), up.div(num, den))

    @classmethod
    def point(cls, value) -> Interval:
        if isinstance(value, Interval):
            return value
        return cls.from_rational(value)

    @classmethod
    def from_bounds(cls, lo, hi) -> Interval:
        """Smallest representable interval containing the exact reals lo..hi."""
        a = cls.from_rational(lo)
        b = cls.from_rational(hi)
        return cls(a.lo, b.hi)

    # -- inspection -----------------------------------------------------
    @property
    def width(self) -> mpfr:
        return _ctx()[1].sub(self.hi, self.lo)

    @property
    def mid(self) -> mpfr:
        bits = max(self.lo.precision, self.hi.precision) + 1
        ctx = gmpy2.context(precision=bits)
        return ctx.div(ctx.add(self.lo, self.hi), 2)

    @property
    def bits(self) -> int:
        return max(self.lo.precision, self.hi.precision)

    def fraction_bounds(self) -> tuple[Fraction, Fraction]:
        return as_fraction(self.lo), as_fraction(self.hi)

    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        q = _to_mpq(as_fraction(value))
        return self.lo <= q <= self.hi

    __contains__ = contains

    def overlaps(self, other: Interval) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"

    # -- certified order relations ---------------------------------------
    def certainly_gt(self, other) -> bool:
        return self.lo > _upper(other)

    def certainly_ge(self, other) -> bool:
        return self.lo >= _upper(other)

    def certainly_lt(self, other) -> bool:
        return self.hi < _lower(other)

    def certainly_le(self, other) -> bool:
        return self.hi <= _lower(other)

    # -- lattice ----------------------------------------------------------
    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: Interval) -> Interval:
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def clamp(self, lo=None, hi=None) -> Interval:
        """Restrict to a known range of the true value (e.g. a probability)."""
        a, b = self.lo, self.hi
        if lo is not None:
            lo_i = Interval.point(lo)
            a = max(a, lo_i.lo)
            b = max(b, lo_i.lo)
        if hi is not None:
            hi_i = Interval.point(hi)
            b = min(b, hi_i.hi)
            a = min(a, hi_i.hi)
        return Interval(a, b)

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> Interval:
        return Interval(_negate(self.hi), _negate(self.lo))

    def __pos__(self) -> Interval:
        return self

    def __add__(self, other) -> Interval:
        other = _coerce(other)
        down, up = _ctx()
        return Interval(down.add(self.lo, other.lo), up.add(self.hi, other.hi))

    def __sub__(self, other) -> Interval:
        other = _coerce(other)
        down, up = _ctx()
        return Interval(down.sub(self.lo, other.hi), up.sub(self.hi, other.lo))

    def __mul__(self, other) -> Interval:
        other = _coerce(other)
        down, up = _ctx()
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(
            min(down.mul(a, b) for a, b in pairs),
            max(up.mul(a, b) for a, b in pairs),
        )

    def __truediv__(self, other) -> Interval:
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise DomainError(f"division by interval containing zero: {other!r}")
        down, up = _ctx()
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(
            min(down.div(a, b) for a, b in pairs),
            max(up.div(a, b) for a, b in pairs),
        )

    def __radd__(self, other) -> Interval:
        return _coerce(other) + self

    def __rsub__(self, other) -> Interval:
        return _coerce(other) - self

    def __rmul__(self, other) -> Interval:
        return _coerce(other) * self

    def __rtruediv__(self, other) -> Interval:
        return _coerce(other) / self

    def square(self) -> Interval:
        down, up = _ctx()
        if self.lo >= 0:
            return Interval(down.square(self.lo), up.square(self.hi))
        if self.hi <= 0:
            return Interval(down.square(self.hi), up.square(self.lo))
        return Interval(mpfr(0), max(up.square(self.lo), up.square(self.hi)))

    def __pow__(self, k: int) -> Interval:
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if k == 0:
            return Interval.point(1)
        if k % 2 == 0:
            return (self.square()) ** (k // 2)
        # odd powers are increasing, so the endpoints map to the endpoints
        down, up = _ctx()
        return Interval(down.pow(self.lo, k), up.pow(self.hi, k))

    def sqrt(self) -> Interval:
        if self.lo < 0:
            raise DomainError(f"sqrt of interval with negative part: {self!r}")
        down, up = _ctx()
        return Interval(down.sqrt(self.lo), up.sqrt(self.hi))

    def exp(self) -> Interval:
        down, up = _ctx()
        return Interval(down.exp(self.lo), up.exp(self.hi))


def _coerce(value) -> Interval:
    if isinstance(value, Interval):
        return value
    enclose = getattr(value, "enclosure", None)
    if enclose is not None:
        return enclose()
    return Interval.from_rational(value)


def _lower(value):
    if isinstance(value, Interval):
        return value.lo
    return _to_mpq(as_fraction(value))


def _upper(value):
    if isinstance(value, Interval):
        return value.hi
    return _to_mpq(as_fraction(value))


def interval_from_rational(r: Fraction) -> Interval:
    return Interval.from_rational(r)


def interval_arith(a: Interval, b: Interval, op: str) -> Interval:
    """Outward-rounded ``a op b`` for op in add/sub/mul/div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown interval operation {op!r}")


def interval_sqrt(a: Interval) -> Interval:
    return a.sqrt()


def interval_pi() -> Interval:
    down, up = _ctx()
    return Interval(down.const_pi(), up.const_pi())


def hull_of(values) -> Interval:
    values = [_coerce(v) for v in values]
    out = values[0]
    for v in values[1:]:
        out = out.hull(v)
    return out


# -- serialization -----------------------------------------------------------

def rational_to_json(r: Fraction) -> dict:
    return {"num": str(r.numerator), "den": str(r.denominator)}


def rational_from_json(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def decimal_string(value: Fraction, digits: int, upward: bool) -> str:
    """Scientific decimal with `digits` significant digits, rounded toward
    +inf (upward) or -inf. Exact values that fit are printed exactly."""
    if value == 0:
        return "0"
    neg = value < 0
    mag = -value if neg else value
    exp10 = len(str(mag.numerator)) - len(str(mag.denominator))
    if Fraction(10) ** exp10 > mag:
        exp10 -= 1
    scaled = mag * Fraction(10) ** (digits - 1 - exp10)
    # rounding magnitude away from zero moves a negative value downward
    away = upward != neg
    m = -((-scaled.numerator) // scaled.denominator) if away else scaled.numerator // scaled.denominator
    if m >= 10 ** digits:
        m //= 10
        exp10 += 1
    body = str(m).rstrip("0") or "0"
    mant = body[0] + ("." + body[1:] if len(body) > 1 else "")
    return f"{'-' if neg else ''}{mant}e{exp10}"


def interval_to_json(iv: Interval) -> dict:
    bits = iv.bits
    digits = math.ceil(bits * math.log10(2)) + 2
    lo, hi = iv.fraction_bounds()
    return {
        "lo": decimal_string(lo, digits, upward=False),
        "hi": decimal_string(hi, digits, upward=True),
        "precision": bits,
    }


def interval_from_json(obj: dict) -> Interval:
    return Interval.from_bounds(Fraction(obj["lo"]), Fraction(obj["hi"]))

"""Exact sums of rational multiples of square roots.

A :class:`RootSum` is ``sum(c_s * sqrt(s))`` over distinct squarefree
integers ``s >= 1`` with rational ``c_s``.  Square roots of distinct
squarefree integers are linearly independent over Q, so a RootSum is zero
exactly when all its coefficients are zero; otherwise its sign is found by
refining an integer fixed-point enclosure until it excludes zero.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .numerics import Interval, as_fraction, get_precision, parse_rational

SIGN_PRECISION_LIMIT = 1 << 16


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return (k, s) with n = k*k*s and s squarefree."""
    if n <= 0:
        raise DomainError("squarefree_split needs a positive integer")
    k, s = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        k *= d ** (e // 2)
        if e % 2:
            s *= d
        d += 1 if d == 2 else 2
    return k, s * n


def fixed_point_sqrt(s: int, bits: int) -> tuple[int, int]:
    """Integers (lo, hi) with lo <= sqrt(s) * 2**bits <= hi."""
    r = math.isqrt(s << (2 * bits))
    return r, r if r * r == s << (2 * bits) else r + 1


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class RootSum:
    terms: tuple[tuple[int, Fraction], ...]  # sorted (radicand, nonzero coeff)

    @classmethod
    def from_dict(cls, coeffs: dict[int, Fraction]) -> RootSum:
        return cls(tuple(sorted((s, c) for s, c in coeffs.items() if c != 0)))

    @classmethod
    def rational(cls, r) -> RootSum:
        return cls.from_dict({1: as_fraction(r)})

    @classmethod
    def sqrt_of(cls, r) -> RootSum:
        """Exact sqrt(r) for rational r >= 0."""
        r = as_fraction(r)
        if r < 0:
            raise DomainError(f"sqrt of negative rational {r}")
        if r == 0:
            return cls(())
        k, s = squarefree_split(r.numerator * r.denominator)
        return cls.from_dict({s: Fraction(k, r.denominator)})

    @classmethod
    def coerce(cls, value) -> RootSum:
        if isinstance(value, RootSum):
            return value
        return cls.rational(value)

    # -- structure -------------------------------------------------------
    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(s == 1 for s, _ in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is irrational")
        return self.terms[0][1] if self.terms else Fraction(0)

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def square(self) -> Fraction:
        """Exact square; only defined for single-term sums."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) != 1:
            raise DomainError("square of a multi-term RootSum is not rational")
        s, c = self.terms[0]
        return c * c * s

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other) -> RootSum:
        other = RootSum.coerce(other)
        out = self.as_dict()
        for s, c in other.terms:
            out[s] = out.get(s, Fraction(0)) + c
        return RootSum.from_dict(out)

    __radd__ = __add__

    def __neg__(self) -> RootSum:
        return RootSum(tuple((s, -c) for s, c in self.terms))

    def __sub__(self, other) -> RootSum:
        return self + (-RootSum.coerce(other))

    def __rsub__(self, other) -> RootSum:
        return RootSum.coerce(other) - self

    def __mul__(self, other) -> RootSum:
        if isinstance(other, RootSum):
            out: dict[int, Fraction] = {}
            for s1, c1 in self.terms:
                for s2, c2 in other.terms:
                    g = math.gcd(s1, s2)
                    s = (s1 // g) * (s2 // g)
                    out[s] = out.get(s, Fraction(0)) + c1 * c2 * g
            return RootSum.from_dict(out)
        k = as_fraction(other)
        return RootSum.from_dict({s: c * k for s, c in self.terms})

    __rmul__ = __mul__

    def reciprocal(self) -> RootSum:
        """1/x for a nonzero single-term sum."""
        if len(self.terms) != 1:
            raise DomainError("reciprocal only defined for nonzero monomials")
        s, c = self.terms[0]
        return RootSum.from_dict({s: 1 / (c * s)})

    # -- numerics ------------------------------------------------------------
    def fixed_point(self, bits: int) -> tuple[int, int]:
        """Integers (lo, hi) with lo <= value * 2**bits <= hi."""
        lo = hi = 0
        for s, c in self.terms:
            r_lo, r_hi = fixed_point_sqrt(s, bits)
            p, q = c.numerator, c.denominator
            if p >= 0:
                lo += _floor_div(p * r_lo, q)
                hi += _ceil_div(p * r_hi, q)
            else:
                lo += _floor_div(p * r_hi, q)
                hi += _ceil_div(p * r_lo, q)
        return lo, hi

    def enclosure(self, bits: int | None = None) -> Interval:
        bits = bits or get_precision()
        lo, hi = self.fixed_point(bits + 4)
        scale = 1 << (bits + 4)
        return Interval.from_bounds(Fraction(lo, scale), Fraction(hi, scale))

    def sign(self) -> int:
        """Exact sign (-1, 0, +1)."""
        if not self.terms:
            return 0
        if self.is_rational():
            return (self.terms[0][1] > 0) - (self.terms[0][1] < 0)
        bits = 64
        while bits <= SIGN_PRECISION_LIMIT:
            lo, hi = self.fixed_point(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise DomainError(f"could not resolve the sign of {self}")  # pragma: no cover

    def __float__(self) -> float:
        lo, hi = self.fixed_point(64)
        return float(Fraction(lo + hi, 2 << 64))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.terms:
            if s == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({s})")
            elif c == -1:
                parts.append(f"-sqrt({s})")
            else:
                parts.append(f"{c}*sqrt({s})")
        return " + ".join(parts).replace("+ -", "- ")


_SQRT_RE = re.compile(r"^([+-]?)\s*sqrt\s*\(\s*([^()]+?)\s*\)$")


def parse_real(text: str) -> Fraction | RootSum:
    """Parse ``p/q``, a decimal, or ``[-]sqrt(p/q)``.

    Rationals come back as Fraction; square roots as RootSum.
    """
    text = text.strip()
    m = _SQRT_RE.match(text)
    if m:
        inner = parse_rational(m.group(2))
        if inner < 0:
            raise ValueError(f"negative radicand in {text!r}")
        root = RootSum.sqrt_of(inner)
        return -root if m.group(1) == "-" else root
    return parse_rational(text)

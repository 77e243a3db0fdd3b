"""Certified enclosures of the standard normal tail and derived bounds.

``Q(x) = P[N(0,1) >= x]``.  For ``0 <= x <= 3`` we use

    Q(x) = 1/2 - phi(x) * sum_{k>=0} x^(2k+1) / (1*3*...*(2k+1))

whose terms are all positive; the truncation tail is bounded by a geometric
series.  For ``x > 3`` we use Laplace's continued fraction for the Mills
ratio ``Q(x)/phi(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...))))``.  All partial
numerators and denominators are positive, so the true value lies between
any two consecutive convergents.  Negative arguments use ``Q(-x) = 1 - Q(x)``.

Q is decreasing, so an interval argument is handled by evaluating both
endpoints.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .errors import ContractError, PrecisionExhausted
from .numerics import (
    Interval,
    as_fraction,
    get_precision,
    MAX_PRECISION,
    interval_pi,
    precision_ladder,
    working_precision,
)
from .report import Verdict
from .surds import RootSum

SERIES_THRESHOLD = 3
DEFAULT_TARGET_WIDTH = 1e-12
CF_MAX_TERMS = 20000
ARGUMENT_LIMIT = 1e8

SQRT2 = RootSum.sqrt_of(2)


def _enclose(x) -> Interval:
    """Interval for an Interval/RootSum/rational argument at the current precision."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, RootSum):
        return x.enclosure()
    return Interval.from_rational(as_fraction(x))


def _is_exact(x) -> bool:
    return not isinstance(x, Interval) or x.is_point()


def density(t: Interval) -> Interval:
    """Standard normal density over t."""
    return (-(t.square()) / 2).exp() / (2 * interval_pi()).sqrt()


def _series_sum(t, tol) -> Interval:
    """Enclosure of sum_k t^(2k+1)/(2k+1)!! for 0 <= t <= SERIES_THRESHOLD."""
    x = Interval(t, t)
    x2 = x.square()
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term = term * x2 / (2 * k + 1)
        total = total + term
        # remaining terms shrink at least by rho = t^2/(2k+3) each step
        rho = x2 / (2 * k + 3)
        if rho.hi < 0.5:
            tail = term * rho / (1 - rho)
            if tail.hi <= tol:
                return Interval(total.lo, (total + tail).hi)


def _mills_ratio(t, tol) -> Interval:
    """Bracket of Q(t)/phi(t) from consecutive continued-fraction convergents."""
    x = Interval(t, t)
    # A_n = b_n A_{n-1} + a_n A_{n-2}, same for B; b_n = t, a_1 = 1, a_n = n - 1
    a_prev, a_cur = Interval.point(1), Interval.point(0)
    b_prev, b_cur = Interval.point(0), Interval.point(1)
    prev_conv = None
    for n in range(1, CF_MAX_TERMS + 1):
        a_n = 1 if n == 1 else n - 1
        a_prev, a_cur = a_cur, x * a_cur + a_prev * a_n
        b_prev, b_cur = b_cur, x * b_cur + b_prev * a_n
        conv = a_cur / b_cur
        if prev_conv is not None:
            bracket = prev_conv.hull(conv)
            # past the point where rounding dominates, more terms cannot help
            if bracket.width <= tol or 4 * max(conv.width, prev_conv.width) >= bracket.width:
                return bracket
        prev_conv = conv
        if n % 64 == 0:
            # rescale to keep exponents moderate; the ratio is unchanged
            scale = b_cur.hi
            a_prev, a_cur = a_prev / scale, a_cur / scale
            b_prev, b_cur = b_prev / scale, b_cur / scale
    return bracket


def _q_point(t, tol) -> Interval:
    if t < 0:
        return 1 - _q_point((-Interval(t, t)).lo, tol)
    x = Interval(t, t)
    phi = density(x)
    if t <= SERIES_THRESHOLD:
        # phi <= 0.4, so a sum error of tol moves Q by less than tol/2
        q = Fraction(1, 2) - phi * _series_sum(t, tol)
    else:
        q = phi * _mills_ratio(t, tol)
    return q.clamp(0, 1)


def _q_enclosure(x: Interval, tol) -> Interval:
    if abs(x.lo) > ARGUMENT_LIMIT or abs(x.hi) > ARGUMENT_LIMIT:
        raise ContractError(f"|x| exceeds the supported limit {ARGUMENT_LIMIT:g}")
    upper = _q_point(x.lo, tol)
    lower = upper if x.is_point() else _q_point(x.hi, tol)
    return Interval(lower.lo, upper.hi)


def _refine(compute, target_width, enforce: bool) -> Interval:
    """Run `compute(tol)` up the precision ladder until the width target is met."""
    target = as_fraction(target_width)
    if target <= 0:
        raise ContractError("target_width must be positive")
    tol = mpq(target.numerator, target.denominator) / 16
    result = None
    for bits in precision_ladder():
        with working_precision(bits):
            result = compute(tol)
        if not enforce or result.width <= target:
            return result
        # relative rounding at the top of the ladder already exceeds the target
        magnitude = max(abs(result.lo), abs(result.hi))
        if magnitude * mpq(1, 1 << (MAX_PRECISION - 2)) > target:
            break
    raise PrecisionExhausted(
        f"enclosure width {float(result.width):.3g} exceeds target {float(target):.3g}"
        f" at {bits} bits"
    )


def q_tail(x, target_width=DEFAULT_TARGET_WIDTH) -> Interval:
    """Enclosure of Q over x (an Interval, rational, or RootSum)."""
    return _refine(lambda tol: _q_enclosure(_enclose(x), tol), target_width, _is_exact(x))


@lru_cache(maxsize=64)
def _q_sqrt2(bits: int, tol) -> Interval:
    with working_precision(bits):
        return _q_enclosure(SQRT2.enclosure(), tol)


def _bd_denominator(tol) -> Interval:
    return 4 * _q_sqrt2(get_precision(), tol)


def _inv_sqrt(c) -> Interval | RootSum:
    if isinstance(c, Interval):
        if c.lo <= 0:
            raise ContractError("c must be positive")
        return 1 / c.sqrt()
    c = RootSum.coerce(c)
    value = c.rational_value()
    if value <= 0:
        raise ContractError("c must be positive")
    return RootSum.sqrt_of(1 / value)


def f_of_c(c, target_width=DEFAULT_TARGET_WIDTH) -> Interval:
    """Enclosure of F(c) = 1/2 - Q(1/sqrt(c)) / (4 Q(sqrt 2)) over c."""
    arg = _inv_sqrt(c)

    def compute(tol):
        q = _q_enclosure(_enclose(arg), tol / 4)
        return Fraction(1, 2) - q / _bd_denominator(tol / 4)

    return _refine(compute, target_width, _is_exact(c))


def bd_bound(x, target_width=DEFAULT_TARGET_WIDTH) -> Interval:
    """Enclosure of Q(x) / (4 Q(sqrt 2))."""

    def compute(tol):
        return _q_enclosure(_enclose(x), tol / 4) / _bd_denominator(tol / 4)

    return _refine(compute, target_width, _is_exact(x))


def q_prime(t: Interval) -> Interval:
    return -density(t)


def q_second(t: Interval) -> Interval:
    # closed form t * exp(-t^2/2) / sqrt(2 pi), evaluated without reusing density()
    return t * (-(t * t) / 2).exp() / (interval_pi() * 2).sqrt()


def q_second_derivative_identity_check(x, tolerance=Fraction(1, 10**12)) -> Verdict:
    """Check Q''(t) + t Q'(t) = 0 at sample points of x."""
    x = _enclose(x)
    if x.lo <= 0:
        raise ContractError("identity check needs x.lo > 0")
    samples = {x.lo, x.hi, x.mid}
    for t in sorted(samples):
        ti = Interval(t, t)
        residual = q_second(ti) + ti * q_prime(ti)
        if not (residual.contains(0) and residual.width <= tolerance):
            return Verdict.UNDECIDED
    return Verdict.VERIFIED


__all__ = [
    "DEFAULT_TARGET_WIDTH",
    "SERIES_THRESHOLD",
    "bd_bound",
    "density",
    "f_of_c",
    "q_prime",
    "q_second",
    "q_second_derivative_identity_check",
    "q_tail",
]

"""Distribution of S = sum(a_i v_i) over all 2**n sign patterns.

Two computational paths:

* exact: every weight is a Fraction.  Weights are scaled to integers over a
  common denominator, so every signed sum is an integer and every query is
  exact.
* interval: some weight is a square root (``RootSum``) or a bare
  ``Interval``.  Signed sums are enclosed in integer fixed-point intervals;
  atoms whose event membership the enclosures cannot decide are resolved
  exactly when all weights are RootSums (square roots of distinct squarefree
  integers are independent over Q), and otherwise reported as ambiguous.

Queries split the weights into a first half of ceil(n/2) entries and the
rest, coalesce equal half-sums, sort one half and count matching partners
with two binary-search cursors per atom of the other half.
"""
from __future__ import annotations

import bisect
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, reduce
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, ContractError, WeightFileError
from .numerics import (
    Interval,
    as_fraction,
    get_precision,
    interval_to_json,
    rational_to_json,
)
from .surds import RootSum, parse_real

MAX_COUNT_N = 40
MAX_ATOMS_N = 24
REFINE_LIMIT = 200_000
_INT64_SAFE = 1 << 62

Weight = Union[Fraction, RootSum, Interval]


def default_workers() -> int:
    env = os.environ.get("SIGNSUM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# weight vectors
# ---------------------------------------------------------------------------

def _coerce_weight(w) -> Weight:
    if isinstance(w, (Fraction, Interval)):
        return w
    if isinstance(w, RootSum):
        if not w.is_monomial():
            raise ContractError(f"weight {w} is not a single square root term")
        return w.rational_value() if w.is_rational() else w
    if isinstance(w, str):
        return parse_real(w)
    if isinstance(w, float):
        raise TypeError("float weights are ambiguous; pass a Fraction or decimal string")
    return as_fraction(w)


@dataclass(frozen=True)
class WeightVector:
    entries: tuple[Weight, ...]

    def __init__(self, entries: Iterable = ()):
        object.__setattr__(self, "entries", tuple(_coerce_weight(w) for w in entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def mode(self) -> str:
        return "exact" if all(isinstance(w, Fraction) for w in self.entries) else "interval"

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def is_algebraic(self) -> bool:
        """True when every entry has an exact (rational or surd) value."""
        return not any(isinstance(w, Interval) for w in self.entries)

    def root_sums(self) -> list[RootSum]:
        return [RootSum.coerce(w) for w in self.entries]

    def sum_of_squares(self) -> Fraction | Interval:
        if self.is_algebraic():
            return sum((RootSum.coerce(w).square() for w in self.entries), Fraction(0))
        total = Interval.point(0)
        for w in self.entries:
            total = total + (w.square() if isinstance(w, Interval) else RootSum.coerce(w).square())
        return total

    def norm_status(self, bound=1) -> str:
        """'certified', 'violated' or 'undecided' for sum(v_i^2) <= bound."""
        ss = self.sum_of_squares()
        if isinstance(ss, Fraction):
            return "certified" if ss <= as_fraction(bound) else "violated"
        bound_iv = bound if isinstance(bound, Interval) else Interval.point(bound)
        if ss.hi <= bound_iv.lo:
            return "certified"
        if ss.lo > bound_iv.hi:
            return "violated"
        return "undecided"

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) for w in self.entries) + ")"

    def to_json(self) -> dict:
        out = []
        for w in self.entries:
            if isinstance(w, Fraction):
                out.append(rational_to_json(w))
            elif isinstance(w, RootSum):
                out.append({"expr": str(w)})
            else:
                out.append(interval_to_json(w))
        return {"mode": self.mode, "n": self.n, "entries": out}


_COMMENT = re.compile(r"^\s*#")


def parse_weights(text: str) -> WeightVector:
    """Parse the weight-file format: one weight per line, '#' comments."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or _COMMENT.match(line):
            continue
        try:
            entries.append(parse_real(line))
        except (ValueError, ZeroDivisionError) as exc:
            raise WeightFileError(f"cannot parse weight {line.strip()!r}", lineno) from exc
    return WeightVector(entries)


def load_weights(path) -> WeightVector:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise WeightFileError(f"cannot read weight file {path}: {exc.strerror}") from exc
    return parse_weights(text)


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbabilityResult:
    exact: Fraction | None
    bounds: Interval
    ambiguous_atoms: int = 0
    inside: int = 0          # sign patterns certainly in the event
    possible: int = 0        # sign patterns possibly in the event
    total: int = 1

    @classmethod
    def from_counts(cls, inside: int, possible: int, total: int) -> ProbabilityResult:
        lo, hi = Fraction(inside, total), Fraction(possible, total)
        exact = lo if inside == possible else None
        return cls(exact, Interval.from_bounds(lo, hi), possible - inside, inside, possible, total)

    @property
    def lower(self) -> Fraction:
        return Fraction(self.inside, self.total)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.possible, self.total)

    def to_json(self) -> dict:
        return {
            "exact": rational_to_json(self.exact) if self.exact is not None else None,
            "lower": rational_to_json(self.lower),
            "upper": rational_to_json(self.upper),
            "bounds": interval_to_json(self.bounds),
            "ambiguous_atoms": self.ambiguous_atoms,
            "total": str(self.total),
        }

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"[{self.lower}, {self.upper}] ({self.ambiguous_atoms} ambiguous atoms)"


@dataclass
class SignedSumDistribution:
    atoms: list[tuple[Fraction | Interval, int]]
    total: int
    mode: str
    exact_values: list[RootSum] | None = None

    def __len__(self) -> int:
        return len(self.atoms)

    def to_json(self) -> dict:
        rows = []
        for i, (value, mult) in enumerate(self.atoms):
            if isinstance(value, Fraction):
                row = {"value": rational_to_json(value)}
            else:
                row = {"value": interval_to_json(value)}
                if self.exact_values is not None:
                    row["expr"] = str(self.exact_values[i])
            row["multiplicity"] = str(mult)
            rows.append(row)
        return {"mode": self.mode, "total": str(self.total), "atoms": rows}


@dataclass
class MassCheck:
    passed: bool
    total: int
    mass: int
    symmetric: bool
    sorted_strictly: bool
    messages: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# exact integer path
# ---------------------------------------------------------------------------

def _common_scale(values: Sequence[Fraction]) -> tuple[int, list[int]]:
    den = reduce(math.lcm, (v.denominator for v in values), 1)
    return den, [int(v * den) for v in values]


def _half_sums_int(nums: Sequence[int], use_numpy: bool):
    """Coalesced signed sums: (sorted values, counts)."""
    if use_numpy:
        vals = np.zeros(1, dtype=np.int64)
        counts = np.ones(1, dtype=np.int64)
        for w in nums:
            vals = np.concatenate((vals - w, vals + w))
            counts = np.concatenate((counts, counts))
            vals, inv = np.unique(vals, return_inverse=True)
            merged = np.zeros(len(vals), dtype=np.int64)
            np.add.at(merged, inv.reshape(-1), counts)
            counts = merged
        return vals, counts
    table = {0: 1}
    for w in nums:
        nxt: dict[int, int] = {}
        for s, c in table.items():
            nxt[s - w] = nxt.get(s - w, 0) + c
            nxt[s + w] = nxt.get(s + w, 0) + c
        table = nxt
    keys = sorted(table)
    return keys, [table[k] for k in keys]


def _count_range_numpy(a_vals, a_counts, b_vals, b_counts, low, high, workers) -> int:
    """Number of (a, b) pairs, with multiplicity, with low <= a + b <= high."""
    cum = np.concatenate(([0], np.cumsum(b_counts)))

    def chunk(sl):
        a = a_vals[sl]
        lo_idx = np.zeros(len(a), dtype=np.int64) if low is None else np.searchsorted(b_vals, low - a, "left")
        hi_idx = np.full(len(a), len(b_vals)) if high is None else np.searchsorted(b_vals, high - a, "right")
        hits = np.maximum(cum[hi_idx] - cum[lo_idx], 0)
        return int(np.dot(a_counts[sl], hits))

    n = len(a_vals)
    if workers <= 1 or n < 1 << 14:
        return chunk(slice(0, n))
    step = -(-n // workers)
    slices = [slice(i, min(i + step, n)) for i in range(0, n, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(chunk, slices))


def _count_range_python(a_vals, a_counts, b_vals, b_counts, low, high) -> int:
    cum = [0]
    for c in b_counts:
        cum.append(cum[-1] + c)
    total = 0
    for a, ca in zip(a_vals, a_counts):
        i = 0 if low is None else bisect.bisect_left(b_vals, low - a)
        j = len(b_vals) if high is None else bisect.bisect_right(b_vals, high - a)
        if j > i:
            total += ca * (cum[j] - cum[i])
    return total


def _exact_count(weights: Sequence[Fraction], low: Fraction | None, high: Fraction | None,
                 workers: int) -> int:
    """Sign patterns with low <= S <= high (None = unbounded)."""
    den, nums = _common_scale(weights)
    lo_i = None if low is None else math.ceil(low * den)
    hi_i = None if high is None else math.floor(high * den)
    if lo_i is not None and hi_i is not None and lo_i > hi_i:
        return 0
    split = (len(nums) + 1) // 2
    use_numpy = sum(abs(x) for x in nums) < _INT64_SAFE and (
        lo_i is None or abs(lo_i) < _INT64_SAFE) and (hi_i is None or abs(hi_i) < _INT64_SAFE)
    a_vals, a_counts = _half_sums_int(nums[:split], use_numpy)
    b_vals, b_counts = _half_sums_int(nums[split:], use_numpy)
    if use_numpy:
        return _count_range_numpy(a_vals, a_counts, b_vals, b_counts, lo_i, hi_i, workers)
    return _count_range_python(a_vals, a_counts, b_vals, b_counts, lo_i, hi_i)


# ---------------------------------------------------------------------------
# surd / interval path
# ---------------------------------------------------------------------------

class _Basis:
    """Common representation of surd weights: coefficient numerators over a
    shared denominator, one slot per distinct radicand."""

    def __init__(self, roots: Sequence[RootSum], bits: int):
        radicands = sorted({s for r in roots for s, _ in r.terms} | {1})
        self.radicands = radicands
        self.slot = {s: i for i, s in enumerate(radicands)}
        coeffs = [c for r in roots for _, c in r.terms]
        self.den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
        self.bits = bits
        self.sqrt_fp = [_fp_sqrt(s, bits) for s in radicands]

    def weight_key(self, root: RootSum) -> tuple[int, ...]:
        key = [0] * len(self.radicands)
        for s, c in root.terms:
            key[self.slot[s]] += int(c * self.den)
        return tuple(key)

    def fixed_point(self, key: tuple[int, ...]) -> tuple[int, int]:
        lo = hi = 0
        for k, (r_lo, r_hi) in zip(key, self.sqrt_fp):
            if k >= 0:
                lo += k * r_lo
                hi += k * r_hi
            else:
                lo += k * r_hi
                hi += k * r_lo
        return lo // self.den, -((-hi) // self.den)

    def root_sum(self, key: tuple[int, ...]) -> RootSum:
        return RootSum.from_dict({s: Fraction(k, self.den) for s, k in zip(self.radicands, key)})


def _fp_sqrt(s: int, bits: int) -> tuple[int, int]:
    r = math.isqrt(s << (2 * bits))
    return r, (r if r * r == s << (2 * bits) else r + 1)


def _fp_interval(iv: Interval, bits: int) -> tuple[int, int]:
    lo, hi = iv.fraction_bounds()
    scale = 1 << bits
    return math.floor(lo * scale), math.ceil(hi * scale)


def _half_table(entries: Sequence, basis: _Basis | None, bits: int) -> dict:
    """Coalesced half-sums keyed by exact coefficient tuple (surd mode) or by
    fixed-point enclosure (bare interval mode)."""
    if basis is not None:
        zero = tuple([0] * len(basis.radicands))
        table = {zero: 1}
        for w in entries:
            key = basis.weight_key(RootSum.coerce(w))
            nxt: dict = {}
            for s, c in table.items():
                plus = tuple(a + b for a, b in zip(s, key))
                minus = tuple(a - b for a, b in zip(s, key))
                nxt[plus] = nxt.get(plus, 0) + c
                nxt[minus] = nxt.get(minus, 0) + c
            table = nxt
        return table
    table = {(0, 0): 1}
    for w in entries:
        if isinstance(w, Interval):
            w_lo, w_hi = _fp_interval(w, bits)
        else:
            w_lo, w_hi = RootSum.coerce(w).fixed_point(bits)
        nxt = {}
        for (lo, hi), c in table.items():
            for key in ((lo + w_lo, hi + w_hi), (lo - w_hi, hi - w_lo)):
                nxt[key] = nxt.get(key, 0) + c
        table = nxt
    return table


def _half_rows(table: dict, basis: _Basis | None):
    """List of (lo, hi, count, key) sorted by lo."""
    rows = []
    for key, c in table.items():
        lo, hi = basis.fixed_point(key) if basis is not None else key
        rows.append((lo, hi, c, key))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def _bound_fp(value, bits: int) -> tuple[int, int] | None:
    if value is None:
        return None
    if isinstance(value, Interval):
        return _fp_interval(value, bits)
    return RootSum.coerce(value).fixed_point(bits)


def _interval_count(v: WeightVector, low, high, bits: int) -> tuple[int, int]:
    """(certain, possible) sign-pattern counts for low <= S <= high.

    `low`/`high` are RootSum, Fraction, Interval or None (unbounded)."""
    exact_bounds = not isinstance(low, Interval) and not isinstance(high, Interval)
    basis = _Basis(v.root_sums(), bits) if v.is_algebraic() else None
    refine = basis is not None and exact_bounds
    split = (v.n + 1) // 2
    rows_a = _half_rows(_half_table(v.entries[:split], basis, bits), basis)
    rows_b = _half_rows(_half_table(v.entries[split:], basis, bits), basis)
    width = max(r[1] - r[0] for r in rows_a) + max(r[1] - r[0] for r in rows_b)
    b_lo = [r[0] for r in rows_b]
    cum = [0]
    for r in rows_b:
        cum.append(cum[-1] + r[2])
    lo_fp = _bound_fp(low, bits)
    hi_fp = _bound_fp(high, bits)
    low_rs = None if low is None or not refine else RootSum.coerce(low)
    high_rs = None if high is None or not refine else RootSum.coerce(high)
    nb = len(rows_b)

    certain = possible = 0
    band: list[tuple[int, int]] = []
    for ia, (a_lo, _a_hi, ca, _key) in enumerate(rows_a):
        # possible: S.hi >= low.lo and S.lo <= high.hi, using S.hi <= S.lo + width
        p0 = 0 if lo_fp is None else bisect.bisect_left(b_lo, lo_fp[0] - width - a_lo)
        p1 = nb if hi_fp is None else bisect.bisect_right(b_lo, hi_fp[1] - a_lo)
        # certain: S.lo >= low.hi and S.lo + width <= high.lo
        c0 = 0 if lo_fp is None else bisect.bisect_left(b_lo, lo_fp[1] - a_lo)
        c1 = nb if hi_fp is None else bisect.bisect_right(b_lo, hi_fp[0] - width - a_lo)
        c0, c1 = max(c0, p0), min(c1, p1)
        if p1 <= p0:
            continue
        possible += ca * (cum[p1] - cum[p0])
        if c1 > c0:
            certain += ca * (cum[c1] - cum[c0])
            ranges = ((p0, c0), (c1, p1))
        else:
            ranges = ((p0, p1),)
        if refine:
            for i, j in ranges:
                band.extend((ia, ib) for ib in range(i, j))
            if len(band) > REFINE_LIMIT:
                refine, band = False, []

    if refine:
        for ia, ib in band:
            ka, kb = rows_a[ia][3], rows_b[ib][3]
            s = basis.root_sum(tuple(x + y for x, y in zip(ka, kb)))
            inside = (low_rs is None or (s - low_rs).sign() >= 0) and (
                high_rs is None or (high_rs - s).sign() >= 0)
            mult = rows_a[ia][2] * rows_b[ib][2]
            if inside:
                certain += mult
            else:
                possible -= mult
    return certain, possible


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def _check_capacity(n: int, limit: int):
    if n > limit:
        raise CapacityError(f"n = {n} exceeds the capacity limit {limit}")


def _is_rational(value) -> bool:
    if isinstance(value, Fraction):
        return True
    return isinstance(value, RootSum) and value.is_rational()


def _count_between(v: WeightVector, low, high, workers: int | None) -> ProbabilityResult:
    _check_capacity(v.n, MAX_COUNT_N)
    total = 1 << v.n
    if v.mode == "exact" and all(b is None or _is_rational(b) for b in (low, high)):
        lo = None if low is None else RootSum.coerce(low).rational_value()
        hi = None if high is None else RootSum.coerce(high).rational_value()
        count = _exact_count(v.entries, lo, hi, workers or default_workers())
        return ProbabilityResult.from_counts(count, count, total)
    bits = get_precision()
    certain, possible = _interval_count(v, low, high, bits)
    return ProbabilityResult.from_counts(certain, possible, total)


def _as_real(x):
    if isinstance(x, (Interval, RootSum, Fraction)):
        return x
    if isinstance(x, str):
        return parse_real(x)
    return as_fraction(x)


def prob_abs_shifted_le(v: WeightVector, x=Fraction(0), t=Fraction(1),
                        workers: int | None = None) -> ProbabilityResult:
    """P[|x + Y| <= t] with Y = sum(a_i v_i); the boundary counts as inside."""
    x = _as_real(x)
    t = as_fraction(t)
    if t < 0:
        raise ContractError("threshold t must be nonnegative")
    if isinstance(x, Interval):
        low, high = -x - t, t - x
    else:
        x = RootSum.coerce(x)
        low, high = -x - t, RootSum.coerce(t) - x
    return _count_between(v, low, high, workers)


def prob_tail_ge(v: WeightVector, x, workers: int | None = None) -> ProbabilityResult:
    """P[S >= x], boundary inclusive."""
    x = _as_real(x)
    return _count_between(v, x, None, workers)


def prob_between(v: WeightVector, low, high, workers: int | None = None) -> ProbabilityResult:
    """P[low <= S <= high]; either end may be None."""
    low = None if low is None else _as_real(low)
    high = None if high is None else _as_real(high)
    return _count_between(v, low, high, workers)


def _compare_root_sums(a: RootSum, b: RootSum) -> int:
    return (a - b).sign()


def enumerate_distribution(v: WeightVector) -> SignedSumDistribution:
    """All atoms of S with multiplicities, sorted increasingly."""
    _check_capacity(v.n, MAX_ATOMS_N)
    total = 1 << v.n
    if v.mode == "exact":
        den, nums = _common_scale(v.entries)
        use_numpy = sum(abs(x) for x in nums) < _INT64_SAFE
        split = (len(nums) + 1) // 2
        a_vals, a_counts = _half_sums_int(nums[:split], use_numpy)
        b_vals, b_counts = _half_sums_int(nums[split:], use_numpy)
        if use_numpy:
            vals = (a_vals[:, None] + b_vals[None, :]).reshape(-1)
            counts = (a_counts[:, None] * b_counts[None, :]).reshape(-1)
            uniq, inv = np.unique(vals, return_inverse=True)
            merged = np.zeros(len(uniq), dtype=np.int64)
            np.add.at(merged, inv.reshape(-1), counts)
            atoms = [(Fraction(int(s), den), int(c)) for s, c in zip(uniq, merged)]
        else:
            table: dict[int, int] = {}
            for a, ca in zip(a_vals, a_counts):
                for b, cb in zip(b_vals, b_counts):
                    table[a + b] = table.get(a + b, 0) + ca * cb
            atoms = [(Fraction(s, den), table[s]) for s in sorted(table)]
        return SignedSumDistribution(atoms, total, "exact")

    bits = get_precision()
    if v.is_algebraic():
        basis = _Basis(v.root_sums(), bits)
        table = _half_table(v.entries, basis, bits)
        items = [(basis.root_sum(k), c) for k, c in table.items()]
        items.sort(key=cmp_to_key(lambda p, q: _compare_root_sums(p[0], q[0])))
        atoms = [(r.enclosure(bits), c) for r, c in items]
        return SignedSumDistribution(atoms, total, "interval", [r for r, _ in items])
    table = _half_table(v.entries, None, bits)
    scale = 1 << bits
    atoms = sorted(
        ((Interval.from_bounds(Fraction(lo, scale), Fraction(hi, scale)), c)
         for (lo, hi), c in table.items()),
        key=lambda a: (a[0].lo, a[0].hi),
    )
    return SignedSumDistribution(atoms, total, "interval")


def quantile_mass_check(d: SignedSumDistribution) -> MassCheck:
    """Audit total mass, sign symmetry and ordering of a distribution."""
    messages = []
    mass = sum(c for _, c in d.atoms)
    if mass != d.total:
        messages.append(f"mass {mass} != total {d.total}")
    if d.mode == "exact":
        table = {value: c for value, c in d.atoms}
        symmetric = all(table.get(-value) == c for value, c in d.atoms)
        values = [value for value, _ in d.atoms]
        sorted_strictly = all(a < b for a, b in zip(values, values[1:]))
    elif d.exact_values is not None:
        table = {r: c for r, (_, c) in zip(d.exact_values, d.atoms)}
        symmetric = all(table.get(-r) == c for r, c in table.items())
        sorted_strictly = all(
            _compare_root_sums(a, b) < 0 for a, b in zip(d.exact_values, d.exact_values[1:])
        )
    else:
        n = len(d.atoms)
        symmetric = all(
            d.atoms[i][1] == d.atoms[n - 1 - i][1]
            and d.atoms[i][0].overlaps(-d.atoms[n - 1 - i][0])
            for i in range(n)
        )
        sorted_strictly = all(a[0].lo <= b[0].lo for a, b in zip(d.atoms, d.atoms[1:]))
    if not symmetric:
        messages.append("multiplicities are not symmetric under S -> -S")
    if not sorted_strictly:
        messages.append("atom values are not strictly increasing")
    passed = mass == d.total and symmetric and sorted_strictly
    return MassCheck(passed, d.total, mass, symmetric, sorted_strictly, messages)


def normalize_for_bd(v: WeightVector, c, x) -> WeightVector:
    """w_i = -v_i / (sqrt(c) (1 + |x|)), so that sum(w_i^2) <= 1.

    The sign of x is dropped: P[|x + Y| <= 1] is unchanged under x -> -x
    because Y is symmetric."""
    c = as_fraction(c)
    x = as_fraction(x)
    if c <= 0:
        raise ContractError("c must be positive")
    if abs(x) > 1:
        raise ContractError("|x| must be at most 1")
    budget = c * (1 + abs(x)) ** 2
    status = v.norm_status(budget)
    if status != "certified":
        raise ContractError(f"sum of squares is not certified <= c(1+|x|)^2 ({status})")
    # 1/(sqrt(c)(1+|x|)) = sqrt(1/c) / (1+|x|) is a single surd term
    scale = RootSum.sqrt_of(1 / c) * (1 / (1 + abs(x)))
    out = []
    for w in v.entries:
        if isinstance(w, Interval):
            out.append(-(w * scale.enclosure()))
        else:
            out.append(-(RootSum.coerce(w) * scale))
    return WeightVector(out)

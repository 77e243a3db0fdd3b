"""Heuristic search for weight vectors with small P[|S| <= 1].

The objective is evaluated in floating point inside the loop; every reported
probability is recomputed exactly (or certified) by the distribution module
on the rationalized vector.  Randomness comes from numpy's PCG64 generator
seeded with ``seed + restart``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .distribution import (
    MAX_COUNT_N,
    WeightVector,
    default_workers,
    prob_abs_shifted_le,
)
from .errors import CapacityError, ContractError
from .numerics import rational_to_json
from .surds import RootSum

FLOAT_SLACK = 1e-12
MAX_SWEEPS = 200
SCALE_DIGITS = 30


@dataclass(frozen=True)
class SearchConfig:
    n: int
    restarts: int = 4
    seed: int = 0
    initial_step: float = 0.25
    decay: float = 0.5
    min_step: float = 1e-4
    denominator_bound: int = 1000
    moves: int = 4

    def __post_init__(self):
        if self.n < 1 or self.restarts < 1 or self.moves < 1:
            raise ContractError("n, restarts and moves must be positive")
        if not 0 < self.decay < 1:
            raise ContractError("decay must lie in (0, 1)")
        if self.denominator_bound < 1:
            raise ContractError("denominator bound must be at least 1")
        if not 0 < self.min_step <= self.initial_step:
            raise ContractError("need 0 < min_step <= initial_step")
        if not 0 <= self.seed < 1 << 64:
            raise ContractError("seed must be a 64-bit unsigned integer")
        if self.n > MAX_COUNT_N:
            raise CapacityError(f"n = {self.n} exceeds the counting limit {MAX_COUNT_N}")


def _half_sums_float(v: np.ndarray) -> np.ndarray:
    sums = np.zeros(1)
    for w in v:
        sums = np.concatenate((sums + w, sums - w))
    return np.sort(sums)


def float_prob(v: Sequence[float]) -> float:
    """Floating-point P[|S| <= 1] by meet in the middle."""
    v = np.abs(np.asarray(v, dtype=float))
    split = (len(v) + 1) // 2
    a = _half_sums_float(v[:split])
    b = _half_sums_float(v[split:])
    hi = np.searchsorted(b, 1 + FLOAT_SLACK - a, side="right")
    lo = np.searchsorted(b, -1 - FLOAT_SLACK - a, side="left")
    return float((hi - lo).sum()) / (len(a) * len(b))


def shrink_into_ball(values: Sequence[Fraction], bound=1) -> list[Fraction]:
    """Scale by a rational factor <= 1 so that the sum of squares is <= bound."""
    values = [Fraction(v) for v in values]
    total = sum(v * v for v in values)
    bound = Fraction(bound)
    if total <= bound:
        return values
    # k = floor(D sqrt(bound/total)) / D, so k^2 <= bound/total; smallest D with k > 0
    ratio = bound / total
    for digits in range(3, SCALE_DIGITS + 1, 3):
        scale = 10**digits
        k = Fraction(math.isqrt(ratio.numerator * scale * scale // ratio.denominator), scale)
        if k > 0:
            break
    out = [v * k for v in values]
    assert sum(v * v for v in out) <= bound
    return out


def rationalize(v: Sequence[float], denominator_bound: int) -> list[Fraction]:
    """Best rational approximations of |v_i|, sorted nonincreasing, inside the unit ball."""
    approx = [Fraction(abs(float(x))).limit_denominator(denominator_bound) for x in v]
    approx.sort(reverse=True)
    return shrink_into_ball(approx)


@dataclass
class SearchResult:
    best: WeightVector
    probability: Fraction
    restart: int
    trajectory: list[tuple[int, float]] = field(default_factory=list)
    per_restart: list[tuple[int, Fraction]] = field(default_factory=list)
    config: SearchConfig | None = None

    def to_json(self) -> dict:
        return {
            "n": self.best.n,
            "best": self.best.to_json(),
            "probability": rational_to_json(self.probability),
            "restart": self.restart,
            "trajectory": [{"iteration": i, "probability": repr(p)} for i, p in self.trajectory],
            "restarts": [{"restart": r, "probability": rational_to_json(p)}
                         for r, p in self.per_restart],
        }

    def to_table(self) -> str:
        lines = [f"best probability {self.probability} (~{float(self.probability):.6f})"
                 f" at restart {self.restart}",
                 "weights: " + ", ".join(str(w) for w in self.best.entries),
                 "restart  probability"]
        lines += [f"{r:7d}  {p}" for r, p in self.per_restart]
        return "\n".join(lines)


def _local_search(config: SearchConfig, restart: int):
    rng = np.random.Generator(np.random.PCG64(config.seed + restart))
    v = np.abs(rng.standard_normal(config.n))
    v /= np.linalg.norm(v)
    best = float_prob(v)
    step = config.initial_step
    trajectory = [(0, best)]
    iteration = 0
    for _ in range(MAX_SWEEPS):
        if step < config.min_step:
            break
        improved = False
        for i in range(config.n):
            for _ in range(config.moves):
                iteration += 1
                trial = v.copy()
                trial[i] = abs(trial[i] + step * rng.standard_normal())
                norm = np.linalg.norm(trial)
                if norm == 0:
                    continue
                trial /= norm
                p = float_prob(trial)
                if p < best:
                    v, best, improved = trial, p, True
        trajectory.append((iteration, best))
        if not improved:
            step *= config.decay
    return v, trajectory


def _certify(v: WeightVector) -> Fraction:
    prob = prob_abs_shifted_le(v, 0, 1)
    if prob.exact is None:  # pragma: no cover - rational input is always exact
        raise ContractError("rational vector did not give an exact probability")
    return prob.exact


def minimize_prob(config: SearchConfig, workers: int | None = None) -> SearchResult:
    """Random-restart coordinate search; the minimum certified probability wins,
    ties going to the lowest restart index."""
    from .verifier import run_batch

    def one(restart):
        v, trajectory = _local_search(config, restart)
        vec = WeightVector(rationalize(v, config.denominator_bound))
        return vec, _certify(vec), trajectory

    outcomes = run_batch(one, list(range(config.restarts)), workers or default_workers())
    best_index = min(range(len(outcomes)), key=lambda r: (outcomes[r][1], r))
    vec, prob, trajectory = outcomes[best_index]
    return SearchResult(
        best=vec,
        probability=prob,
        restart=best_index,
        trajectory=trajectory,
        per_restart=[(r, o[1]) for r, o in enumerate(outcomes)],
        config=config,
    )


# ---------------------------------------------------------------------------
# parameterized families
# ---------------------------------------------------------------------------

FAMILIES = ("uniform", "two-block", "dyadic")


@dataclass
class SweepRow:
    params: dict
    vector: WeightVector
    probability: object  # ProbabilityResult

    def sort_key(self):
        p = self.probability
        value = p.exact if p.exact is not None else p.lower
        return (value, str(self.params))

    def to_json(self) -> dict:
        return {"params": self.params, "weights": self.vector.to_json()["entries"],
                "probability": self.probability.to_json()}


def _family_vectors(family: str, n: int, steps: int = 16):
    if family == "uniform":
        yield {"a": f"sqrt(1/{n})"}, [RootSum.sqrt_of(Fraction(1, n))] * n
    elif family == "two-block":
        for j in range(steps + 1):
            b = Fraction(j, steps)
            if n == 1:
                yield {"b": str(b)}, [b]
                continue
            a = RootSum.sqrt_of((1 - b * b) / (n - 1))
            yield {"a": str(a), "b": str(b)}, [a] * (n - 1) + [b]
    elif family == "dyadic":
        grid = [Fraction(j, 8) for j in range(8, 0, -1)]
        for combo in itertools.combinations_with_replacement(grid, n):
            if sum(x * x for x in combo) <= 1:
                yield {"weights": [str(x) for x in combo]}, list(combo)
    else:
        raise ContractError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def sweep_family(family: str, n: int, workers: int | None = None) -> list[SweepRow]:
    """P[|S| <= 1] across a parameterized family, sorted by probability."""
    if n < 1:
        raise ContractError("n must be positive")
    if n > MAX_COUNT_N:
        raise CapacityError(f"n = {n} exceeds the counting limit {MAX_COUNT_N}")
    rows = []
    for params, entries in _family_vectors(family, n):
        vec = WeightVector(entries)
        rows.append(SweepRow(params, vec, prob_abs_shifted_le(vec, 0, 1, workers)))
    rows.sort(key=SweepRow.sort_key)
    return rows


def sweep_table(rows: Sequence[SweepRow]) -> str:
    lines = ["probability  parameters"]
    for row in rows:
        params = ", ".join(f"{k}={v}" for k, v in row.params.items())
        lines.append(f"{str(row.probability):>11}  {params}")
    return "\n".join(lines)

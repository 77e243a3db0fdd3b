"""Certified checks of a Gaussian-tail lower bound on P[|S| <= 1] for Rademacher sums.

Every numeric comparison is made on interval enclosures: ``A >= B`` is
certified when ``A.lo >= B.hi``.  Overlapping enclosures are retried at
doubled precision (up to MAX_DOUBLINGS times) and otherwise reported as
undecided, never as verified.
"""
from __future__ import annotations

import contextvars
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .distribution import (
    WeightVector,
    default_workers,
    normalize_for_bd,
    prob_abs_shifted_le,
    prob_between,
    prob_tail_ge,
    enumerate_distribution,
)
from .errors import ContractError, PrecisionExhausted
from .gaussian import (
    DEFAULT_TARGET_WIDTH,
    bd_bound,
    f_of_c,
    q_prime,
    q_second,
    q_second_derivative_identity_check,
)
from .numerics import (
    BASE_PRECISION,
    Interval,
    as_fraction,
    get_precision,
    precision_ladder,
    working_precision,
)
from .report import Evidence, Verdict, VerificationReport, combine, compare_ge, compare_gt
from .surds import RootSum

MAIN_CONSTANT = Fraction(427685, 10**6)
MAIN_CONSTANT_WIDTH = Fraction(1, 10**9)
QUARTER = Fraction(1, 4)
XI_LIMIT = Fraction(1, 25)
CONCAVITY_EDGE = Fraction(1, 3)
CONVEXITY_EPS = Fraction(1, 10**4)
DEFAULT_KMAX = 60
DEFAULT_SEED = 20170101
F_PROPERTY_GRID = (
    Fraction(1, 100), Fraction(1, 10), Fraction(1, 5), Fraction(1, 4),
    Fraction(7, 25), Fraction(1, 2), Fraction(1),
)


# ---------------------------------------------------------------------------
# retry machinery
# ---------------------------------------------------------------------------

def _attempts(target):
    """(bits, target width) pairs: each precision doubling also tightens the
    requested width by the same number of bits."""
    target = as_fraction(target)
    for bits in precision_ladder(BASE_PRECISION):
        yield bits, target / (1 << (bits - BASE_PRECISION))


def _retry(check: Callable[[Fraction], Evidence], target) -> tuple[Evidence, int]:
    """Run `check(width)` until its verdict is decided or precision runs out."""
    evidence, used = None, BASE_PRECISION
    for bits, width in _attempts(target):
        with working_precision(bits):
            try:
                evidence = check(width)
            except PrecisionExhausted as exc:
                if evidence is None:
                    evidence = Evidence({"error": str(exc)}, Interval.point(0), Interval.point(0),
                                        "n/a", Verdict.UNDECIDED)
                break
        used = bits
        if evidence.verdict is not Verdict.UNDECIDED:
            break
    return evidence, used


def _report(claim: str, evidence: list[Evidence], target, bits: int,
            notes=None, components=None) -> VerificationReport:
    verdicts = [e.verdict for e in evidence] + [c.verdict for c in components or []]
    return VerificationReport(
        claim=claim,
        verdict=combine(verdicts),
        evidence=evidence,
        precision=float(target),
        bits=bits,
        notes=list(notes or []),
        components=list(components or []),
    )


def run_batch(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Map `fn` over `items`; results come back in input order."""
    workers = workers or default_workers()
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    ctx = contextvars.copy_context()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda item: ctx.copy().run(fn, item), items))


def _prob_value(p):
    return p.exact if p.exact is not None else p.bounds


# ---------------------------------------------------------------------------
# the headline constant and the bound function
# ---------------------------------------------------------------------------

def verify_main_constant(target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """F(1/4) > 0.427685 with an enclosure no wider than 1e-9."""

    def check(width):
        f = f_of_c(QUARTER, min(as_fraction(width), MAIN_CONSTANT_WIDTH))
        verdict = compare_gt(f, MAIN_CONSTANT)
        return Evidence({"c": QUARTER}, f, MAIN_CONSTANT, ">", verdict)

    ev, bits = _retry(check, target)
    evidence = [ev]
    if ev.relation == ">":
        narrow = ev.lhs.width <= MAIN_CONSTANT_WIDTH
        evidence.append(Evidence({"c": QUARTER, "quantity": "enclosure width"},
                                 as_fraction(ev.lhs.hi) - as_fraction(ev.lhs.lo), MAIN_CONSTANT_WIDTH,
                                 "<=", Verdict.VERIFIED if narrow else Verdict.UNDECIDED))
    return _report("main-constant", evidence, target, bits)


def verify_f_decreasing_pair(c1, c2, target=DEFAULT_TARGET_WIDTH) -> Evidence:
    c1, c2 = as_fraction(c1), as_fraction(c2)
    if not c1 < c2:
        raise ContractError("need c1 < c2")

    def check(width):
        a, b = f_of_c(c1, width), f_of_c(c2, width)
        return Evidence({"c1": c1, "c2": c2}, a, b, ">", compare_gt(a, b))

    return _retry(check, target)[0]


def verify_f_properties(c_grid: Sequence = F_PROPERTY_GRID, target=DEFAULT_TARGET_WIDTH,
                        lemma2_report: VerificationReport | None = None) -> VerificationReport:
    """Bounded by 1/2, decreasing on the grid, Lemma 1 and Lemma 2."""
    grid = [as_fraction(c) for c in c_grid]
    if any(c <= 0 for c in grid) or grid != sorted(grid):
        raise ContractError("grid values must be positive and sorted")
    bounded, decreasing = [], []
    bits = BASE_PRECISION
    for c in grid:
        def check(width, c=c):
            f = f_of_c(c, width)
            verdict = Verdict.VERIFIED if f.hi <= Fraction(1, 2) else Verdict.UNDECIDED
            return Evidence({"c": c}, Fraction(1, 2), f, ">=", verdict)
        ev, used = _retry(check, target)
        bounded.append(ev)
        bits = max(bits, used)
    for c1, c2 in zip(grid, grid[1:]):
        decreasing.append(verify_f_decreasing_pair(c1, c2, target))
    bound_report = _report("f-bounded-by-half", bounded, target, bits)
    dec_report = _report("f-decreasing", decreasing, target, bits)

    lemma1_items = []
    for c in grid:
        for x in (Fraction(0), Fraction(1, 2), Fraction(1)):
            scale = RootSum.sqrt_of(c) * (1 + x)
            lemma1_items.append((WeightVector([scale]), c, x))
            half = RootSum.sqrt_of(c / 2) * (1 + x)
            lemma1_items.append((WeightVector([half, half]), c, x))
    l1 = [verify_lemma1_on_instance(v, c, x, target) for v, c, x in lemma1_items]
    lemma1_report = _report("f-lemma1", [e for r in l1 for e in r.evidence[:1]], target,
                            max(r.bits for r in l1), components=[])
    lemma1_report.verdict = combine(r.verdict for r in l1)
    if lemma2_report is None:
        lemma2_report = verify_lemma2_all_k(DEFAULT_KMAX, target)
    components = [bound_report, dec_report, lemma1_report, lemma2_report]
    return _report("f-properties", [], target, max(c.bits for c in components),
                   components=components)


# ---------------------------------------------------------------------------
# the normalized Gaussian tail bound and the drift lemma on instances
# ---------------------------------------------------------------------------

def _require_unit(v: WeightVector, budget=1):
    status = v.norm_status(budget)
    if status != "certified":
        raise ContractError(f"sum of squares not certified <= {budget} ({status})")


def _bd_evidence(v: WeightVector, x, target, label=None) -> tuple[Evidence, int]:
    prob = prob_tail_ge(v, x)

    def check(width):
        bound = bd_bound(x, width)
        upper = prob.upper
        if bound.lo >= upper:
            relation, verdict = "<=", Verdict.VERIFIED
        elif bound.hi >= upper:
            # consistent with equality inside the enclosure (the bound is tight)
            relation, verdict = "<= (within enclosure)", Verdict.VERIFIED
        elif prob.lower > bound.hi:
            relation, verdict = "<=", Verdict.REFUTED
        else:
            relation, verdict = "<=", Verdict.UNDECIDED
        inp = {"x": _describe(x)}
        if label:
            inp["instance"] = label
        return Evidence(inp, _prob_value(prob), bound, relation, verdict)

    return _retry(check, target)


def _describe(value):
    if isinstance(value, (Fraction, Interval)):
        return value
    return str(value)


def verify_bd_on_instance(v: WeightVector, x, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """P[S >= x] <= Q(x)/(4 Q(sqrt 2)) for one weight vector."""
    _require_unit(v)
    if isinstance(x, str):
        from .surds import parse_real
        x = parse_real(x)
    ev, bits = _bd_evidence(v, x, target, str(v))
    return _report("bd-instance", [ev], target, bits)


def verify_lemma1_on_instance(v: WeightVector, c, x, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """P[|x + Y| <= 1] >= F(c) when sum(v_i^2) <= c (1+|x|)^2, plus the two
    steps of its proof: the symmetry bound and the BD bound for the
    normalized weights."""
    c, x = as_fraction(c), as_fraction(x)
    if c <= 0:
        raise ContractError("c must be positive")
    if abs(x) > 1:
        raise ContractError("|x| must be at most 1")
    _require_unit(v, c * (1 + abs(x)) ** 2)
    prob = prob_abs_shifted_le(v, x, 1)
    label = {"v": str(v), "c": c, "x": x}

    def check(width):
        f = f_of_c(c, width)
        return Evidence(label, _prob_value(prob), f, ">=", compare_ge(_prob_value(prob), f))

    main, bits = _retry(check, target)
    evidence = [main]

    ax = abs(x)
    # P[Y > 1 - |x|] <= P[Y > 0] <= 1/2 (Y symmetric); strict events via complements
    right = prob_between(v, None, 1 - ax)
    positive = prob_between(v, None, 0)
    p_right = 1 - right.upper
    p_pos = 1 - positive.upper
    ok = right.exact is not None and positive.exact is not None and p_right <= p_pos <= Fraction(1, 2)
    evidence.append(Evidence({**label, "step": "symmetry"}, p_right, Fraction(1, 2), "<=",
                             Verdict.VERIFIED if ok else Verdict.UNDECIDED))
    w = normalize_for_bd(v, c, x)
    bd_ev, bd_bits = _bd_evidence(w, RootSum.sqrt_of(1 / c), target, "normalized")
    bd_ev.input = {**label, "step": "bd-normalized"}
    evidence.append(bd_ev)
    return _report("lemma1-instance", evidence, target, max(bits, bd_bits))


def verify_main_conclusion(v: WeightVector, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """P[|S| <= 1] > 0.427685 on one instance."""
    _require_unit(v)
    prob = prob_abs_shifted_le(v, 0, 1)
    value = _prob_value(prob)
    ev = Evidence({"v": str(v)}, value, MAIN_CONSTANT, ">", compare_gt(value, MAIN_CONSTANT))
    return _report("main-instance", [ev], target, get_precision())


# ---------------------------------------------------------------------------
# the weighted-average lemma
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaTwoInstance:
    K: int

    def __post_init__(self):
        if self.K < 2:
            raise ContractError("K must be at least 2")

    @property
    def c1(self) -> Fraction:
        K = self.K
        return Fraction((K + 1) ** 2 - K, (2 * K + 1) ** 2)

    @property
    def c2(self) -> Fraction:
        K = self.K
        return Fraction((K + 1) ** 2 - (K + 2), (2 * K + 1) ** 2)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 2 ** (self.K - 1))

    @property
    def xi(self) -> Fraction:
        return Fraction(1, (2 * self.K + 1) ** 2)

    def identities_hold(self) -> bool:
        xi = self.xi
        return (
            self.c1 == QUARTER + Fraction(3, 4) * xi
            and self.c2 == QUARTER - Fraction(5, 4) * xi
            and self.c1 > QUARTER > self.c2 > 0
        )


def verify_lemma2_finite(K_max: int = DEFAULT_KMAX, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """w F(c1) + (1 - w) F(c2) >= F(1/4) for K = 2..K_max."""
    if K_max < 2:
        raise ContractError("K_max must be at least 2")
    evidence, notes, bits = [], [], BASE_PRECISION
    for K in range(2, K_max + 1):
        inst = LemmaTwoInstance(K)
        if not inst.identities_hold():
            evidence.append(Evidence({"K": K, "identity": "c1, c2"}, inst.c1, inst.c2, "==",
                                     Verdict.REFUTED))
            continue

        def check(width, inst=inst):
            lhs = inst.weight * f_of_c(inst.c1, width) + (1 - inst.weight) * f_of_c(inst.c2, width)
            rhs = f_of_c(QUARTER, width)
            return Evidence({"K": inst.K, "c1": inst.c1, "c2": inst.c2}, lhs, rhs, ">=",
                            compare_ge(lhs, rhs))

        ev, used = _retry(check, target)
        bits = max(bits, used)
        evidence.append(ev)
        if ev.verdict is Verdict.UNDECIDED:
            notes.append(f"undecided at K = {K}")
    return _report("lemma2-finite", evidence, target, bits, notes)


def verify_xi_inequality(xi, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """F(1/4 + 3/4 xi)/2 + F(1/4 - 5/4 xi)/2 >= F(1/4)."""
    xi = as_fraction(xi)
    if xi < 0 or QUARTER - Fraction(5, 4) * xi <= 0:
        raise ContractError("need xi >= 0 and 1/4 - 5/4 xi > 0")
    c_plus = QUARTER + Fraction(3, 4) * xi
    c_minus = QUARTER - Fraction(5, 4) * xi

    if c_plus == c_minus == QUARTER:
        # both sides are the same expression F(1/4); the enclosure is shown, not compared
        f = f_of_c(QUARTER, max(as_fraction(target), Fraction(1, 10**12)))
        ev = Evidence({"xi": xi, "comparison": "structural"}, f, f, "==", Verdict.VERIFIED)
        return _report("xi-inequality", [ev], target, get_precision())

    def check(width):
        lhs = (f_of_c(c_plus, width) + f_of_c(c_minus, width)) / 2
        rhs = f_of_c(QUARTER, width)
        return Evidence({"xi": xi}, lhs, rhs, ">=", compare_ge(lhs, rhs))

    ev, bits = _retry(check, target)
    return _report("xi-inequality", [ev], target, bits)


def xi_grid(points: int = 112, step=Fraction(1, 1000)) -> list[Fraction]:
    return [k * step for k in range(points)]


def verify_xi_grid(xis: Sequence | None = None, target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    xis = xi_grid() if xis is None else [as_fraction(x) for x in xis]
    reports = [verify_xi_inequality(xi, target) for xi in xis]
    return _report("xi-grid", [r.evidence[0] for r in reports], target, max(r.bits for r in reports))


def verify_f_midpoint_concavity(points: Sequence | None = None, slack=Fraction(1, 10**12),
                                target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """F(m).lo >= (F(a).hi + F(b).hi)/2 - slack for grid triples a < m < b, m = (a+b)/2."""
    if points is None:
        points = [Fraction(k, 100) for k in range(1, 29)]
    points = sorted(as_fraction(p) for p in points)
    if points[0] <= 0 or points[-1] > QUARTER + Fraction(3, 100):
        raise ContractError("concavity grid must lie in (0, 0.28]")
    values = {p: f_of_c(p, target) for p in points}
    evidence = []
    for i, a in enumerate(points):
        for b in points[i + 2:]:
            m = (a + b) / 2
            if m not in values:
                continue
            chord = (values[a] + values[b]) / 2 - slack
            fm = values[m]
            verdict = Verdict.VERIFIED if fm.lo >= chord.hi else Verdict.UNDECIDED
            evidence.append(Evidence({"a": a, "m": m, "b": b}, fm, chord, ">=", verdict))
    return _report("f-midpoint-concavity", evidence, target, get_precision())


# -- convexity of Q(x^(-1/2)) ----------------------------------------------

def convexity_expression(cell: Interval) -> Interval:
    """-1/4 Q'(x^(-1/2)) x^(-7/2) (1 - 3x) over the cell intersected with (0, 1/3]."""
    t = 1 / cell.sqrt()
    x_pow = 1 / ((cell ** 3) * cell.sqrt())
    factor = 1 - 3 * cell
    if cell.hi >= CONCAVITY_EDGE:
        factor = factor.clamp(lo=0)
    return -(q_prime(t) * x_pow * factor) / 4


def chain_rule_expression(cell: Interval) -> Interval:
    """Q''(x^(-1/2)) (x^(-3/2)/2)^2 + Q'(x^(-1/2)) (3/4) x^(-5/2)."""
    root = cell.sqrt()
    t = 1 / root
    x32 = cell * root
    x52 = cell * x32
    return q_second(t) * (1 / (2 * x32)).square() + q_prime(t) * (Fraction(3, 4) / x52)


def convexity_grid(cells: int = 256, eps=CONVEXITY_EPS, edge_gap=Fraction(1, 10**6)) -> list[Interval]:
    """Geometric cells covering [eps, 1/3] with a thin boundary cell at 1/3."""
    eps = as_fraction(eps)
    with working_precision(BASE_PRECISION):
        start = Interval.from_rational(eps).lo
        end = Interval.from_rational(CONCAVITY_EDGE).hi
        inner_end = Interval.from_rational(CONCAVITY_EDGE - edge_gap).lo
    ratio = (float(inner_end) / float(start)) ** (1 / cells)
    points = [start]
    for i in range(1, cells):
        p = Interval.from_rational(Fraction(float(start) * ratio ** i)).lo
        if p > points[-1]:
            points.append(p)
    points.append(inner_end)
    points.append(end)
    return [Interval(a, b) for a, b in zip(points, points[1:])]


def _check_cover(grid: Sequence[Interval], eps: Fraction):
    if not grid:
        raise ContractError("empty convexity grid")
    cells = sorted(grid, key=lambda c: c.lo)
    if not cells[0].lo > 0 or not cells[0].lo <= eps:
        raise ContractError("grid must start in (0, eps]")
    for a, b in zip(cells, cells[1:]):
        if b.lo > a.hi:
            raise ContractError(f"gap in convexity grid between {a} and {b}")
        if b.lo > CONCAVITY_EDGE:
            raise ContractError(f"cell {b} lies outside (0, 1/3]")
    if not cells[-1].hi >= CONCAVITY_EDGE:
        raise ContractError("grid must reach 1/3")
    return cells


def verify_convexity_q_invsqrt(grid: Sequence[Interval] | None = None, eps=CONVEXITY_EPS,
                               target=DEFAULT_TARGET_WIDTH) -> VerificationReport:
    """Second derivative of Q(x^(-1/2)) is positive on (eps, 1/3) and
    nonnegative on the cell touching 1/3."""
    eps = as_fraction(eps)
    cells = _check_cover(convexity_grid(eps=eps) if grid is None else list(grid), eps)
    evidence, bits = [], BASE_PRECISION
    for cell in cells:
        boundary = cell.hi >= CONCAVITY_EDGE

        def check(width, cell=cell, boundary=boundary):
            value = convexity_expression(cell)
            if boundary:
                verdict = Verdict.VERIFIED if value.lo >= 0 else Verdict.UNDECIDED
                relation = ">="
            else:
                verdict = compare_gt(value, 0)
                relation = ">"
            return Evidence({"cell": cell, "boundary": boundary}, value, Fraction(0), relation,
                            verdict)

        ev, used = _retry(check, target)
        bits = max(bits, used)
        evidence.append(ev)

    # the factored form must agree with the chain-rule form it came from
    samples = [Fraction(1, 1000), Fraction(1, 100), Fraction(1, 10), Fraction(1, 4),
               Fraction(7, 25), Fraction(3, 10)]
    for s in samples:
        point = Interval.point(s)
        factored, chained = convexity_expression(point), chain_rule_expression(point)
        evidence.append(Evidence({"x": s, "check": "chain rule"}, factored, chained, "overlaps",
                                 Verdict.VERIFIED if factored.overlaps(chained) else Verdict.REFUTED))
        ode = q_second_derivative_identity_check(1 / point.sqrt())
        evidence.append(Evidence({"x": s, "check": "Q'' = -t Q'"}, Fraction(0), Fraction(0), "==",
                                 ode))
    return _report("convexity", evidence, target, bits)


def verify_lemma2_all_k(K_max: int = DEFAULT_KMAX, target=DEFAULT_TARGET_WIDTH,
                        finite: VerificationReport | None = None,
                        convexity: VerificationReport | None = None) -> VerificationReport:
    """Lemma 2 for every K >= 2: finite checks up to K_max plus the
    reduction to the xi-inequality on [0, 1/25] via concavity of F."""
    finite = finite or verify_lemma2_finite(K_max, target)
    convexity = convexity or verify_convexity_q_invsqrt(target=target)
    endpoints = _report(
        "xi-endpoints",
        [verify_xi_inequality(Fraction(0), target).evidence[0],
         verify_xi_inequality(XI_LIMIT, target).evidence[0]],
        target, BASE_PRECISION,
    )
    facts = []

    def fact(name, ok):
        facts.append(Evidence({"fact": name}, Fraction(int(ok)), Fraction(1), "==",
                              Verdict.VERIFIED if ok else Verdict.REFUTED))

    # xi_K = 1/(2K+1)^2 is decreasing in K, so xi_K <= xi_2 = 1/25 for all K >= 2
    fact("xi_2 == 1/25", LemmaTwoInstance(2).xi == XI_LIMIT)
    # c1 - c2 = 2 xi > 0 and the weight 1/2^(K-1) <= 1/2 for K >= 2
    fact("c1 >= c2 and weight <= 1/2 at K = 2", LemmaTwoInstance(2).c1 >= LemmaTwoInstance(2).c2
         and LemmaTwoInstance(2).weight <= Fraction(1, 2))
    # affine images of [0, 1/25] stay inside the concavity region (0, 1/3]
    top = QUARTER + Fraction(3, 4) * XI_LIMIT
    bottom = QUARTER - Fraction(5, 4) * XI_LIMIT
    fact("1/4 + 3/4 * 1/25 <= 1/3", top <= CONCAVITY_EDGE)
    fact("1/4 - 5/4 * 1/25 > 0", bottom > 0)
    fact("convexity grid reaches below 1/4 - 5/4 * 1/25", CONVEXITY_EPS < bottom)
    reduction = _report("lemma2-reduction", facts, target, BASE_PRECISION)
    return _report("lemma2-all-k", [], target,
                   max(finite.bits, convexity.bits),
                   notes=[f"finite checks K = 2..{K_max}; larger K covered by concavity on [0, 1/25]"],
                   components=[finite, endpoints, convexity, reduction])


# ---------------------------------------------------------------------------
# randomized instance suites
# ---------------------------------------------------------------------------

def random_unit_vector(rng: random.Random, n: int, height: int = 12) -> list[Fraction]:
    """Rational point on the unit sphere (inverse stereographic projection)."""
    if n == 0:
        return []
    if n == 1:
        return [Fraction(rng.choice((-1, 1)))]
    t = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n - 1)]
    norm2 = sum(x * x for x in t)
    v = [2 * x / (norm2 + 1) for x in t] + [(norm2 - 1) / (norm2 + 1)]
    rng.shuffle(v)
    return v


def random_ball_vector(rng: random.Random, n: int, height: int = 20) -> list[Fraction]:
    """Rational vector with sum of squares <= 1."""
    if rng.random() < 0.5:
        return random_unit_vector(rng, n)
    from .search import shrink_into_ball
    v = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n)]
    return shrink_into_ball(v)


NAMED_INSTANCES = {
    "(1)": WeightVector([Fraction(1)]),
    "(1/sqrt2, 1/sqrt2)": WeightVector(["sqrt(1/2)"] * 2),
    "(1/sqrt3, 1/sqrt3, 1/sqrt3)": WeightVector(["sqrt(1/3)"] * 3),
    "(1/2, 1/2, 1/2, 1/2)": WeightVector([Fraction(1, 2)] * 4),
    "(3/5, 4/5)": WeightVector([Fraction(3, 5), Fraction(4, 5)]),
}


def main_instance_suite(count: int = 500, seed: int = DEFAULT_SEED, max_n: int = 14,
                        target=DEFAULT_TARGET_WIDTH, workers=None) -> VerificationReport:
    rng = random.Random(seed)
    vectors = list(NAMED_INSTANCES.values())
    vectors += [WeightVector(random_ball_vector(rng, rng.randint(1, max_n))) for _ in range(count)]
    reports = run_batch(lambda v: verify_main_conclusion(v, target), vectors, workers)
    return _report("main-instances", [r.evidence[0] for r in reports], target, BASE_PRECISION)


def bd_stress(count: int = 500, seed: int = DEFAULT_SEED + 1, max_n: int = 14,
              target=DEFAULT_TARGET_WIDTH, workers=None) -> VerificationReport:
    """BD bound at x drawn from atoms of S and midpoints between atoms."""
    rng = random.Random(seed)
    cases = []
    for i in range(count):
        v = WeightVector(random_ball_vector(rng, rng.randint(1, max_n)))
        atoms = [a for a, _ in enumerate_distribution(v).atoms]
        j = rng.randrange(len(atoms))
        if rng.random() < 0.5 or j + 1 == len(atoms):
            x = atoms[j]
        else:
            x = (atoms[j] + atoms[j + 1]) / 2
        cases.append((v, x))
    results = run_batch(lambda case: _bd_evidence(case[0], case[1], target, str(case[0])),
                        cases, workers)
    return _report("bd-stress", [ev for ev, _ in results], target,
                   max(bits for _, bits in results))


def random_lemma1_instance(rng: random.Random, max_n: int = 14):
    n = rng.randint(1, max_n)
    q = rng.randint(1, 40)
    c = Fraction(rng.randint(1, q), q)
    x = Fraction(rng.randint(-q, q), q)
    u = random_unit_vector(rng, n)
    scale = RootSum.sqrt_of(c) * (1 + abs(x))
    return WeightVector([scale * ui for ui in u]), c, x


def lemma1_stress(count: int = 500, seed: int = DEFAULT_SEED + 2, max_n: int = 14,
                  target=DEFAULT_TARGET_WIDTH, workers=None) -> VerificationReport:
    rng = random.Random(seed)
    cases = [random_lemma1_instance(rng, max_n) for _ in range(count)]
    reports = run_batch(lambda case: verify_lemma1_on_instance(*case, target=target), cases, workers)
    evidence = [e for r in reports for e in r.evidence]
    return _report("lemma1-stress", evidence, target, max(r.bits for r in reports))


def full_battery(target=DEFAULT_TARGET_WIDTH, seed: int = DEFAULT_SEED, workers=None,
                 stress_count: int = 500) -> VerificationReport:
    """Every check, consolidated; verified only if every component is."""
    main_constant = verify_main_constant(target)
    finite = verify_lemma2_finite(DEFAULT_KMAX, target)
    convexity = verify_convexity_q_invsqrt(target=target)
    lemma2 = verify_lemma2_all_k(DEFAULT_KMAX, target, finite, convexity)
    # f-properties refers to the Lemma 2 result listed separately below
    lemma2_ref = VerificationReport(lemma2.claim, lemma2.verdict, [], lemma2.precision, lemma2.bits,
                                    ["full evidence in the lemma2-all-k component"])
    components = [
        main_constant,
        verify_f_properties(F_PROPERTY_GRID, target, lemma2_ref),
        finite,
        verify_xi_grid(None, target),
        convexity,
        lemma2,
        bd_stress(stress_count, seed + 1, target=target, workers=workers),
        lemma1_stress(stress_count, seed + 2, target=target, workers=workers),
        main_instance_suite(stress_count, seed, target=target, workers=workers),
    ]
    return _report("report", [], target, max(c.bits for c in components), components=components)

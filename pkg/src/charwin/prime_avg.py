"""Averages over primes in short intervals: character variances and
moment deviations with their exceptional sets.

Two experiment families live here.  The first averages |sum a_n (n|q)|^2
over primes q in [Q, Q+delta] and compares against the random-multiplicative
model bound.  The second measures, prime by prime, how far the empirical
window-sum moments sit from their Gaussian targets, flags primes whose
deviation exceeds g^(-1/8) (a Chebyshev-style exceptional set), and reports
the exceptional fractions.
"""

from __future__ import annotations

import math
import random
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import ExperimentWarning, PrimeModulus, _as_modulus, jacobi, primes_in_interval
from .rmf import _coeffs, rmf_variance_rhs
from .squares import paired_count_exact
from .windows import WindowConfig, power_sum, value_histogram, window_series


@dataclass(frozen=True)
class IntervalSpec:
    """Prime interval [q_start, q_start + delta]; eta_nominal is the exponent
    the length is standing in for (delta ~ q_start**eta)."""

    q_start: int
    delta: int
    eta_nominal: float | None = None

    def __post_init__(self) -> None:
        if self.q_start < 3:
            raise ValueError(f"interval must start at >= 3, got {self.q_start}")
        if self.delta < 1:
            raise ValueError(f"need delta >= 1, got {self.delta}")
        if self.eta_nominal is not None and not 0.0 < self.eta_nominal <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta_nominal}")

    @property
    def eta(self) -> float:
        if self.eta_nominal is not None:
            return self.eta_nominal
        return math.log(self.delta) / math.log(self.q_start)


def interval_primes(spec: IntervalSpec) -> list[int]:
    primes = [p for p in primes_in_interval(spec.q_start, spec.q_start + spec.delta) if p % 2]
    if len(primes) < 50:
        warnings.warn(
            f"only {len(primes)} primes in [{spec.q_start}, {spec.q_start + spec.delta}]; "
            "averages will be statistically weak",
            ExperimentWarning,
            stacklevel=2,
        )
    return primes


def avg_character_variance(spec: IntervalSpec, a, primes: list[int] | None = None) -> float:
    """(log Q / delta) * sum over primes q in the interval of |sum_n a_n (n|q)|^2."""
    return _battery_lhs(spec, [_coeffs(a)], primes)[0]


def _battery_lhs(spec: IntervalSpec, vectors: list[tuple], primes: list[int] | None) -> list[float]:
    if primes is None:
        primes = interval_primes(spec)
    supports = [[(n, c) for n, c in enumerate(vec, 1) if c != 0] for vec in vectors]
    for vec in vectors:
        if len(vec) > spec.delta:
            warnings.warn(
                f"coefficient length {len(vec)} exceeds interval length {spec.delta}",
                ExperimentWarning,
                stacklevel=3,
            )
    union = sorted({n for sup in supports for n, _ in sup})
    per_vector = [[] for _ in vectors]
    for q in primes:
        chi = {n: jacobi(n, q) for n in union}
        for i, sup in enumerate(supports):
            inner = sum(c * chi[n] for n, c in sup)
            per_vector[i].append(abs(inner) ** 2)
    scale = math.log(spec.q_start) / spec.delta
    return [scale * math.fsum(terms) for terms in per_vector]


def variance_ratio(spec: IntervalSpec, a, primes: list[int] | None = None) -> dict:
    """Prime-average variance over the random-multiplicative-model bound."""
    return variance_ratio_battery(spec, [a], primes)[0]


def variance_ratio_battery(spec: IntervalSpec, vectors, primes: list[int] | None = None) -> list[dict]:
    """variance_ratio for many coefficient vectors, sharing the prime sweep."""
    coeff_vecs = [_coeffs(a) for a in vectors]
    if primes is None:
        primes = interval_primes(spec)
    lhs_values = _battery_lhs(spec, coeff_vecs, primes)
    out = []
    for vec, lhs in zip(coeff_vecs, lhs_values):
        if all(c == 0 for c in vec):
            out.append({"lhs": 0.0, "rhs": 0.0, "ratio": 0.0})
            continue
        rhs = rmf_variance_rhs(vec, spec.delta)
        out.append({"lhs": lhs, "rhs": rhs, "ratio": lhs / rhs})
    return out


def random_sparse_vectors(count: int, length: int, seed: int, support: int = 8) -> list[tuple[float, ...]]:
    """Seeded battery of sparse +-1 coefficient vectors of a fixed length.

    Each vector places `support` nonzero entries (signs +-1) at distinct
    positions, at least one of them always nonzero so the trivial all-zero
    vector never enters a ratio battery.
    """
    if count < 1 or length < 1 or not 1 <= support <= length:
        raise ValueError("need count >= 1 and 1 <= support <= length")
    rng = random.Random(seed)
    battery = []
    for _ in range(count):
        positions = rng.sample(range(length), support)
        vec = [0.0] * length
        for pos in positions:
            vec[pos] = rng.choice((-1.0, 1.0))
        battery.append(tuple(vec))
    return battery


@dataclass(frozen=True)
class DeviationRecord:
    """One prime's distance from the Gaussian moment target at order r."""

    q: int
    r: int
    parity: str
    deviation: float
    threshold: float
    exceptional: bool


def _records_for_series(series, r_max: int, threshold_g: float, threshold_scale: float) -> list[DeviationRecord]:
    h, g, q = series.h, int(series.sums.size), series.q
    counts = value_histogram(series)
    threshold = threshold_scale * threshold_g ** (-1.0 / 8.0)
    records = []
    for r in range(1, min(r_max, h) + 1):
        k_exact = paired_count_exact(r, h)
        even_dev = float(Fraction(power_sum(counts, h, 2 * r) - g * k_exact, g))
        odd_dev = power_sum(counts, h, 2 * r - 1) / g
        for parity, dev in (("even", even_dev), ("odd", odd_dev)):
            records.append(
                DeviationRecord(
                    q=q,
                    r=r,
                    parity=parity,
                    deviation=dev,
                    threshold=threshold,
                    exceptional=abs(dev) >= threshold,
                )
            )
    return records


def moment_deviation(
    q: int | PrimeModulus,
    g: int,
    h: int,
    r: int,
    even: bool = True,
    m_start: int = 1,
    threshold_g: float | None = None,
    threshold_scale: float = 1.0,
) -> DeviationRecord:
    """Empirical moment sum minus its exact pairing-count target.

    Even mode: (1/g) * sum_m S(m)^(2r) - K(r, h), where K(r, h) is the exact
    fully-paired tuple count (equal to mu_2r * (h - theta*r)^r by definition
    of theta); computed as an exact rational before the float conversion.
    Odd mode: (1/g) * sum_m S(m)^(2r-1), whose target is zero.  The record
    is exceptional when |deviation| >= threshold_scale * g^(-1/8).
    """
    q = _as_modulus(q)
    if not 1 <= r <= h:
        raise ValueError(f"need 1 <= r <= h, got r={r}, h={h}")
    series = window_series(q, WindowConfig(h=h, g=g, m_start=m_start))
    recs = _records_for_series(series, r, float(g) if threshold_g is None else threshold_g, threshold_scale)
    parity = "even" if even else "odd"
    return next(rec for rec in recs if rec.r == r and rec.parity == parity)


@dataclass
class ExceptionalReport:
    """All deviation records over a prime interval plus exceptional fractions.

    A prime counts as exceptional for a parity if any order r <= r_max trips
    the threshold there; fraction_union merges both parities.
    mean_sq_deviation averages the raw deviation squared per (r, parity);
    the normalized variant first divides each deviation by h**(j/2) (j the
    moment order), putting it on the scale of the moments of S/sqrt(h).
    """

    records: list[DeviationRecord]
    prime_count: int
    fraction_even: float
    fraction_odd: float
    fraction_union: float
    mean_sq_deviation: dict[str, float]
    mean_sq_deviation_normalized: dict[str, float]
    warnings: list[str] = field(default_factory=list)


def _series_args(q: int, g_inner: int, h_q: int, g_thresh: float, r_max: int, scale: float, m_start: int):
    return (q, g_inner, h_q, g_thresh, r_max, scale, m_start)


def _worker_records(args) -> list[tuple]:
    q, g_inner, h_q, g_thresh, r_max, scale, m_start = args
    series = window_series(q, WindowConfig(h=h_q, g=g_inner, m_start=m_start))
    return [
        (rec.q, rec.r, rec.parity, rec.deviation, rec.threshold, rec.exceptional, h_q)
        for rec in _records_for_series(series, r_max, g_thresh, scale)
    ]


def exceptional_sets(
    spec: IntervalSpec,
    g_schedule,
    h_schedule,
    r_max: int,
    mode: str = "relaxed",
    per_prime_inner: bool = False,
    threshold_scale: float = 1.0,
    m_start: int = 1,
    workers: int = 1,
    primes: list[int] | None = None,
) -> ExceptionalReport:
    """Deviation records for every prime in the interval, r = 1..r_max.

    The inner moment average runs over m <= g(q_start) by default (the
    interval-wide sample count); per_prime_inner=True uses g(q) instead.
    Thresholds always use the per-prime g(q).  Strict mode enforces the
    narrow-window hypothesis h <= g(q)^(1/(2500 r^2)) and fails loudly;
    relaxed mode accepts any h <= g(q)^(1/4) and warns beyond that.
    """
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"mode must be 'strict' or 'relaxed', got {mode!r}")
    if r_max < 1:
        raise ValueError(f"need r_max >= 1, got {r_max}")
    if primes is None:
        primes = interval_primes(spec)
    if not primes:
        raise ValueError(f"no odd primes in [{spec.q_start}, {spec.q_start + spec.delta}]")
    notes: list[str] = []
    g_at_start = float(g_schedule(spec.q_start))
    work = []
    warned_wide = False
    for q in primes:
        g_q = float(g_schedule(q))
        h_q = int(math.floor(h_schedule(q)))
        if h_q < 1 or h_q >= q:
            raise ValueError(f"window length {h_q} invalid for q={q}")
        if mode == "strict":
            for r in range(1, r_max + 1):
                cap = g_q ** (1.0 / (2500.0 * r * r))
                if not r <= h_q <= cap:
                    raise ValueError(
                        f"strict mode needs r <= h <= g^(1/(2500 r^2)); "
                        f"q={q}, r={r}, h={h_q}, cap={cap:.4f}"
                    )
        elif h_q > g_q ** 0.25 and not warned_wide:
            notes.append(
                f"relaxed mode: window h={h_q} exceeds g^(1/4)={g_q ** 0.25:.2f} at q={q}"
            )
            warned_wide = True
        if r_max > h_q:
            notes.append(f"orders r > h={h_q} skipped at q={q}")
        g_inner = int(math.floor(g_q if per_prime_inner else g_at_start))
        work.append(_series_args(q, max(g_inner, 1), h_q, g_q, r_max, threshold_scale, m_start))

    if workers > 1:
        chunk = max(1, len(work) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = [rec for batch in pool.map(_worker_records, work, chunksize=chunk) for rec in batch]
    else:
        raw = [rec for args in work for rec in _worker_records(args)]
    records = [DeviationRecord(*rec[:6]) for rec in raw]

    exceptional_primes = {"even": set(), "odd": set()}
    sq_sums: dict[str, list[float]] = {}
    sq_sums_norm: dict[str, list[float]] = {}
    for rec, raw_rec in zip(records, raw):
        if rec.exceptional:
            exceptional_primes[rec.parity].add(rec.q)
        key = f"r{rec.r}_{rec.parity}"
        h_q = raw_rec[6]
        order = 2 * rec.r if rec.parity == "even" else 2 * rec.r - 1
        sq_sums.setdefault(key, []).append(rec.deviation**2)
        sq_sums_norm.setdefault(key, []).append((rec.deviation / h_q ** (order / 2)) ** 2)
    n = len(primes)
    union = exceptional_primes["even"] | exceptional_primes["odd"]
    return ExceptionalReport(
        records=records,
        prime_count=n,
        fraction_even=len(exceptional_primes["even"]) / n,
        fraction_odd=len(exceptional_primes["odd"]) / n,
        fraction_union=len(union) / n,
        mean_sq_deviation={k: math.fsum(v) / len(v) for k, v in sorted(sq_sums.items())},
        mean_sq_deviation_normalized={k: math.fsum(v) / len(v) for k, v in sorted(sq_sums_norm.items())},
        warnings=notes,
    )


@dataclass(frozen=True)
class GrowthSchedule:
    """Sample-count schedule q -> g(q): how many window starts at modulus q.

    Kinds: log_power ((log q)^a), small_power (q^eps), const, and table
    (step function through sorted (q, value) pairs).  Decreasing schedules
    are rejected at construction.
    """

    kind: str
    params: tuple

    def __post_init__(self) -> None:
        kind, params = self.kind, self.params
        if kind == "log_power":
            if len(params) != 1 or params[0] <= 0:
                raise ValueError(f"log_power needs one positive exponent, got {params}")
        elif kind == "small_power":
            if len(params) != 1 or not 0 < params[0] <= 1:
                raise ValueError(f"small_power needs an exponent in (0, 1], got {params}")
        elif kind == "const":
            if len(params) != 1 or params[0] < 1:
                raise ValueError(f"const needs one value >= 1, got {params}")
        elif kind == "table":
            pts = tuple(params)
            if len(pts) < 1:
                raise ValueError("table schedule needs at least one (q, value) pair")
            qs = [p[0] for p in pts]
            vs = [p[1] for p in pts]
            if qs != sorted(qs) or len(set(qs)) != len(qs):
                raise ValueError("table abscissae must be strictly increasing")
            if any(b < a for a, b in zip(vs, vs[1:])) or min(vs) < 1:
                raise ValueError("table schedule must be non-decreasing and >= 1")
            object.__setattr__(self, "params", pts)
        else:
            raise ValueError(f"unknown schedule kind {kind!r}")

    def __call__(self, q: int) -> float:
        if q < 3:
            raise ValueError(f"schedules are defined for q >= 3, got {q}")
        if self.kind == "log_power":
            return math.log(q) ** self.params[0]
        if self.kind == "small_power":
            return float(q) ** self.params[0]
        if self.kind == "const":
            return float(self.params[0])
        value = self.params[0][1]
        for point, v in self.params:
            if point <= q:
                value = v
            else:
                break
        return float(value)


def growth_schedule(kind: str, *params) -> GrowthSchedule:
    return GrowthSchedule(kind=kind, params=tuple(params))


def derivative_check(schedule, q_start: int, delta: int, c: float = 1.0, samples: int = 64) -> dict:
    """Discrete slope check: |g(q2) - g(q1)| <= c * g(Q)^0.99 * Q^-0.01 * (q2 - q1).

    Sampled on an even grid across the interval; max_ratio > 1 means the
    schedule grows too fast for the slowly-varying hypothesis.
    """
    if delta < 1 or samples < 1:
        raise ValueError("need delta >= 1 and samples >= 1")
    allowed_slope = c * float(schedule(q_start)) ** 0.99 * q_start ** (-0.01)
    grid = sorted({q_start + round(i * delta / samples) for i in range(samples + 1)})
    max_ratio = 0.0
    for q1, q2 in zip(grid, grid[1:]):
        slope = abs(float(schedule(q2)) - float(schedule(q1))) / (q2 - q1)
        max_ratio = max(max_ratio, slope / allowed_slope)
    return {"ok": max_ratio <= 1.0, "max_ratio": max_ratio, "allowed_slope": allowed_slope}

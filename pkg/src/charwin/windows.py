"""Sliding-window sums of the quadratic character mod q and their statistics.

The central object is S(m) = sum of (n|q) over the window m < n <= m+h, for
g consecutive starting points m.  Empirical moments of S/sqrt(h) and the
empirical CDF are compared against the standard Gaussian.  Window values are
integers in [-h, h], so all moment accumulation is exact integer arithmetic
over a value histogram; floats only appear in the final division.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .arith import ExperimentWarning, PrimeModulus, _as_modulus, jacobi

# Full-period character tables are dense int8 arrays of length q; cap their
# size so bulk paths never allocate more than ~128 MB.
CHI_TABLE_MAX = 1 << 27
_CHUNK = 1 << 22


@functools.lru_cache(maxsize=4)
def chi_table(q: int) -> np.ndarray:
    """Legendre symbols (r|q) for one full period r = 0..q-1 as int8.

    Built by marking the (q-1)/2 nonzero squares mod q, an independent
    route from the binary-reciprocity jacobi(); tests pin the two together.
    """
    q = _as_modulus(q)
    if q > CHI_TABLE_MAX:
        raise ValueError(f"character table for q={q} exceeds memory budget")
    t = np.full(q, -1, dtype=np.int8)
    t[0] = 0
    half = (q + 1) // 2
    for lo in range(1, half, _CHUNK):
        x = np.arange(lo, min(lo + _CHUNK, half), dtype=np.int64)
        t[(x * x) % q] = 1
    t.setflags(write=False)
    return t


def _chi_range(q: int, n_lo: int, n_hi: int, method: str = "auto") -> np.ndarray:
    """Symbols (n|q) for n = n_lo..n_hi inclusive, as an int8/int64 array."""
    count = n_hi - n_lo + 1
    use_table = method == "table" or (method == "auto" and q <= CHI_TABLE_MAX)
    if not use_table:
        return np.fromiter((jacobi(n, q) for n in range(n_lo, n_hi + 1)), np.int64, count)
    t = chi_table(q)
    lo, hi = n_lo % q, n_lo % q + count - 1
    if hi < q:
        return t[lo : hi + 1]
    idx = np.arange(lo, hi + 1, dtype=np.int64) % q
    return t[idx]


def window_sum(q: int | PrimeModulus, x: int, h: int) -> int:
    """S = sum of (n|q) over the window x < n <= x+h.  Reference evaluator.

    h = q (one complete period, which sums to zero) is allowed as a sanity
    case; anything longer is rejected.
    """
    q = _as_modulus(q)
    if x < 0:
        raise ValueError(f"window start must be >= 0, got {x}")
    if not 1 <= h <= q:
        raise ValueError(f"window length must satisfy 1 <= h <= q, got h={h}, q={q}")
    return sum(jacobi(n, q) for n in range(x + 1, x + h + 1))


@dataclass(frozen=True)
class WindowConfig:
    """h = window length, g = number of starting points m_start..m_start+g-1."""

    h: int
    g: int
    m_start: int = 1

    def __post_init__(self) -> None:
        if self.h < 1:
            raise ValueError(f"window length must be >= 1, got {self.h}")
        if self.g < 1:
            raise ValueError(f"need at least one starting point, got g={self.g}")
        if self.m_start not in (0, 1):
            raise ValueError(f"starting-point convention must be 0 or 1, got {self.m_start}")


@dataclass
class WindowSeries:
    """All g window sums for one modulus, as exact int64 values."""

    q: int
    config: WindowConfig
    sums: np.ndarray = field(repr=False)

    @property
    def h(self) -> int:
        return self.config.h

    @property
    def g(self) -> int:
        return self.config.g


def window_series(q: int | PrimeModulus, config: WindowConfig, method: str = "auto") -> WindowSeries:
    """Window sums S(m) for m = m_start .. m_start+g-1.

    Evaluates each symbol once over the span (g + h + O(1) evaluations) and
    slides via prefix sums, which telescopes to the incremental update
    S(m+1) = S(m) - chi(m+1) + chi(m+1+h).  method="direct" forces per-n
    jacobi evaluation; "table" forces the full-period table.
    """
    q = _as_modulus(q)
    h, g, m0 = config.h, config.g, config.m_start
    if h >= q:
        raise ValueError(f"window length h={h} must be < q={q}")
    if g + h >= q:
        warnings.warn(
            f"window span g+h = {g + h} reaches a full period of q = {q}; "
            "starting points wrap around",
            ExperimentWarning,
            stacklevel=2,
        )
    chi = _chi_range(q, m0 + 1, m0 + g + h - 1, method=method)
    prefix = np.concatenate([np.zeros(1, np.int64), np.cumsum(chi, dtype=np.int64)])
    sums = prefix[h : h + g] - prefix[0:g]
    return WindowSeries(q=q, config=config, sums=sums)


@dataclass
class EmpiricalSummary:
    """Histogram-backed summary of a window series.

    value_counts[v + h] = #{m : S(m) = v}; moments[j] is the j-th empirical
    moment of S/sqrt(h), accumulated exactly over the histogram before one
    final float division.
    """

    h: int
    sample_count: int
    value_counts: tuple[int, ...]
    moments: dict[int, float]
    _cumulative: tuple[int, ...] = field(repr=False, default=None)

    def __post_init__(self) -> None:
        if self._cumulative is None:
            acc, cum = 0, []
            for c in self.value_counts:
                acc += c
                cum.append(acc)
            self._cumulative = tuple(cum)

    def cdf(self, lam: float) -> float:
        """Empirical P(S <= lam * sqrt(h)).

        Window sums sit on an integer lattice, so the threshold is floored;
        values within 1e-9 of the integer above are snapped up to keep exact
        grid points (e.g. lam = 0) stable under float noise.
        """
        x = lam * math.sqrt(self.h)
        t = math.floor(x)
        if x - t > 1 - 1e-9:
            t += 1
        if t < -self.h:
            return 0.0
        if t >= self.h:
            return 1.0
        return self._cumulative[t + self.h] / self.sample_count


def value_histogram(series: WindowSeries) -> list[int]:
    """counts[v + h] = #{m : S(m) = v}; the exact basis for all moment work."""
    if series.sums.size == 0:
        raise ValueError("empty window series")
    h = series.h
    return np.bincount((series.sums + h).astype(np.int64), minlength=2 * h + 1).tolist()


def power_sum(counts: list[int], h: int, j: int) -> int:
    """Exact integer sum of S^j over the series, from its value histogram."""
    return sum(c * (v - h) ** j for v, c in enumerate(counts) if c)


def empirical_summary(series: WindowSeries, max_moment: int = 4) -> EmpiricalSummary:
    """Exact moments and value histogram of a window series."""
    if not 0 <= max_moment <= 12:
        raise ValueError(f"moment order capped at 12, got {max_moment}")
    h = series.h
    g = int(series.sums.size)
    counts = value_histogram(series)
    moments = {j: power_sum(counts, h, j) / (g * h ** (j / 2)) for j in range(max_moment + 1)}
    return EmpiricalSummary(h=h, sample_count=g, value_counts=tuple(counts), moments=moments)


def gaussian_moment(j: int) -> int:
    """j-th moment of the standard Gaussian: (j-1)!! for even j, 0 for odd."""
    if not 0 <= j <= 24:
        raise ValueError(f"gaussian moment order capped at 24, got {j}")
    if j % 2:
        return 0
    return math.factorial(j) // (2 ** (j // 2) * math.factorial(j // 2))


def normal_cdf(x: float) -> float:
    """Standard normal CDF via math.erf (abs error < 1e-15, well under 1e-10)."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def cdf_vs_gaussian(summary: EmpiricalSummary, lambdas, corrected: bool = False) -> dict:
    """Empirical CDF against the Gaussian at each lambda.

    corrected=True compares against Phi(lambda + 1/sqrt(h)), the continuity
    correction for the even integer lattice the window sums live on.
    """
    shift = 1.0 / math.sqrt(summary.h) if corrected else 0.0
    rows = []
    for lam in lambdas:
        emp = summary.cdf(lam)
        ref = normal_cdf(lam + shift)
        rows.append({"lam": float(lam), "empirical": emp, "gaussian": ref, "abs_diff": abs(emp - ref)})
    return {
        "corrected": corrected,
        "rows": rows,
        "max_abs_diff": max(r["abs_diff"] for r in rows) if rows else 0.0,
    }


def polya_vinogradov_check(q: int | PrimeModulus) -> dict:
    """Max |partial sum of the character| over the period vs sqrt(q) log q."""
    q = _as_modulus(q)
    chi = _chi_range(q, 1, q)
    partial = np.cumsum(chi, dtype=np.int64)
    peak = int(np.max(np.abs(partial)))
    bound = math.sqrt(q) * math.log(q)
    return {"q": q, "max_partial_sum": peak, "bound": bound, "ratio": peak / bound}


def incomplete_poly_sum(q: int | PrimeModulus, gamma, x: int, y: int) -> int:
    """Sum over x < n <= x+y of prod_i (n + gamma_i | q).

    Symbols are multiplied term-wise; the polynomial product of the shifted
    arguments is never formed.  Offsets must be distinct mod q.
    """
    q = _as_modulus(q)
    gamma = tuple(int(c) for c in gamma)
    if not gamma:
        raise ValueError("need at least one offset")
    if len({c % q for c in gamma}) != len(gamma):
        raise ValueError(f"offsets must be distinct mod q={q}: {gamma}")
    if not 0 < y <= q:
        raise ValueError(f"need 0 < y <= q, got y={y}")
    if q <= CHI_TABLE_MAX:
        t = chi_table(q)
        total = 0
        for lo in range(x + 1, x + y + 1, _CHUNK):
            n = np.arange(lo, min(lo + _CHUNK, x + y + 1), dtype=np.int64)
            acc = t[(n + gamma[0]) % q]
            for c in gamma[1:]:
                acc = acc * t[(n + c) % q]
            total += int(acc.sum(dtype=np.int64))
        return total
    return sum(
        math.prod(jacobi(n + c, q) for c in gamma) for n in range(x + 1, x + y + 1)
    )


def weil_bound_check(q: int | PrimeModulus, gamma, x: int, y: int) -> dict:
    """Incomplete sum against the 9 * k * sqrt(q) * log(q) bound."""
    q = _as_modulus(q)
    value = incomplete_poly_sum(q, gamma, x, y)
    k = len(tuple(gamma))
    bound = 9.0 * k * math.sqrt(q) * math.log(q)
    return {
        "q": q,
        "k": k,
        "x": x,
        "y": y,
        "value": value,
        "bound": bound,
        "ratio": abs(value) / bound,
        "holds": abs(value) < bound,
    }


def random_weil_instances(trials: int, q_lo: int, q_hi: int, k_max: int, seed: int) -> list[dict]:
    """Seeded random (q, gamma, x, y) instances for the incomplete-sum bound."""
    import random

    from .arith import primes_in_interval

    if trials < 1 or k_max < 1:
        raise ValueError("need trials >= 1 and k_max >= 1")
    pool = [p for p in primes_in_interval(max(3, q_lo), q_hi) if p >= 3]
    if not pool:
        raise ValueError(f"no odd primes in [{q_lo}, {q_hi}]")
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        q = rng.choice(pool)
        k = rng.randint(1, k_max)
        gamma = tuple(sorted(rng.sample(range(q), k)))
        y = rng.randint(1, q)
        x = rng.randrange(0, q)
        out.append({"q": q, "gamma": gamma, "x": x, "y": y})
    return out

"""Random completely multiplicative +-1 functions and their second moments.

The model: independent fair signs f(p) on primes, extended completely
multiplicatively, so f(n) depends only on the squarefree part s(n).  The
exact second moment of sum a_n f(n) is the sum of |group sums|^2 where
coefficients are grouped by s(n); Monte Carlo and full sign enumeration
provide independent estimates of the same quantity.

Prime signs are derived from a keyed 64-bit hash (splitmix64 finalizer with
its published constants), so an ensemble is a pure function of (seed, p):
deterministic, order-independent, and safe to evaluate from any worker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import FactorTable, _factorization, squarefree_part

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _prime_sign(seed: int, p: int) -> int:
    digest = _mix64(_mix64(seed ^ _GOLDEN) ^ (p * _GOLDEN))
    return 1 if digest >> 63 == 0 else -1


@dataclass
class CoefficientVector:
    """Finite coefficient vector a_1..a_n (real or complex entries)."""

    values: tuple

    def __post_init__(self) -> None:
        vals = tuple(complex(v) if isinstance(v, complex) else float(v) for v in self.values)
        if not vals:
            raise ValueError("coefficient vector must be nonempty")
        for v in vals:
            if not math.isfinite(abs(v)):
                raise ValueError(f"coefficients must be finite, got {v}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


def _coeffs(a) -> tuple:
    if isinstance(a, CoefficientVector):
        return a.values
    return CoefficientVector(tuple(a)).values


@dataclass
class RmfEnsemble:
    """One sampled random multiplicative function, lazy in the primes."""

    seed: int
    limit: int
    _table: FactorTable | None = field(default=None, repr=False, compare=False)
    _signs: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise ValueError(f"need limit >= 1, got {self.limit}")

    def sign(self, p: int) -> int:
        s = self._signs.get(p)
        if s is None:
            s = self._signs[p] = _prime_sign(self.seed, p)
        return s

    def value(self, n: int) -> int:
        """f(n) = product of f(p) over primes with odd exponent in n."""
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside ensemble range [1, {self.limit}]")
        v = 1
        for p, e in _factorization(n, self._table):
            if e % 2:
                v *= self.sign(p)
        return v


def rmf_sample(seed: int, limit: int, table: FactorTable | None = None) -> RmfEnsemble:
    """Ensemble whose prime signs are a pure function of (seed, p)."""
    return RmfEnsemble(seed=seed, limit=limit, _table=table)


def exact_second_moment(a, table: FactorTable | None = None) -> float:
    """E |sum_n a_n f(n)|^2 = sum over squarefree s of |sum_{s(n)=s} a_n|^2.

    Terms with the same squarefree part are perfectly correlated (f agrees
    on them); distinct squarefree parts are orthogonal.
    """
    vals = _coeffs(a)
    groups: dict[int, complex] = {}
    for n, coeff in enumerate(vals, start=1):
        s = squarefree_part(n, table)
        groups[s] = groups.get(s, 0) + coeff
    return float(sum(abs(v) ** 2 for v in groups.values()))


def _parity_profiles(n_max: int, table: FactorTable | None) -> list[tuple[int, ...]]:
    """For each n <= n_max, the primes of odd exponent (f(n) = prod of their signs)."""
    return [
        tuple(p for p, e in _factorization(n, table) if e % 2) for n in range(1, n_max + 1)
    ]


def enumerate_second_moment(a, table: FactorTable | None = None) -> float:
    """E |sum a_n f(n)|^2 by exhausting all sign patterns.  Test oracle.

    Enumerates all 2^k assignments of the k primes <= n; exponential, so
    guarded to k <= 20.
    """
    vals = _coeffs(a)
    profiles = _parity_profiles(len(vals), table)
    primes = sorted({p for prof in profiles for p in prof})
    if len(primes) > 20:
        raise ValueError(f"enumeration over {len(primes)} primes is out of budget")
    index = {p: i for i, p in enumerate(primes)}
    masks = [sum(1 << index[p] for p in prof) for prof in profiles]
    total = 0.0
    for pattern in range(1 << len(primes)):
        acc = 0j
        for coeff, mask in zip(vals, masks):
            parity = (pattern & mask).bit_count() & 1
            acc += -coeff if parity else coeff
        total += abs(acc) ** 2
    return total / (1 << len(primes))


def mc_second_moment(a, trials: int, seed: int, table: FactorTable | None = None) -> dict:
    """Monte Carlo estimate of E |sum a_n f(n)|^2 with its standard error.

    Trial t draws signs from the keyed hash at sub-seed mix(seed, t), so the
    estimate is reproducible and independent of evaluation order.
    """
    if trials < 2:
        raise ValueError(f"need trials >= 2, got {trials}")
    vals = _coeffs(a)
    profiles = _parity_profiles(len(vals), table)
    primes = sorted({p for prof in profiles for p in prof})
    acc = 0.0
    acc_sq = 0.0
    for t in range(trials):
        sub_seed = _mix64(seed ^ _mix64(t + 1))
        signs = {p: _prime_sign(sub_seed, p) for p in primes}
        total = 0j
        for coeff, prof in zip(vals, profiles):
            s = 1
            for p in prof:
                s *= signs[p]
            total += s * coeff
        sample = abs(total) ** 2
        acc += sample
        acc_sq += sample * sample
    mean = acc / trials
    var = max(acc_sq / trials - mean * mean, 0.0)
    return {
        "estimate": mean,
        "standard_error": math.sqrt(var / trials),
        "trials": trials,
        "seed": seed,
    }


def rmf_variance_rhs(a, interval_len: int, table: FactorTable | None = None) -> float:
    """E |sum a_n f(n)|^2 + (1/sqrt(interval_len)) * (sum |a_n| sqrt(s(n)))^2.

    The right-hand side of the prime-average comparison: the model second
    moment plus a correction shrinking with the prime-interval length.
    """
    if interval_len < 1:
        raise ValueError(f"need interval_len >= 1, got {interval_len}")
    vals = _coeffs(a)
    weighted = sum(abs(c) * math.sqrt(squarefree_part(n, table)) for n, c in enumerate(vals, 1))
    return exact_second_moment(vals, table) + weighted**2 / math.sqrt(interval_len)

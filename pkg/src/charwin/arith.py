"""Exact integer primitives: quadratic symbols, primality, sieves, factorization.

Everything here is plain integer arithmetic.  Python integers are unbounded,
so intermediate products never overflow; moduli are still capped below 2**63
to keep the bulk numpy paths in other modules safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_MODULUS = 1 << 63

# Witness set making Miller-Rabin deterministic for all n < 3.3e24,
# comfortably covering the full 64-bit range used here.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ExperimentWarning(UserWarning):
    """Non-fatal contract warnings (degenerate ranges, relaxed-mode use)."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for n < 2**64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A validated odd prime modulus for quadratic-character work."""

    q: int

    def __post_init__(self) -> None:
        q = self.q
        if not isinstance(q, int):
            raise TypeError(f"modulus must be int, got {type(q).__name__}")
        if not 3 <= q < MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 3 <= q < 2**63, got {q}")
        if q % 2 == 0 or not is_prime(q):
            raise ValueError(f"modulus must be an odd prime, got {q}")


def _as_modulus(q) -> int:
    return q.q if isinstance(q, PrimeModulus) else q


def jacobi(n: int, q: int | PrimeModulus) -> int:
    """Jacobi symbol (n|q) for odd q > 0, by the binary algorithm.

    Strips factors of two (second supplement: flip when q = 3,5 mod 8),
    then swaps by quadratic reciprocity (flip when both = 3 mod 4) and
    reduces.  For prime q this is the Legendre symbol; euler_criterion
    is the slow independent oracle used in tests.
    """
    b = _as_modulus(q)
    if b <= 0 or b % 2 == 0:
        raise ValueError(f"jacobi denominator must be positive odd, got {b}")
    a = n % b
    result = 1
    while a:
        tz = (a & -a).bit_length() - 1
        if tz & 1 and b % 8 in (3, 5):
            result = -result
        a >>= tz
        if a & 2 and b & 2:
            result = -result
        a, b = b % a, a
    return result if b == 1 else 0


def euler_criterion(n: int, q: int | PrimeModulus) -> int:
    """Legendre symbol via n**((q-1)/2) mod q.  Slow; test oracle only."""
    p = _as_modulus(q)
    r = pow(n % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@dataclass
class FactorTable:
    """Smallest-prime-factor sieve up to ``limit``.

    smallest_prime_factor[n] is the least prime dividing n (n itself for
    primes); entries 0 and 1 are sentinels.  Factorization requests above
    the limit fall back to trial division by sieved primes.
    """

    limit: int
    smallest_prime_factor: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if self.limit < 2:
            raise ValueError(f"factor table limit must be >= 2, got {self.limit}")
        if self.smallest_prime_factor is None:
            self.smallest_prime_factor = _spf_sieve(self.limit)

    def spf(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [2, {self.limit}]")
        return int(self.smallest_prime_factor[n])

    def factorization(self, n: int) -> list[tuple[int, int]]:
        """Sorted list of (prime, exponent) pairs for n >= 1."""
        if n < 1:
            raise ValueError(f"cannot factor n={n}")
        out: list[tuple[int, int]] = []
        if n <= self.limit:
            spf = self.smallest_prime_factor
            while n > 1:
                p = int(spf[n])
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            return out
        # Fall back: peel sieved primes, then whatever survives.
        for p in self.primes():
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        if n > 1:
            if n <= self.limit * self.limit or is_prime(n):
                out.append((n, 1))
            else:
                raise ValueError("n too large for this table (cofactor not proven prime)")
        return sorted(out)

    def primes(self) -> list[int]:
        spf = self.smallest_prime_factor
        idx = np.arange(2, self.limit + 1)
        return idx[spf[2:] == idx].tolist()


def _spf_sieve(limit: int) -> np.ndarray:
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    untouched = np.nonzero(spf == 0)[0]
    spf[untouched] = untouched  # primes, plus sentinels at 0 and 1
    spf[1] = 1
    return spf


def _factorization(n: int, table: FactorTable | None) -> list[tuple[int, int]]:
    if table is not None:
        return table.factorization(n)
    if n < 1:
        raise ValueError(f"cannot factor n={n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def squarefree_part(n: int, table: FactorTable | None = None) -> int:
    """Largest squarefree s with n = s * (perfect square)."""
    if n < 1:
        raise ValueError(f"squarefree part needs n >= 1, got {n}")
    s = 1
    for p, e in _factorization(n, table):
        if e % 2:
            s *= p
    return s


def omega(n: int, table: FactorTable | None = None) -> int:
    """Number of distinct prime factors."""
    if n < 1:
        raise ValueError(f"omega needs n >= 1, got {n}")
    return len(_factorization(n, table))


def tau(n: int, table: FactorTable | None = None) -> int:
    """Number of divisors."""
    if n < 1:
        raise ValueError(f"tau needs n >= 1, got {n}")
    t = 1
    for _, e in _factorization(n, table):
        t *= e + 1
    return t


MAX_SEGMENT = 1 << 28


def primes_in_interval(lo: int, hi: int) -> list[int]:
    """All primes in [lo, hi], by a segmented sieve of Eratosthenes."""
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    if hi - lo + 1 > MAX_SEGMENT:
        raise ValueError(f"segment length {hi - lo + 1} exceeds budget {MAX_SEGMENT}")
    root = math.isqrt(hi)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    seg = np.ones(hi - lo + 1, dtype=bool)
    for p in np.nonzero(base)[0]:
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start <= hi:
            seg[start - lo :: p] = False
    if lo <= 1:
        seg[: 2 - lo] = False
    return (np.nonzero(seg)[0] + lo).tolist()


def prime_density_check(x: int, eta: float) -> dict:
    """Count primes in (x, x + floor(x**eta)] against the x**eta / log x heuristic."""
    if x < 3:
        raise ValueError(f"need x >= 3, got {x}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"need 0 < eta <= 1, got {eta}")
    length = math.floor(x**eta)
    if length < 1:
        raise ValueError(f"interval (x, x + x**eta] is empty for x={x}, eta={eta}")
    count = len(primes_in_interval(x + 1, x + length))
    comparator = x**eta / math.log(x)
    return {
        "x": x,
        "eta": eta,
        "length": length,
        "count": count,
        "comparator": comparator,
        "ratio": count / comparator,
    }

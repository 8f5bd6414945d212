"""Square structure of shifted products: tuple reduction and pairing counts.

A product prod_i (m + a_i) is a perfect square exactly when the offsets that
appear an odd number of times still leave a square; deleting matched pairs
of equal offsets (left to right, deterministically) preserves that property.
The number of fully-paired offset tuples K(r, h) = #{a in [1,h]^(2r) : every
value appears an even number of times} controls the even moments; it is
computed exactly two independent ways (enumeration, and the coefficient of
x^(2r) in cosh(x)^h times (2r)!).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .arith import FactorTable, _factorization, is_perfect_square

BRUTE_FORCE_BUDGET = 10**8


@dataclass(frozen=True)
class TupleReduction:
    """Survivors of pair deletion, in original order."""

    survivors: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.survivors) // 2


def reduce_tuple(entries) -> TupleReduction:
    """Delete matched pairs of equal values, leftmost first.

    Starting from the leftmost live entry, scan right for the first live
    equal value; if found, delete both and move on to the next live entry,
    otherwise keep the entry.  Survivors are exactly the values of odd
    multiplicity, in their original order.
    """
    values = [int(v) for v in entries]
    alive = [True] * len(values)
    i = 0
    while i < len(values):
        if not alive[i]:
            i += 1
            continue
        for j in range(i + 1, len(values)):
            if alive[j] and values[j] == values[i]:
                alive[i] = alive[j] = False
                break
        i += 1
    return TupleReduction(survivors=tuple(v for v, a in zip(values, alive) if a))


def _odd_prime_profile(m: int, offsets, table: FactorTable | None) -> frozenset[int]:
    """Primes of odd exponent in prod (m + off); empty iff the product is a square."""
    parity: set[int] = set()
    for off in offsets:
        for p, e in _factorization(m + off, table):
            if e % 2:
                parity ^= {p}
    return frozenset(parity)


def product_is_square(m: int, offsets, table: FactorTable | None = None) -> bool:
    """Whether prod_i (m + offsets_i) is a perfect square.

    Tested via exponent-parity vectors of the factors; the (possibly huge)
    product itself is never formed.  Empty offset tuples give the empty
    product 1, a square.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    return not _odd_prime_profile(m, offsets, table)


def square_iff_reduced(m: int, alpha, table: FactorTable | None = None) -> tuple[bool, bool]:
    """(full product square?, reduced product square?) - always equal."""
    full = product_is_square(m, alpha, table)
    reduced = product_is_square(m, reduce_tuple(alpha).survivors, table)
    return full, reduced


def paired_count_bruteforce(r: int, h: int) -> int:
    """K(r, h) by direct enumeration of [1,h]^(2r).  Independent oracle."""
    if r < 1 or h < 1:
        raise ValueError(f"need r >= 1 and h >= 1, got r={r}, h={h}")
    if h ** (2 * r) > BRUTE_FORCE_BUDGET:
        raise ValueError(f"h**(2r) = {h**(2*r)} exceeds enumeration budget")
    count = 0
    for tup in itertools.product(range(1, h + 1), repeat=2 * r):
        if all(c % 2 == 0 for c in Counter(tup).values()):
            count += 1
    return count


def _series_mul(a: list[Fraction], b: list[Fraction], deg: int) -> list[Fraction]:
    out = [Fraction(0)] * (deg + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(deg - i, len(b) - 1) + 1):
                if b[j]:
                    out[i + j] += ai * b[j]
    return out


def paired_count_exact(r: int, h: int) -> int:
    """K(r, h) = (2r)! * [x^(2r)] cosh(x)^h, via exact rational power series.

    Each of the h factors contributes an even number of slots; cosh is the
    exponential generating function of "even multiplicity", so the truncated
    h-th power collects exactly the fully-paired tuples.
    """
    if r < 1 or h < 1:
        raise ValueError(f"need r >= 1 and h >= 1, got r={r}, h={h}")
    deg = 2 * r
    cosh = [Fraction(1, math.factorial(j)) if j % 2 == 0 else Fraction(0) for j in range(deg + 1)]
    result = [Fraction(0)] * (deg + 1)
    result[0] = Fraction(1)
    base, e = cosh, h
    while e:
        if e & 1:
            result = _series_mul(result, base, deg)
        e >>= 1
        if e:
            base = _series_mul(base, base, deg)
    coeff = result[deg] * math.factorial(deg)
    assert coeff.denominator == 1, "pairing count must be integral"
    return int(coeff)


def double_factorial_odd(j: int) -> int:
    """(j)!! for odd j >= -1; (2r-1)!! is the 2r-th Gaussian moment."""
    if j < -1 or j % 2 == 0:
        raise ValueError(f"need odd j >= -1, got {j}")
    return math.factorial(j + 1) // (2 ** ((j + 1) // 2) * math.factorial((j + 1) // 2))


@dataclass(frozen=True)
class PairedCount:
    """Exact pairing count and its normalized form K = mu_2r * (h - theta*r)^r."""

    r: int
    h: int
    count: int
    theta: float


def paired_count_theta(r: int, h: int) -> PairedCount:
    """Exact K(r, h) plus theta in [0, 1] with K = (2r-1)!! * (h - theta*r)^r.

    The integer sandwich mu * h*(h-1)*...*(h-r+1) <= K <= mu * h^r is checked
    exactly; a violation is a hard failure (it would falsify theta's range).
    """
    if not 1 <= r <= h:
        raise ValueError(f"need 1 <= r <= h, got r={r}, h={h}")
    k = paired_count_exact(r, h)
    mu = double_factorial_odd(2 * r - 1)
    lower = mu * math.prod(range(h - r + 1, h + 1))
    upper = mu * h**r
    if not lower <= k <= upper:
        raise AssertionError(f"pairing-count sandwich violated at r={r}, h={h}: {lower} <= {k} <= {upper}")
    root = (k / mu) ** (1.0 / r) if r > 1 else k / mu
    theta = (h - root) / r
    if not -1e-9 <= theta <= 1 + 1e-9:
        raise AssertionError(f"theta = {theta} outside [0, 1] at r={r}, h={h}")
    return PairedCount(r=r, h=h, count=k, theta=min(max(theta, 0.0), 1.0))


def count_square_values(gamma, m_max: int, table: FactorTable | None = None) -> tuple[int, list[int]]:
    """#(and list of) m in [1, m_max] with prod (m + gamma_i) a perfect square."""
    gamma = tuple(int(c) for c in gamma)
    if len(set(gamma)) != len(gamma):
        raise ValueError(f"offsets must be distinct: {gamma}")
    if m_max < 1:
        raise ValueError(f"need m_max >= 1, got {m_max}")
    if not gamma:
        return m_max, list(range(1, m_max + 1))
    if any(c < 0 for c in gamma):
        raise ValueError(f"offsets must be nonnegative: {gamma}")
    if table is None:
        table = FactorTable(m_max + max(gamma))
    witnesses = [m for m in range(1, m_max + 1) if product_is_square(m, gamma, table)]
    return len(witnesses), witnesses


def _divisors(n: int, table: FactorTable | None) -> list[int]:
    divs = [1]
    for p, e in _factorization(n, table):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def square_pair_solutions(gap: int, limit: int, table: FactorTable | None = None) -> list[int]:
    """All d in [1, limit] with d * (d + gap) a perfect square, via divisors.

    d*(d+gap) = y^2 rewrites as gap^2 = (2d + gap - 2y)(2d + gap + 2y); each
    divisor u of gap^2 with u <= gap, u = gap^2/u (mod 2), and
    u + gap^2/u + 2*gap = 0 (mod 4) yields d = (u + gap^2/u - 2*gap) / 4.
    The list length is bounded by tau(gap^2).
    """
    if gap < 1:
        raise ValueError(f"need gap >= 1, got {gap}")
    if limit < 1:
        raise ValueError(f"need limit >= 1, got {limit}")
    gap_sq = gap * gap
    out = []
    for u in _divisors(gap_sq, table):
        if u > gap:
            break
        v = gap_sq // u
        if (u - v) % 2:
            continue
        if (u + v + 2 * gap) % 4:
            continue
        d, rem = divmod(u + v - 2 * gap, 4)
        assert rem == 0 and (v - u) % 4 == 0
        if 1 <= d <= limit:
            out.append(d)
    return sorted(out)


@dataclass(frozen=True)
class SquareCountBound:
    """Discriminant data and the 7^(13 + 9*omega) ceiling on square values."""

    discriminant: int
    omega: int
    log7_exponent: int
    bound: int


def evertse_bound(gamma) -> SquareCountBound:
    """Uniform bound on #{m : prod (m + gamma_i) is a square} from the offsets.

    Requires at least 4 distinct offsets (degree >= 4, where square values
    are genuinely scarce).  The discriminant is the exact product of squared
    offset differences; its distinct prime count is collected factor by
    factor, and the bound 7^(13 + 9*omega) is returned as an exact integer
    alongside the exponent.
    """
    gamma = tuple(int(c) for c in gamma)
    if len(gamma) < 4:
        raise ValueError(f"need at least 4 offsets, got {len(gamma)}")
    if len(set(gamma)) != len(gamma):
        raise ValueError(f"offsets must be distinct: {gamma}")
    disc = 1
    prime_set: set[int] = set()
    for a, b in itertools.combinations(gamma, 2):
        diff = abs(a - b)
        disc *= diff * diff
        prime_set.update(p for p, _ in _factorization(diff, None))
    om = len(prime_set)
    exponent = 13 + 9 * om
    return SquareCountBound(discriminant=disc, omega=om, log7_exponent=exponent, bound=7**exponent)

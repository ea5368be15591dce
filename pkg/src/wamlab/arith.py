"""Integer factorization primitives sized for 128-bit inputs.

Factorizations are the substrate for every weighted-multiplicity computation in
this package, so this module keeps its own primality test and Pollard rho
splitter instead of delegating: the rho iteration budget is part of the public
contract (`FactorizationBudgetExceeded`), and callers rely on the exponent
ordering guarantees of :class:`Factorization`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

MAX_VALUE = 1 << 127
DEFAULT_RHO_BUDGET = 10**8

# Deterministic Miller-Rabin witness ladder.  Each entry (bound, bases) is a
# set of bases with no composite strong pseudoprime below the bound; the last
# entry covers everything below 2^64 and beyond (up to ~3.3e24).
_MR_LADDER: tuple[tuple[int, tuple[int, ...]], ...] = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (9080191, (31, 73)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)
_MR_RANDOM_ROUNDS = 40


def _small_prime_list(limit: int) -> list[int]:
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit, i)))
    return [i for i in range(limit) if sieve[i]]


_SMALL_PRIMES = _small_prime_list(1 << 12)
_SMALL_PRIME_SET = set(_SMALL_PRIMES)


class FactorizationBudgetExceeded(RuntimeError):
    """Pollard rho spent its iteration budget on a single composite."""


def _mr_witness(n: int, a: int, d: int, r: int) -> bool:
    # True if `a` witnesses that odd n = d * 2^r + 1 is composite.
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: deterministic below ~3.3e24, 40 rounds above.

    >>> is_prime(2047)
    False
    >>> is_prime(2**61 - 1)
    True
    """
    if n < 2:
        return False
    if n < 1 << 12:
        return n in _SMALL_PRIME_SET
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return False
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for bound, bases in _MR_LADDER:
        if n < bound:
            return not any(_mr_witness(n, a, d, r) for a in bases)
    rng = random.Random(n)
    return not any(
        _mr_witness(n, rng.randrange(2, n - 1), d, r) for _ in range(_MR_RANDOM_ROUNDS)
    )


def _brent_rho(n: int, seed: int, budget: int) -> tuple[int | None, int]:
    """One Brent-cycle rho run on odd composite n.

    Returns (factor or None, iterations spent).  The returned factor may be
    composite; callers split recursively.
    """
    rng = random.Random(seed * 0x9E3779B97F4A7C15 + n)
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = q = r = 1
    x = ys = y
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += 2 * r
        if spent > budget:
            return None, spent
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            spent += 1
            if spent > budget:
                return None, spent
    return (g, spent) if g != n else (None, spent)


def _split(n: int, counts: dict[int, int], budget: int) -> None:
    # n odd, free of factors below 2^12.
    if n == 1:
        return
    if is_prime(n):
        counts[n] = counts.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, counts, budget)
        _split(root, counts, budget)
        return
    remaining = budget
    for attempt in range(64):
        g, spent = _brent_rho(n, attempt, remaining)
        remaining -= spent
        if remaining <= 0 and g is None:
            raise FactorizationBudgetExceeded(
                f"rho budget {budget} exhausted splitting {n}"
            )
        if g is not None and 1 < g < n:
            _split(g, counts, budget)
            _split(n // g, counts, budget)
            return
    raise FactorizationBudgetExceeded(f"rho failed to split {n} after 64 restarts")


@dataclass(frozen=True)
class Factorization:
    """n = prod(p_k ** e_k) with primes strictly increasing.

    `primes` and `exponents` are parallel tuples; `primes[-1]` is p_m, the
    largest prime factor, and `exponents[-1]` its multiplicity e_m.
    """

    value: int
    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    @classmethod
    def from_pairs(cls, pairs) -> "Factorization":
        """Validated constructor from (prime, exponent) pairs.

        >>> Factorization.from_pairs([(3, 2), (2, 3)]).value
        72
        """
        items = sorted(dict(pairs).items())
        value = 1
        for p, e in items:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if e < 1:
                raise ValueError(f"exponent {e} for {p} must be >= 1")
            value *= p**e
        if value >= MAX_VALUE:
            raise ValueError("product exceeds 2^127")
        return cls(
            value,
            tuple(p for p, _ in items),
            tuple(e for _, e in items),
        )

    @property
    def m(self) -> int:
        """Number of distinct prime factors (omega)."""
        return len(self.primes)

    @property
    def e_m(self) -> int:
        """Multiplicity of the largest prime factor."""
        if not self.exponents:
            raise ValueError("1 has no prime factors")
        return self.exponents[-1]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.primes, self.exponents))


@lru_cache(maxsize=1 << 15)
def _factor_default_budget(n: int) -> Factorization:
    return _factor_uncached(n, DEFAULT_RHO_BUDGET)


def _factor_uncached(n: int, budget: int) -> Factorization:
    counts: dict[int, int] = {}
    rem = n
    for p in _SMALL_PRIMES:
        if p * p > rem:
            break
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    if rem > 1:
        if rem < (1 << 24) or is_prime(rem):
            counts[rem] = counts.get(rem, 0) + 1
        else:
            _split(rem, counts, budget)
    items = sorted(counts.items())
    out = Factorization(n, tuple(p for p, _ in items), tuple(e for _, e in items))
    assert math.prod(p**e for p, e in items) == n
    return out


def factor(n: int, *, budget: int = DEFAULT_RHO_BUDGET) -> Factorization:
    """Factor n completely.  Domain: 1 <= n < 2^127.

    >>> factor(2047).pairs()
    ((23, 1), (89, 1))
    >>> factor(1).primes
    ()
    """
    if not isinstance(n, int):
        raise ValueError(f"expected an integer, got {type(n).__name__}")
    if n < 1 or n >= MAX_VALUE:
        raise ValueError(f"n must satisfy 1 <= n < 2^127, got {n}")
    if budget == DEFAULT_RHO_BUDGET:
        return _factor_default_budget(n)
    return _factor_uncached(n, budget)


def radical(f: Factorization) -> int:
    """Product of the distinct primes of f.

    >>> radical(factor(72))
    6
    """
    return math.prod(f.primes)


def omega(f: Factorization) -> int:
    """Number of distinct prime factors."""
    return len(f.primes)


def big_omega(f: Factorization) -> int:
    """Number of prime factors counted with multiplicity."""
    return sum(f.exponents)


def mobius(n: int) -> int:
    """Moebius function: 0 unless n squarefree, else (-1)^omega."""
    f = factor(n)
    if any(e > 1 for e in f.exponents):
        return 0
    return -1 if len(f.primes) % 2 else 1

"""Exact integer arithmetic: gcd, integer square roots, Jacobi symbols,
deterministic primality, factorization and squarefree reduction.

Everything here is pure, deterministic and exact.  Primality and
factorization are deterministic for the sizes this package handles
(coefficients of desk-scale curves, well past 64 bits), never probabilistic:
a wrong primality answer would silently corrupt the congruence-family
classification downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "gcd",
    "isqrt",
    "is_perfect_square",
    "perfect_square_root",
    "jacobi",
    "is_prime",
    "Factorization",
    "factorize",
    "divisors",
    "squarefree_class",
    "primes_up_to",
]

# Miller-Rabin with these witnesses is a proven deterministic test for all
# n < 3317044064679887385961981 (well beyond 64 bits).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def gcd(a: int, b: int) -> int:
    """Non-negative greatest common divisor; gcd(0, 0) == 0."""
    return math.gcd(a, b)


def isqrt(n: int) -> int:
    """Exact floor of the square root of a non-negative integer."""
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    """True iff n is the square of an integer (negatives never are)."""
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def perfect_square_root(n: int) -> int | None:
    """The non-negative square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1.

    For an odd prime n this is the Legendre symbol: 0 when n | a, +1 when a
    is a nonzero square mod n, -1 otherwise.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _miller_rabin_composite(n: int, base: int) -> bool:
    # Returns True when `base` witnesses that odd n > 2 is composite.
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality, exact for all n < 3.3e24; n <= 1 is False."""
    if n <= 1:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_DETERMINISTIC_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    return not any(_miller_rabin_composite(n, a) for a in _MR_WITNESSES)


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: sign * prod(p**e) reconstructs the input."""

    sign: int
    primes: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        last = 1
        for p, e in self.primes:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            last = p

    def value(self) -> int:
        out = self.sign
        for p, e in self.primes:
            out *= p**e
        return out


def _pollard_rho(n: int) -> int:
    # Brent-style rho with a fixed parameter sweep, so results are
    # deterministic.  n must be odd, composite and not a prime power caught
    # by trial division.
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def _factor_positive(n: int, out: dict[int, int]) -> None:
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # trial division up to 2**20 covers everything the curves produce;
    # rho handles stray large semiprimes
    f = 59
    while f * f <= n and f < (1 << 20):
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _factor_positive(d, out)
    _factor_positive(n // d, out)


def factorize(n: int) -> Factorization:
    """Exact signed prime factorization of a nonzero integer."""
    if n == 0:
        raise ValueError("cannot factorize 0")
    sign = 1 if n > 0 else -1
    exps: dict[int, int] = {}
    _factor_positive(abs(n), exps)
    return Factorization(sign, tuple(sorted(exps.items())))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of a nonzero integer."""
    f = factorize(n)
    divs = [1]
    for p, e in f.primes:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def squarefree_class(n: int) -> int:
    """The unique squarefree d with the sign of n such that n/d is a square."""
    if n == 0:
        raise ValueError("0 has no squarefree class")
    f = factorize(n)
    out = f.sign
    for p, e in f.primes:
        if e % 2 == 1:
            out *= p
    return out


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit, by sieve of Eratosthenes."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)

"""Hot numeric kernels: the bounded quartic search and the residue
solvability scan.

Both kernels exist twice: a numba ``@njit`` version (the default) and a
vectorized numpy version selected by setting the environment variable
``TWODESCENT_NUMBA=0``.  The numba/numpy paths work in int64 and are only
used when an a-priori bound proves no intermediate can overflow; otherwise
the dispatcher silently falls back to an exact big-integer Python loop, so
results are correct for arbitrarily large coefficients on every path.

``benchmarks/bench_kernels.py`` compares the backends.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# Partial sums in the search stay below (|b1|+|a|+|b2|) * bound**4; keep a
# factor-of-two margin under 2**63 so the incremental isqrt never overflows.
_INT64_SAFE = 1 << 62

# Residue tables are O(m) int64/uint8 arrays; this cap keeps them well under
# a gigabyte while covering every prime divisor of desk-scale coefficients.
MAX_ENUM_MODULUS = 1 << 24


def numba_enabled() -> bool:
    return HAS_NUMBA and os.environ.get("TWODESCENT_NUMBA", "1") != "0"


def active_backend() -> str:
    """Name of the int64 backend the dispatchers will use."""
    return "numba" if numba_enabled() else "numpy"


def search_fits_int64(b1: int, a: int, b2: int, bound: int) -> bool:
    return (abs(b1) + abs(a) + abs(b2)) * bound**4 < _INT64_SAFE


# ---------------------------------------------------------------------------
# bounded search for n**2 = b1*m**4 + a*m**2*e**2 + b2*e**4, gcd(m, e) = 1
#
# All three search implementations scan diagonals s = m + e in increasing
# order and m increasing within a diagonal, so the first hit is the minimum
# in the (m + e, m) lexicographic order and every backend returns the same
# triple.  Any solution with coprime m, e certifies a rational point of
# class b1, so no further coprimality is imposed here; full five-way
# reduction is the business of the local sieve.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _search_numba(b1: int, a: int, b2: int, bound: int):  # pragma: no cover
    for s in range(2, 2 * bound + 1):
        m_lo = s - bound if s - bound > 1 else 1
        m_hi = bound if bound < s - 1 else s - 1
        for m in range(m_lo, m_hi + 1):
            e = s - m
            if math.gcd(m, e) != 1:
                continue
            m2 = m * m
            e2 = e * e
            r = b1 * m2 * m2 + a * m2 * e2 + b2 * e2 * e2
            if r < 0:
                continue
            n = int(math.sqrt(float(r)))
            while n * n > r:
                n -= 1
            while (n + 1) * (n + 1) <= r:
                n += 1
            if n * n == r:
                return n, m, e
    return -1, -1, -1


def _search_numpy(b1: int, a: int, b2: int, bound: int):
    for s in range(2, 2 * bound + 1):
        ms = np.arange(max(1, s - bound), min(bound, s - 1) + 1, dtype=np.int64)
        es = s - ms
        coprime = np.gcd(ms, es) == 1
        if not coprime.any():
            continue
        ms = ms[coprime]
        es = es[coprime]
        m2 = ms * ms
        e2 = es * es
        r = b1 * m2 * m2 + a * m2 * e2 + b2 * e2 * e2
        nonneg = r >= 0
        if not nonneg.any():
            continue
        # float sqrt of values < 2**62 is within 1/4 of the true root, so
        # rounding recovers the exact root whenever r is a perfect square
        cand = np.zeros_like(r)
        cand[nonneg] = np.rint(np.sqrt(r[nonneg].astype(np.float64))).astype(np.int64)
        hits = np.flatnonzero(nonneg & (cand * cand == r))
        if hits.size:
            idx = hits[0]
            return int(cand[idx]), int(ms[idx]), int(es[idx])
    return None


def _search_python(b1: int, a: int, b2: int, bound: int):
    # Exact big-integer path, used when int64 bounds cannot be guaranteed.
    for s in range(2, 2 * bound + 1):
        for m in range(max(1, s - bound), min(bound, s - 1) + 1):
            e = s - m
            if math.gcd(m, e) != 1:
                continue
            r = b1 * m**4 + a * m * m * e * e + b2 * e**4
            if r < 0:
                continue
            n = math.isqrt(r)
            if n * n == r:
                return n, m, e
    return None


def torsor_search(b1: int, a: int, b2: int, bound: int):
    """First (n, m, e) in (m+e, m) order solving the quartic with coprime
    m, e, or None.  Positive m, e suffice: every variable appears in an
    even power."""
    if not search_fits_int64(b1, a, b2, bound):
        return _search_python(b1, a, b2, bound)
    if numba_enabled():
        n, m, e = _search_numba(b1, a, b2, bound)
        return None if n < 0 else (n, m, e)
    return _search_numpy(b1, a, b2, bound)


# ---------------------------------------------------------------------------
# admissible residue triples modulo a prime power q**k
#
# A triple (n, m, e) mod q**k is admissible when n**2 matches the quartic
# and, at the prime q, none of {m,e}, {n,m}, {n,e} vanish together, q | b1
# forces q ∤ e, and q | b2 forces q ∤ m.  Admissible triples are closed
# under (n, m, e) -> (u*u*n, u*m, u*e) for units u, and m, e cannot both be
# divisible by q, so it is enough to scan the slice e = 1 (e a unit, m free)
# and the slice m = 1 with e running over multiples of q.  That turns an
# O(m**3) enumeration into two O(m) passes against precomputed square
# tables.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _residue_numba(
    b1m: int, am: int, b2m: int, q: int, m: int, b1_div: bool, b2_div: bool
):  # pragma: no cover - exercised via dispatcher
    squares = np.zeros(m, dtype=np.uint8)
    unit_squares = np.zeros(m, dtype=np.uint8)
    for r in range(m):
        v = (r * r) % m
        squares[v] = 1
        if r % q != 0:
            unit_squares[v] = 1
    for mm in range(m):
        m_div = mm % q == 0
        if b2_div and m_div:
            continue
        m2 = (mm * mm) % m
        m4 = (m2 * m2) % m
        v = (b1m * m4 + am * m2 + b2m) % m
        if m_div:
            if unit_squares[v]:
                return True
        elif squares[v]:
            return True
    if not b1_div:
        for e in range(0, m, q):
            e2 = (e * e) % m
            e4 = (e2 * e2) % m
            v = (b1m + am * e2 + b2m * e4) % m
            if unit_squares[v]:
                return True
    return False


def _residue_numpy(
    b1m: int, am: int, b2m: int, q: int, m: int, b1_div: bool, b2_div: bool
) -> bool:
    r = np.arange(m, dtype=np.int64)
    r2 = (r * r) % m
    squares = np.zeros(m, dtype=bool)
    squares[r2] = True
    unit_squares = np.zeros(m, dtype=bool)
    unit_squares[r2[r % q != 0]] = True

    r4 = (r2 * r2) % m
    v = (b1m * r4 + am * r2 + b2m) % m
    m_div = r % q == 0
    ok = np.where(m_div, unit_squares[v], squares[v])
    if b2_div:
        ok &= ~m_div
    if ok.any():
        return True

    if not b1_div:
        e = np.arange(0, m, q, dtype=np.int64)
        e2 = (e * e) % m
        e4 = (e2 * e2) % m
        v = (b1m + am * e2 + b2m * e4) % m
        if unit_squares[v].any():
            return True
    return False


def residue_solvable(b1: int, a: int, b2: int, q: int, k: int) -> bool:
    """True iff an admissible residue triple exists modulo q**k."""
    m = q**k
    if m > MAX_ENUM_MODULUS:
        raise ValueError(f"modulus {m} exceeds the exact enumeration cap")
    b1m, am, b2m = b1 % m, a % m, b2 % m
    b1_div = b1 % q == 0
    b2_div = b2 % q == 0
    if numba_enabled():
        return bool(_residue_numba(b1m, am, b2m, q, m, b1_div, b2_div))
    return _residue_numpy(b1m, am, b2m, q, m, b1_div, b2_div)


def warm_up() -> None:
    """Trigger JIT compilation of both kernels (no-op on the numpy path)."""
    torsor_search(6, 0, 10, 4)
    residue_solvable(6, 0, 10, 3, 1)

"""Curves y^2 = x^3 + a*x^2 + b*x, their 2-isogenous partners, quartic
torsors attached to divisor classes, a sound local-obstruction sieve, the
bounded global solution search, and the maps back to rational points.

The local sieve never lies in the obstructed direction: ``local_obstruction``
returns True only when no admissible residue triple exists, and every
primitive integer solution reduces to an admissible residue triple, so True
is a proof of global insolvability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _kernels
from .intmath import divisors, factorize, primes_up_to, squarefree_class

__all__ = [
    "Curve",
    "make_curve",
    "isogenous",
    "Point",
    "is_on_curve",
    "TorsorProblem",
    "TorsorSolution",
    "ObstructedAt",
    "Solved",
    "Unresolved",
    "Verdict",
    "divisor_class_candidates",
    "torsor_factorizations",
    "local_obstruction",
    "local_scan",
    "default_moduli",
    "global_search",
    "solution_to_point",
    "apply_isogeny",
    "stats_snapshot",
]

# rational point (x, y), or None for the point at infinity
Point = tuple[Fraction, Fraction] | None

# instrumentation so callers (and the cache tests) can tell whether a
# search actually ran
_STATS = {"global_search": 0, "local_scan": 0}


def stats_snapshot() -> dict[str, int]:
    return dict(_STATS)


@dataclass(frozen=True)
class Curve:
    """y^2 = x^3 + a*x^2 + b*x with nonzero discriminant b^2 (a^2 - 4b)."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.b == 0:
            raise ValueError("b = 0 gives a singular curve")
        if self.a * self.a == 4 * self.b:
            raise ValueError("a^2 = 4b gives a singular curve")

    def discriminant(self) -> int:
        return self.b * self.b * (self.a * self.a - 4 * self.b)


def make_curve(a: int, b: int) -> Curve:
    """Validated curve; the congruence families use make_curve(0, -5*p)."""
    return Curve(a, b)


def isogenous(c: Curve) -> Curve:
    """The curve Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X on the far side of the
    degree-2 isogeny."""
    return Curve(-2 * c.a, c.a * c.a - 4 * c.b)


def _as_fraction_point(pt: Point) -> Point:
    if pt is None:
        return None
    x, y = pt
    return (Fraction(x), Fraction(y))


def is_on_curve(c: Curve, pt: Point) -> bool:
    if pt is None:
        return True
    x, y = _as_fraction_point(pt)
    return y * y == x**3 + c.a * x**2 + c.b * x


@dataclass(frozen=True)
class TorsorProblem:
    """One factorization b1 * b2 of a descent coefficient, defining the
    quartic n^2 = b1*m^4 + a*m^2*e^2 + b2*e^4."""

    b1: int
    a: int
    b2: int

    def __post_init__(self) -> None:
        if self.b1 == 0 or self.b2 == 0:
            raise ValueError("torsor factors must be nonzero")

    def coefficient(self) -> int:
        return self.b1 * self.b2

    def rhs(self, m: int, e: int) -> int:
        return self.b1 * m**4 + self.a * m * m * e * e + self.b2 * e**4


@dataclass(frozen=True)
class TorsorSolution:
    """Integer solution (n, m, e) of a torsor with coprime m, e.

    Any such solution certifies that the class of b1 lies in the descent
    image: it maps to the rational point (b1*m^2/e^2, b1*n*m/e^3).  A
    solution need not be fully reduced; ``fully_reduced`` additionally
    checks the five pairwise conditions gcd(n,e) = gcd(m,e) = gcd(b1,e) =
    gcd(b2,m) = gcd(m,n) = 1 that the local sieve rules out.
    """

    n: int
    m: int
    e: int

    def __post_init__(self) -> None:
        if self.m == 0 or self.e == 0:
            raise ValueError("m and e must be nonzero")

    def satisfies(self, t: TorsorProblem) -> bool:
        return self.n * self.n == t.rhs(self.m, self.e) and gcd(self.m, self.e) == 1

    def fully_reduced(self, t: TorsorProblem) -> bool:
        return (
            self.satisfies(t)
            and gcd(self.n, self.e) == 1
            and gcd(t.b1, self.e) == 1
            and gcd(t.b2, self.m) == 1
            and gcd(self.m, self.n) == 1
        )


@dataclass(frozen=True)
class ObstructedAt:
    """No admissible residue triple at this modulus: globally insolvable."""

    torsor: TorsorProblem
    modulus: int


@dataclass(frozen=True)
class Solved:
    torsor: TorsorProblem
    triple: TorsorSolution


@dataclass(frozen=True)
class Unresolved:
    """No obstruction found and no solution up to the exhausted bound."""

    torsor: TorsorProblem
    search_bound: int


Verdict = ObstructedAt | Solved | Unresolved


def divisor_class_candidates(coefficient: int) -> frozenset[int]:
    """Squarefree classes of divisors of the coefficient.

    For a positive coefficient the negative classes are dropped: they would
    force both quartic end coefficients negative, which admits no solution
    for the curves this package targets (middle coefficient 0).  The result
    always contains 1 and the class of the coefficient itself, and has size
    2**w for positive input, 2**(w+1) for negative, with w the number of
    distinct primes.
    """
    if coefficient == 0:
        raise ValueError("coefficient must be nonzero")
    radical = [p for p, _ in factorize(coefficient).primes]
    classes = [1]
    for p in radical:
        classes += [c * p for c in classes]
    if coefficient < 0:
        classes += [-c for c in classes]
    return frozenset(classes)


def torsor_factorizations(
    coefficient: int, cls: int, a: int
) -> list[TorsorProblem]:
    """All factorizations coefficient = b1 * b2 where b1 (not necessarily
    squarefree) has squarefree class ``cls``, ordered by |b1|."""
    if cls not in divisor_class_candidates(coefficient):
        raise ValueError(f"{cls} is not a divisor class of {coefficient}")
    sign = 1 if cls > 0 else -1
    b1s = [sign * d for d in divisors(coefficient) if squarefree_class(d) == abs(cls)]
    return [
        TorsorProblem(b1, a, coefficient // b1)
        for b1 in sorted(b1s, key=abs)
    ]


def local_obstruction(t: TorsorProblem, m: int) -> bool:
    """True iff no residue triple mod m satisfies the quartic congruence
    together with the reduced primitivity constraints.

    Solvability mod m splits over the prime-power parts of m (the
    constraints are per-prime), so each part is scanned independently.
    Moduli with a prime-power part above the enumeration cap are rejected
    rather than guessed at.
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    for q, k in factorize(m).primes:
        if not _kernels.residue_solvable(t.b1, t.a, t.b2, q, k):
            return True
    return False


def default_moduli(
    t: TorsorProblem,
    small_prime_bound: int = 50,
    extra_moduli: tuple[int, ...] = (),
) -> list[int]:
    """The default scan schedule: 16, 9, 25, every odd prime up to the small
    bound, and every odd prime dividing b1*b2 or the middle coefficient,
    in increasing order; extra moduli are appended as given."""
    mods = {16, 9, 25}
    mods.update(p for p in primes_up_to(small_prime_bound) if p > 2)
    for source in (t.coefficient(), t.a):
        if source != 0:
            mods.update(
                p
                for p, _ in factorize(source).primes
                if p > 2 and p <= _kernels.MAX_ENUM_MODULUS
            )
    schedule = sorted(mods)
    schedule += [m for m in extra_moduli if m not in mods]
    return schedule


def local_scan(t: TorsorProblem, moduli: list[int]) -> int | None:
    """First modulus in the list where the torsor is obstructed, or None."""
    if not moduli:
        raise ValueError("moduli list must be nonempty")
    _STATS["local_scan"] += 1
    for m in moduli:
        if local_obstruction(t, m):
            return m
    return None


def global_search(t: TorsorProblem, bound: int) -> TorsorSolution | None:
    """Search 1 <= m, e <= bound with gcd(m, e) = 1 (positive values
    suffice: all variables occur in even powers) and return the first
    solution in (m + e, m) lexicographic order, or None."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    _STATS["global_search"] += 1
    hit = _kernels.torsor_search(t.b1, t.a, t.b2, bound)
    if hit is None:
        return None
    triple = TorsorSolution(*hit)
    if not triple.satisfies(t):  # pragma: no cover - kernel contract
        raise AssertionError(f"kernel returned invalid triple {hit} for {t}")
    return triple


def solution_to_point(t: TorsorProblem, s: TorsorSolution) -> Point:
    """The rational point (b1*m^2/e^2, b1*n*m/e^3) on the curve with
    x-coefficient b1*b2 that the solution certifies."""
    if not s.satisfies(t):
        raise ValueError(f"{s} does not solve {t}")
    x = Fraction(t.b1 * s.m * s.m, s.e * s.e)
    y = Fraction(t.b1 * s.n * s.m, s.e**3)
    if y * y != x**3 + t.a * x**2 + t.coefficient() * x:  # pragma: no cover
        raise AssertionError("descent point fails the curve equation")
    return (x, y)


def apply_isogeny(c: Curve, pt: Point) -> Point:
    """Push a point through (x, y) -> (y^2/x^2, y(x^2 - b)/x^2).

    The point at infinity and (0, 0) (the isogeny kernel) both map to the
    point at infinity of the isogenous curve.
    """
    if not is_on_curve(c, pt):
        raise ValueError(f"{pt} is not on {c}")
    if pt is None:
        return None
    x, y = _as_fraction_point(pt)
    if x == 0:
        return None
    image = (y * y / (x * x), y * (x * x - c.b) / (x * x))
    if not is_on_curve(isogenous(c), image):  # pragma: no cover
        raise AssertionError("isogeny image fails the curve equation")
    return image

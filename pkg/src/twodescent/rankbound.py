"""Descent images on both sides of the 2-isogeny and the rank interval
they prove.

With G the image of the descent map on the curve and Gbar the image on the
isogenous curve, the Mordell-Weil rank r satisfies |G| * |Gbar| = 2^(r+2).
Confirmed subgroups give the lower bound; the surviving candidate classes,
rounded down to a power of two, give the upper bound.  The two bounds meet
exactly when every candidate class is either confirmed by an integer
solution or killed by a local obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Literal

from .descent import (
    Curve,
    ObstructedAt,
    Solved,
    Unresolved,
    Verdict,
    default_moduli,
    divisor_class_candidates,
    global_search,
    isogenous,
    local_scan,
    torsor_factorizations,
)
from .intmath import squarefree_class

__all__ = [
    "DescentConfig",
    "DescentImage",
    "RankInterval",
    "QuadraticRankInterval",
    "class_mul",
    "subgroup_span",
    "descent_image",
    "rank_interval",
    "twist",
    "rank_over_quadratic",
]

Side = Literal["alpha", "alpha_bar"]


@dataclass(frozen=True)
class DescentConfig:
    search_bound: int = 1024
    small_prime_bound: int = 50
    extra_moduli: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.search_bound < 1:
            raise ValueError("search_bound must be >= 1")


def class_mul(c1: int, c2: int) -> int:
    """Product of two squarefree classes, reduced to a squarefree class."""
    g = gcd(c1, c2)
    return (c1 * c2) // (g * g)


def subgroup_span(classes: set[int]) -> frozenset[int]:
    """Closure of a set of squarefree classes under class multiplication."""
    span = {1} | set(classes)
    frontier = list(span)
    while frontier:
        c = frontier.pop()
        for d in list(span):
            cd = class_mul(c, d)
            if cd not in span:
                span.add(cd)
                frontier.append(cd)
    return frozenset(span)


def is_class_subgroup(classes: frozenset[int]) -> bool:
    return 1 in classes and all(
        class_mul(c, d) in classes for c in classes for d in classes
    )


@dataclass(frozen=True)
class DescentImage:
    """Outcome of sieving one descent map.

    ``confirmed`` is a subgroup proven inside the image; ``possible`` is a
    superset of the image (candidate classes not yet ruled out).  Evidence
    holds one verdict per torsor factorization of each sieved class;
    ``closure_exclusions`` records classes ruled out indirectly, as
    (excluded class, confirmed class) pairs whose product they are.
    """

    side: Side
    coefficient: int
    confirmed: frozenset[int]
    possible: frozenset[int]
    evidence: dict[int, tuple[Verdict, ...]] = field(repr=False)
    closure_exclusions: dict[int, tuple[int, int]] = field(repr=False)

    def solved_witnesses(self) -> list[Solved]:
        out = []
        for cls in sorted(self.evidence, key=lambda c: (abs(c), c)):
            out.extend(v for v in self.evidence[cls] if isinstance(v, Solved))
        return out


def _descent_coefficients(c: Curve, side: Side) -> tuple[int, int]:
    # (coefficient whose divisors are sieved, middle quartic coefficient)
    if side == "alpha":
        return c.b, c.a
    if side == "alpha_bar":
        bar = isogenous(c)
        return bar.b, bar.a
    raise ValueError(f"unknown side {side!r}")


def descent_image(c: Curve, side: Side, cfg: DescentConfig) -> DescentImage:
    """Sieve every candidate divisor class of one descent map.

    Class 1 and the class of the coefficient are in the image by
    construction (the point at infinity and (0, 0)), so their torsors are
    never sieved.  Every other class is confirmed when some factorization
    has a primitive solution, and excluded when every factorization is
    locally obstructed.  Confirmed classes are completed to the subgroup
    they span; exclusion then propagates through the group structure
    (d excluded and c confirmed forces d*c excluded) until a fixed point.
    """
    coefficient, middle = _descent_coefficients(c, side)
    candidates = divisor_class_candidates(coefficient)
    trivial = {1, squarefree_class(coefficient)}

    confirmed: set[int] = set(trivial)
    obstructed: set[int] = set()
    evidence: dict[int, tuple[Verdict, ...]] = {}
    for cls in sorted(candidates, key=lambda d: (abs(d), d)):
        if cls in trivial:
            evidence[cls] = ()
            continue
        verdicts: list[Verdict] = []
        for t in torsor_factorizations(coefficient, cls, middle):
            modulus = local_scan(
                t, default_moduli(t, cfg.small_prime_bound, cfg.extra_moduli)
            )
            if modulus is not None:
                verdicts.append(ObstructedAt(t, modulus))
                continue
            triple = global_search(t, cfg.search_bound)
            if triple is not None:
                verdicts.append(Solved(t, triple))
            else:
                verdicts.append(Unresolved(t, cfg.search_bound))
        evidence[cls] = tuple(verdicts)
        if any(isinstance(v, Solved) for v in verdicts):
            confirmed.add(cls)
        elif all(isinstance(v, ObstructedAt) for v in verdicts):
            obstructed.add(cls)

    confirmed_span = subgroup_span(confirmed)
    if confirmed_span & obstructed:
        raise RuntimeError(
            f"sieve inconsistency: {sorted(confirmed_span & obstructed)} both "
            "confirmed and obstructed"
        )

    excluded: dict[int, tuple[int, int] | None] = {d: None for d in obstructed}
    changed = True
    while changed:
        changed = False
        for d in sorted(excluded):
            for cc in sorted(confirmed_span):
                dc = class_mul(d, cc)
                if dc not in candidates or dc in excluded:
                    continue
                if dc in confirmed_span:
                    raise RuntimeError(
                        f"sieve inconsistency: {dc} is confirmed but is the "
                        f"product of the excluded class {d} and {cc}"
                    )
                excluded[dc] = (d, cc)
                changed = True

    possible = frozenset(candidates - excluded.keys())
    return DescentImage(
        side=side,
        coefficient=coefficient,
        confirmed=confirmed_span,
        possible=possible,
        evidence=evidence,
        closure_exclusions={d: w for d, w in excluded.items() if w is not None},
    )


@dataclass(frozen=True)
class RankInterval:
    """Proven bounds lower <= rank <= upper with the images as evidence."""

    lower: int
    upper: int
    image_e: DescentImage
    image_ebar: DescentImage


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def rank_interval(c: Curve, cfg: DescentConfig = DescentConfig()) -> RankInterval:
    """Run both descent maps and apply |G| * |Gbar| = 2^(r+2)."""
    img_e = descent_image(c, "alpha", cfg)
    img_ebar = descent_image(c, "alpha_bar", cfg)
    for img in (img_e, img_ebar):
        if not is_class_subgroup(img.confirmed):
            raise RuntimeError(f"confirmed classes on {img.side} not a subgroup")
        if len(img.confirmed) & (len(img.confirmed) - 1):
            raise RuntimeError(f"|confirmed| on {img.side} not a power of 2")
    lower = _floor_log2(len(img_e.confirmed) * len(img_ebar.confirmed)) - 2
    # the true image is a subgroup, so its order is the largest power of 2
    # not exceeding the surviving candidate count
    upper = _floor_log2(len(img_e.possible)) + _floor_log2(len(img_ebar.possible)) - 2
    return RankInterval(max(0, lower), max(0, upper), img_e, img_ebar)


def twist(c: Curve, m: int) -> Curve:
    """The quadratic twist y^2 = x^3 + m*a*x^2 + m^2*b*x by squarefree m."""
    if m == 0:
        raise ValueError("twist parameter must be nonzero")
    if squarefree_class(m) != m:
        raise ValueError(f"twist parameter {m} is not squarefree")
    return Curve(m * c.a, m * m * c.b)


@dataclass(frozen=True)
class QuadraticRankInterval:
    """Rank bounds over Q(sqrt(m)): the sum of the bounds for the curve and
    its m-twist over Q."""

    m: int
    lower: int
    upper: int
    base: RankInterval
    twisted: RankInterval


def rank_over_quadratic(
    c: Curve, m: int, cfg: DescentConfig = DescentConfig()
) -> QuadraticRankInterval:
    base = rank_interval(c, cfg)
    twisted = rank_interval(twist(c, m), cfg)
    return QuadraticRankInterval(
        m=m,
        lower=base.lower + twisted.lower,
        upper=base.upper + twisted.upper,
        base=base,
        twisted=twisted,
    )

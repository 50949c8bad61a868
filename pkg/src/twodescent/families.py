"""Congruence families of primes for the curves y^2 = x^3 - 5*p*x, their
predicted ranks over Q and Q(i), and verification against computed bounds.

Family membership is decided by exact congruence and perfect-square tests;
the families are pairwise disjoint by congruence class mod 40 (31 mod 80
refines 31 mod 40), so the match order only matters defensively.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .descent import Curve
from .intmath import is_prime, perfect_square_root, primes_up_to
from .rankbound import DescentConfig, RankInterval, rank_interval

__all__ = [
    "FamilyTag",
    "FamilyClass",
    "PredictionKind",
    "RankClaim",
    "Prediction",
    "classify_prime",
    "predicted_rank",
    "scan",
    "VerifyReport",
    "verify",
    "claim_consistent",
    "curve_for_prime",
]


class FamilyTag(enum.Enum):
    RANK_ZERO = "rank-zero"  # p = 7, 23 (mod 40): rank exactly 0
    RANK_ONE_40K3 = "rank-one-40k3"  # p = 40k+3, 5k+1 a square: rank 1
    RANK_ONE_40K27 = "rank-one-40k27"  # p = 40k+27, 5k+4 a square: rank 1
    AT_LEAST_ONE_40K11 = "at-least-one-40k11"  # p = 40k+11, 160k+49 a square
    AT_LEAST_ONE_40K19 = "at-least-one-40k19"  # p = 40k+19, 160k+81 a square
    CONJECTURED_TWO = "conjectured-two"  # p = 31 (mod 80): rank 2, unproven
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class FamilyClass:
    tag: FamilyTag
    p: int
    k: int | None = None
    root: int | None = None


def curve_for_prime(p: int) -> Curve:
    return Curve(0, -5 * p)


def classify_prime(p: int) -> FamilyClass:
    """First matching family for an odd prime, with the congruence
    parameter k and the verified square root of the defining quantity."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    r = p % 40
    if r in (7, 23):
        return FamilyClass(FamilyTag.RANK_ZERO, p)
    if r == 3:
        k = (p - 3) // 40
        root = perfect_square_root(5 * k + 1)
        if root is not None:
            return FamilyClass(FamilyTag.RANK_ONE_40K3, p, k, root)
    if r == 27:
        k = (p - 27) // 40
        root = perfect_square_root(5 * k + 4)
        if root is not None:
            return FamilyClass(FamilyTag.RANK_ONE_40K27, p, k, root)
    if r == 11:
        k = (p - 11) // 40
        root = perfect_square_root(160 * k + 49)
        if root is not None:
            return FamilyClass(FamilyTag.AT_LEAST_ONE_40K11, p, k, root)
    if r == 19:
        k = (p - 19) // 40
        root = perfect_square_root(160 * k + 81)
        if root is not None:
            return FamilyClass(FamilyTag.AT_LEAST_ONE_40K19, p, k, root)
    if p % 80 == 31:
        return FamilyClass(FamilyTag.CONJECTURED_TWO, p)
    return FamilyClass(FamilyTag.UNCLASSIFIED, p)


class PredictionKind(enum.Enum):
    EXACTLY = "exactly"
    AT_LEAST = "at-least"
    CONJECTURED = "conjectured"
    NONE = "none"


@dataclass(frozen=True)
class RankClaim:
    kind: PredictionKind
    value: int | None = None

    def describe(self) -> str:
        if self.kind is PredictionKind.NONE:
            return "none"
        return f"{self.kind.value} {self.value}"


@dataclass(frozen=True)
class Prediction:
    """Claimed rank over Q and over Q(i); the Q(i) claim doubles the Q one."""

    over_q: RankClaim
    over_qi: RankClaim


_CLAIMS: dict[FamilyTag, RankClaim] = {
    FamilyTag.RANK_ZERO: RankClaim(PredictionKind.EXACTLY, 0),
    FamilyTag.RANK_ONE_40K3: RankClaim(PredictionKind.EXACTLY, 1),
    FamilyTag.RANK_ONE_40K27: RankClaim(PredictionKind.EXACTLY, 1),
    FamilyTag.AT_LEAST_ONE_40K11: RankClaim(PredictionKind.AT_LEAST, 1),
    FamilyTag.AT_LEAST_ONE_40K19: RankClaim(PredictionKind.AT_LEAST, 1),
    FamilyTag.CONJECTURED_TWO: RankClaim(PredictionKind.CONJECTURED, 2),
    FamilyTag.UNCLASSIFIED: RankClaim(PredictionKind.NONE),
}


def predicted_rank(f: FamilyClass) -> Prediction:
    claim = _CLAIMS[f.tag]
    if claim.kind is PredictionKind.NONE:
        return Prediction(claim, claim)
    return Prediction(claim, RankClaim(claim.kind, 2 * claim.value))


Selector = FamilyTag | tuple[str, int]


def scan(selector: Selector, limit: int) -> list[tuple[int, FamilyClass, Prediction]]:
    """All matching primes up to the limit, increasing, with classification.

    The selector is either a family tag or a congruence constraint
    ("mod40", r) / ("mod80", r).
    """
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if isinstance(selector, FamilyTag):
        matches = lambda fam: fam.tag is selector  # noqa: E731
    elif (
        isinstance(selector, tuple)
        and len(selector) == 2
        and selector[0] in ("mod40", "mod80")
    ):
        modulus = 40 if selector[0] == "mod40" else 80
        residue = selector[1] % modulus
        matches = lambda fam: fam.p % modulus == residue  # noqa: E731
    else:
        raise ValueError(f"unknown scan selector {selector!r}")
    out = []
    for p in primes_up_to(limit):
        if p == 2:
            continue
        fam = classify_prime(p)
        if matches(fam):
            out.append((p, fam, predicted_rank(fam)))
    return out


@dataclass(frozen=True)
class VerifyReport:
    p: int
    family: FamilyClass
    prediction: Prediction
    interval: RankInterval
    status: str  # "CONSISTENT" | "INCONSISTENT"
    note: str = ""


def claim_consistent(claim: RankClaim, lower: int, upper: int) -> bool:
    """Whether a computed interval is compatible with one rank claim."""
    if claim.kind is PredictionKind.EXACTLY:
        return lower == claim.value == upper
    if claim.kind is PredictionKind.AT_LEAST:
        return lower >= claim.value
    if claim.kind is PredictionKind.CONJECTURED:
        return lower >= claim.value
    return True


def verify(p: int, cfg: DescentConfig = DescentConfig()) -> VerifyReport:
    """Compare the family prediction for p with the computed rank interval."""
    fam = classify_prime(p)
    prediction = predicted_rank(fam)
    interval = rank_interval(curve_for_prime(p), cfg)
    ok = claim_consistent(prediction.over_q, interval.lower, interval.upper)
    note = ""
    if prediction.over_q.kind is PredictionKind.CONJECTURED and ok:
        if interval.upper > prediction.over_q.value:
            note = "conjecture support only: upper bound not closed"
        else:
            note = "conjecture support"
    return VerifyReport(
        p=p,
        family=fam,
        prediction=prediction,
        interval=interval,
        status="CONSISTENT" if ok else "INCONSISTENT",
        note=note,
    )

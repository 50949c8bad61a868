"""Rank bounds for elliptic curves y^2 = x^3 + a*x^2 + b*x over Q, by
descent across the 2-isogeny to Y^2 = X^3 - 2a*X^2 + (a^2 - 4b)*X.

The package sieves the quartic torsors attached to divisor classes of b and
a^2 - 4b with congruence obstructions, searches the survivors for primitive
integer solutions, and turns the confirmed and surviving classes into a
proven interval around the Mordell-Weil rank.  A family layer classifies
primes p by congruence conditions for the curves y^2 = x^3 - 5*p*x and
checks the predicted ranks over Q and Q(i) against the computed bounds.
"""

from .descent import (
    Curve,
    ObstructedAt,
    TorsorSolution,
    Solved,
    TorsorProblem,
    Unresolved,
    apply_isogeny,
    divisor_class_candidates,
    global_search,
    isogenous,
    local_obstruction,
    local_scan,
    make_curve,
    solution_to_point,
    torsor_factorizations,
)
from .families import (
    FamilyClass,
    FamilyTag,
    Prediction,
    classify_prime,
    predicted_rank,
    scan,
    verify,
)
from .intmath import (
    Factorization,
    factorize,
    gcd,
    is_perfect_square,
    is_prime,
    isqrt,
    jacobi,
    squarefree_class,
)
from .rankbound import (
    DescentConfig,
    DescentImage,
    QuadraticRankInterval,
    RankInterval,
    descent_image,
    rank_interval,
    rank_over_quadratic,
    twist,
)

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "make_curve",
    "isogenous",
    "TorsorProblem",
    "TorsorSolution",
    "ObstructedAt",
    "Solved",
    "Unresolved",
    "divisor_class_candidates",
    "torsor_factorizations",
    "local_obstruction",
    "local_scan",
    "global_search",
    "solution_to_point",
    "apply_isogeny",
    "DescentConfig",
    "DescentImage",
    "RankInterval",
    "QuadraticRankInterval",
    "descent_image",
    "rank_interval",
    "twist",
    "rank_over_quadratic",
    "FamilyTag",
    "FamilyClass",
    "Prediction",
    "classify_prime",
    "predicted_rank",
    "scan",
    "verify",
    "gcd",
    "isqrt",
    "is_perfect_square",
    "jacobi",
    "is_prime",
    "Factorization",
    "factorize",
    "squarefree_class",
    "__version__",
]

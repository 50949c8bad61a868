import pytest

from twodescent.descent import Curve, Solved, TorsorProblem, TorsorSolution
from twodescent.rankbound import (
    DescentConfig,
    class_mul,
    descent_image,
    is_class_subgroup,
    rank_interval,
    rank_over_quadratic,
    subgroup_span,
    twist,
)

CFG = DescentConfig()


def test_class_mul():
    assert class_mul(5, 7) == 35
    assert class_mul(5, 35) == 7
    assert class_mul(-5, -35) == 7
    assert class_mul(6, 10) == 15
    assert class_mul(1, -15) == -15
    assert class_mul(-15, -15) == 1


def test_subgroup_span():
    assert subgroup_span({15, 6}) == frozenset({1, 15, 6, 10})
    assert subgroup_span(set()) == frozenset({1})
    assert is_class_subgroup(frozenset({1, 15, 6, 10}))
    assert not is_class_subgroup(frozenset({1, 6, 15}))


class TestDescentImage:
    def test_rank_zero_curve_both_sides(self):
        img = descent_image(Curve(0, -35), "alpha", CFG)
        assert img.confirmed == frozenset({1, -35})
        assert img.possible == frozenset({1, -35})
        img = descent_image(Curve(0, -35), "alpha_bar", CFG)
        assert img.coefficient == 140
        assert img.confirmed == frozenset({1, 35})
        assert img.possible == frozenset({1, 35})

    def test_rank_one_curve_isogenous_side(self):
        img = descent_image(Curve(0, -15), "alpha_bar", CFG)
        assert img.confirmed == frozenset({1, 15, 6, 10})
        assert img.possible == frozenset({1, 15, 6, 10})
        solved = {v.torsor.b1: v.triple for v in img.solved_witnesses()}
        assert solved[6] == TorsorSolution(4, 1, 1)

    def test_structural_invariants(self):
        from twodescent.descent import divisor_class_candidates
        from twodescent.intmath import squarefree_class

        for p in (7, 3, 11, 31):
            for side in ("alpha", "alpha_bar"):
                img = descent_image(Curve(0, -5 * p), side, CFG)
                cands = divisor_class_candidates(img.coefficient)
                assert {1, squarefree_class(img.coefficient)} <= img.confirmed
                assert img.confirmed <= img.possible <= cands
                assert is_class_subgroup(img.confirmed)
                assert len(img.confirmed) & (len(img.confirmed) - 1) == 0

    def test_confirmed_classes_carry_validating_witnesses(self):
        from twodescent.intmath import squarefree_class

        img = descent_image(Curve(0, -155), "alpha", CFG)
        trivial = {1, squarefree_class(img.coefficient)}
        for cls in img.confirmed - trivial:
            if cls not in img.evidence or not any(
                isinstance(v, Solved) for v in img.evidence[cls]
            ):
                # confirmed through group closure
                continue
            for v in img.evidence[cls]:
                if isinstance(v, Solved):
                    assert v.triple.satisfies(v.torsor)

    def test_exclusions_justified(self):
        from twodescent.descent import ObstructedAt, divisor_class_candidates

        for side in ("alpha", "alpha_bar"):
            img = descent_image(Curve(0, -35), side, CFG)
            for cls in divisor_class_candidates(img.coefficient) - img.possible:
                directly = cls in img.evidence and img.evidence[cls] and all(
                    isinstance(v, ObstructedAt) for v in img.evidence[cls]
                )
                via_closure = cls in img.closure_exclusions
                assert directly or via_closure, (side, cls)
                if via_closure:
                    d, c = img.closure_exclusions[cls]
                    assert c in img.confirmed
                    assert class_mul(d, c) == cls


class TestRankInterval:
    def test_examples(self):
        assert (lambda iv: (iv.lower, iv.upper))(rank_interval(Curve(0, -35), CFG)) == (0, 0)
        assert (lambda iv: (iv.lower, iv.upper))(rank_interval(Curve(0, -15), CFG)) == (1, 1)
        iv = rank_interval(Curve(0, -155), CFG)
        assert iv.lower >= 2
        # the two solutions the bounded search is expected to uncover
        assert TorsorSolution(7, 2, 1).satisfies(TorsorProblem(5, 0, -31))
        assert TorsorSolution(23, 3, 1).satisfies(TorsorProblem(5, 0, 124))

    def test_prop_arithmetic(self):
        for p in (7, 3, 11, 31):
            iv = rank_interval(Curve(0, -5 * p), CFG)
            assert iv.lower <= iv.upper
            assert 4 * 2**iv.lower == len(iv.image_e.confirmed) * len(
                iv.image_ebar.confirmed
            )

    def test_search_bound_monotonicity(self):
        for p in (11, 31):
            lowers, uppers = [], []
            for bound in (8, 64, 1024):
                iv = rank_interval(Curve(0, -5 * p), DescentConfig(search_bound=bound))
                lowers.append(iv.lower)
                uppers.append(iv.upper)
            assert lowers == sorted(lowers)
            assert uppers == sorted(uppers, reverse=True)


class TestTwist:
    def test_examples(self):
        assert twist(Curve(0, -35), -1) == Curve(0, -35)
        assert twist(Curve(0, -35), 2) == Curve(0, -140)
        assert twist(Curve(1, 3), -1) == Curve(-1, 3)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            twist(Curve(0, -35), 12)
        with pytest.raises(ValueError):
            twist(Curve(0, -35), 0)


class TestRankOverQuadratic:
    def test_examples(self):
        r = rank_over_quadratic(Curve(0, -35), -1, CFG)
        assert (r.lower, r.upper) == (0, 0)
        r = rank_over_quadratic(Curve(0, -15), -1, CFG)
        assert (r.lower, r.upper) == (2, 2)
        r = rank_over_quadratic(Curve(0, -55), -1, CFG)
        assert r.lower >= 2

    def test_minus_one_doubles_when_a_is_zero(self):
        for p in (7, 3, 11):
            base = rank_interval(Curve(0, -5 * p), CFG)
            r = rank_over_quadratic(Curve(0, -5 * p), -1, CFG)
            assert (r.lower, r.upper) == (2 * base.lower, 2 * base.upper)

    def test_nontrivial_twist(self):
        r = rank_over_quadratic(Curve(0, -15), 2, CFG)
        assert r.lower == rank_interval(Curve(0, -15), CFG).lower + rank_interval(
            Curve(0, -60), CFG
        ).lower

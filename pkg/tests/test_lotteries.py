"""Tests for the two-source lottery core.

Frozen numeric cases were computed by hand (exact rational arithmetic) before
implementation.  Property sections check the algebraic identities that every
downstream module leans on: marginalization commutes with mixing, conditionals
reconstruct the joint, and products round-trip through their marginals.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracketlab.errors import (
    DomainViolation,
    EmptySupport,
    OutcomeNotInSupport,
    OutcomeOutOfBounds,
    ProbabilitySumOutOfTolerance,
    SourceMismatch,
    SpaceMismatch,
)
from bracketlab.lotteries import (
    Dominance,
    OutcomeSpace,
    REAL_PLANE,
    canonical,
    conditional,
    degenerate_joint,
    delta,
    dominance,
    fosd_strict,
    fosd_weak,
    is_product,
    make_joint,
    make_marginal,
    marginal,
    mix,
    mix_marginal,
    money_aggregate,
    product,
    shift_clamped,
)

TOL = 1e-12


def assert_same_pmf(p, q, tol=TOL):
    assert set(p.support) == set(q.support)
    for x in p.support:
        assert p.pmf(x) == pytest.approx(q.pmf(x), abs=tol)


def assert_same_joint(P, Q, tol=TOL):
    assert set(P.support) == set(Q.support)
    for xy in P.support:
        assert P.pmf(*xy) == pytest.approx(Q.pmf(*xy), abs=tol)


# ---------------------------------------------------------------------------
# Construction and normalization
# ---------------------------------------------------------------------------


class TestConstruction:
    def test_atoms_merge_and_sort(self):
        P = make_joint([(2.0, 0.0, 0.25), (1.0, 1.0, 0.5), (2.0, 0.0, 0.25)])
        assert P.entries == ((1.0, 1.0, 0.5), (2.0, 0.0, 0.5))

    def test_near_duplicate_outcomes_pool_at_twelve_significant_digits(self):
        P = make_joint([(1.0, 0.0, 0.5), (1.0 + 1e-15, 0.0, 0.5)])
        assert len(P.entries) == 1
        assert P.pmf(1.0, 0.0) == pytest.approx(1.0)

    def test_probabilities_renormalize_within_tolerance(self):
        P = make_joint([(0.0, 0.0, 0.5 + 2e-10), (1.0, 1.0, 0.5 + 2e-10)])
        assert sum(p for _, _, p in P.entries) == pytest.approx(1.0, abs=1e-15)

    def test_probability_sum_off_by_ten_percent_rejected(self):
        with pytest.raises(ProbabilitySumOutOfTolerance):
            make_joint([(0.0, 0.0, 0.4), (1.0, 1.0, 0.5)])

    def test_negative_probability_rejected(self):
        with pytest.raises(ProbabilitySumOutOfTolerance):
            make_joint([(0.0, 0.0, 1.2), (1.0, 1.0, -0.2)])

    def test_zero_mass_atoms_drop_but_empty_support_rejected(self):
        P = make_joint([(0.0, 0.0, 1.0), (5.0, 5.0, 0.0)])
        assert P.support == ((0.0, 0.0),)
        with pytest.raises(EmptySupport):
            make_joint([])

    def test_outcome_outside_space_rejected(self):
        box = OutcomeSpace(-1.0, 1.0, -1.0, 1.0)
        with pytest.raises(OutcomeOutOfBounds):
            make_joint([(2.0, 0.0, 1.0)], space=box)

    def test_space_must_contain_zero(self):
        with pytest.raises(DomainViolation):
            OutcomeSpace(1.0, 2.0, 0.0, 1.0)

    def test_degenerate_and_delta_builders(self):
        assert degenerate_joint(3.0, -2.0).entries == ((3.0, -2.0, 1.0),)
        d = delta(4.0, source=2)
        assert d.source == 2
        assert d.is_degenerate
        assert d.pmf(4.0) == 1.0


# ---------------------------------------------------------------------------
# Marginals, conditionals, products
# ---------------------------------------------------------------------------


class TestMarginalsAndConditionals:
    P = make_joint([(1.0, 10.0, 0.2), (1.0, 20.0, 0.3), (2.0, 10.0, 0.5)])

    def test_first_marginal(self):
        p1 = marginal(self.P, 1)
        assert p1.source == 1
        assert p1.pmf(1.0) == pytest.approx(0.5)
        assert p1.pmf(2.0) == pytest.approx(0.5)

    def test_second_marginal(self):
        p2 = marginal(self.P, 2)
        assert p2.pmf(10.0) == pytest.approx(0.7)
        assert p2.pmf(20.0) == pytest.approx(0.3)

    def test_conditional_on_first_source(self):
        q = conditional(self.P, 1, 1.0)
        assert q.source == 2
        assert q.pmf(10.0) == pytest.approx(0.4)
        assert q.pmf(20.0) == pytest.approx(0.6)

    def test_conditional_on_second_source(self):
        q = conditional(self.P, 2, 10.0)
        assert q.source == 1
        assert q.pmf(1.0) == pytest.approx(2.0 / 7.0)
        assert q.pmf(2.0) == pytest.approx(5.0 / 7.0)

    def test_conditional_outside_support_rejected(self):
        with pytest.raises(OutcomeNotInSupport):
            conditional(self.P, 1, 3.0)

    def test_product_lottery_and_detection(self):
        p = make_marginal([(0.0, 0.5), (1.0, 0.5)], source=1)
        q = make_marginal([(2.0, 0.3), (3.0, 0.7)], source=2)
        P = product(p, q)
        assert P.pmf(0.0, 2.0) == pytest.approx(0.15)
        assert P.pmf(1.0, 3.0) == pytest.approx(0.35)
        assert is_product(P)

    def test_product_requires_one_marginal_per_source(self):
        p = make_marginal([(0.0, 1.0)], source=1)
        with pytest.raises(SourceMismatch):
            product(p, p)

    def test_correlated_lottery_is_not_a_product(self):
        P = make_joint([(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)])
        assert not is_product(P)


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------


class TestMixtures:
    def test_mix_frozen_case(self):
        P = degenerate_joint(1.0, 2.0)
        Q = make_joint([(5.0, 6.0, 0.5), (9.0, 9.0, 0.5)])
        M = mix(0.5, P, Q)
        assert M.pmf(1.0, 2.0) == pytest.approx(0.5)
        assert M.pmf(5.0, 6.0) == pytest.approx(0.25)
        assert M.pmf(9.0, 9.0) == pytest.approx(0.25)

    def test_mix_endpoints_return_components(self):
        P = degenerate_joint(1.0, 2.0)
        Q = degenerate_joint(3.0, 4.0)
        assert_same_joint(mix(1.0, P, Q), P)
        assert_same_joint(mix(0.0, P, Q), Q)

    def test_mix_weight_outside_unit_interval_rejected(self):
        P = degenerate_joint(0.0, 0.0)
        with pytest.raises(DomainViolation):
            mix(1.5, P, P)

    def test_mix_spaces_must_agree(self):
        P = degenerate_joint(0.0, 0.0, space=OutcomeSpace(0.0, 10.0, 0.0, 10.0))
        Q = degenerate_joint(0.0, 0.0)
        with pytest.raises(SpaceMismatch):
            mix(0.5, P, Q)

    def test_marginal_mix_sources_must_agree(self):
        p = delta(0.0, source=1)
        q = delta(0.0, source=2)
        with pytest.raises(SourceMismatch):
            mix_marginal(0.5, p, q)


# ---------------------------------------------------------------------------
# Shifts and dominance
# ---------------------------------------------------------------------------


class TestShiftClamped:
    BOX = OutcomeSpace(0.0, 10.0, 0.0, 10.0)

    def test_shift_clamps_at_upper_bound(self):
        P = make_joint([(10.0, 1.0, 0.5), (5.0, 3.0, 0.5)], space=self.BOX)
        S = shift_clamped(P, 2.0, 1.0)
        assert S.pmf(10.0, 2.0) == pytest.approx(0.5)
        assert S.pmf(7.0, 4.0) == pytest.approx(0.5)

    def test_clamping_can_pool_atoms(self):
        P = make_joint([(10.0, 1.0, 0.5), (9.0, 1.0, 0.5)], space=self.BOX)
        S = shift_clamped(P, 2.0, 0.0)
        assert S.entries == ((10.0, 1.0, 1.0),)

    def test_negative_shift_rejected(self):
        P = degenerate_joint(0.0, 0.0, space=self.BOX)
        with pytest.raises(DomainViolation):
            shift_clamped(P, -1.0, 0.0)

    def test_unbounded_space_never_clamps(self):
        P = degenerate_joint(3.0, 4.0)
        S = shift_clamped(P, 100.0, 200.0)
        assert S.entries == ((103.0, 204.0, 1.0),)


class TestDominance:
    P = make_joint([(1.0, 1.0, 0.5), (2.0, 3.0, 0.5)])

    def test_dominates_strictly_lower_point(self):
        assert dominance(self.P, 0.0, 0.0) is Dominance.DominatesPoint

    def test_dominated_by_strictly_higher_point(self):
        assert dominance(self.P, 5.0, 5.0) is Dominance.DominatedByPoint

    def test_incomparable_point(self):
        assert dominance(self.P, 1.0, 2.0) is Dominance.Neither

    def test_equal_degenerate_lottery_is_neither(self):
        assert dominance(degenerate_joint(1.0, 1.0), 1.0, 1.0) is Dominance.Neither

    def test_weak_inequality_with_some_slack_still_dominates(self):
        Q = make_joint([(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)])
        assert dominance(Q, 0.0, 0.0) is Dominance.DominatesPoint


# ---------------------------------------------------------------------------
# First-order stochastic dominance
# ---------------------------------------------------------------------------


class TestFosd:
    def test_certain_vs_shifted_pair(self):
        # 1/4 at 2.5, 3/4 at -7.5 sits strictly above 1/4 at 2.4, 3/4 at -7.6.
        hi = make_marginal([(2.5, 0.25), (-7.5, 0.75)], source=1)
        lo = make_marginal([(2.4, 0.25), (-7.6, 0.75)], source=1)
        assert fosd_weak(hi, lo)
        assert fosd_strict(hi, lo)
        assert not fosd_weak(lo, hi)

    def test_weak_dominance_is_reflexive(self):
        p = make_marginal([(0.0, 0.5), (1.0, 0.5)], source=1)
        assert fosd_weak(p, p)
        assert not fosd_strict(p, p)

    def test_crossing_distributions_do_not_dominate(self):
        p = make_marginal([(0.0, 0.5), (3.0, 0.5)], source=1)
        q = make_marginal([(1.0, 0.5), (2.0, 0.5)], source=1)
        assert not fosd_weak(p, q)
        assert not fosd_weak(q, p)

    def test_sources_must_agree(self):
        p = delta(0.0, source=1)
        q = delta(0.0, source=2)
        with pytest.raises(SourceMismatch):
            fosd_weak(p, q)


# ---------------------------------------------------------------------------
# Money aggregation
# ---------------------------------------------------------------------------


class TestMoneyAggregate:
    def test_sums_pool_across_atoms(self):
        P = make_joint([(1.0, 2.0, 0.5), (2.0, 1.0, 0.5)])
        m = money_aggregate(P)
        assert m.entries == ((3.0, 1.0),)

    def test_distinct_sums_stay_distinct(self):
        P = make_joint([(1.0, 0.0, 0.25), (0.0, 2.0, 0.75)])
        m = money_aggregate(P)
        assert m.pmf(1.0) == pytest.approx(0.25)
        assert m.pmf(2.0) == pytest.approx(0.75)

    def test_bounds_add(self):
        box = OutcomeSpace(-1.0, 4.0, 0.0, 6.0)
        m = money_aggregate(degenerate_joint(0.0, 0.0, space=box))
        assert (m.lo, m.hi) == (-1.0, 10.0)


# ---------------------------------------------------------------------------
# Canonical rounding
# ---------------------------------------------------------------------------


class TestCanonical:
    def test_keeps_twelve_significant_digits(self):
        assert canonical(123456.789012345) == 123456.789012
        assert canonical(1.234567890123456e-5) == 1.23456789012e-5

    def test_zero_and_infinities_pass_through(self):
        assert canonical(0.0) == 0.0
        assert canonical(math.inf) == math.inf
        assert canonical(-math.inf) == -math.inf

    def test_sign_symmetry(self):
        assert canonical(-123456.789012345) == -canonical(123456.789012345)


# ---------------------------------------------------------------------------
# Property-based checks
# ---------------------------------------------------------------------------

outcome_grid = st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0])
weight = st.integers(min_value=1, max_value=9)


@st.composite
def joint_lotteries(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    atoms = draw(
        st.lists(st.tuples(outcome_grid, outcome_grid, weight), min_size=n, max_size=n)
    )
    total = sum(w for _, _, w in atoms)
    return make_joint([(x, y, w / total) for x, y, w in atoms])


@st.composite
def marginal_lotteries(draw, source=1):
    n = draw(st.integers(min_value=1, max_value=5))
    atoms = draw(st.lists(st.tuples(outcome_grid, weight), min_size=n, max_size=n))
    total = sum(w for _, w in atoms)
    return make_marginal([(x, w / total) for x, w in atoms], source=source)


class TestAlgebraProperties:
    @given(joint_lotteries(), joint_lotteries(), st.floats(0.0, 1.0))
    @settings(max_examples=150, deadline=None)
    def test_marginalization_commutes_with_mixing(self, P, Q, alpha):
        for i in (1, 2):
            left = marginal(mix(alpha, P, Q), i)
            right = mix_marginal(alpha, marginal(P, i), marginal(Q, i))
            assert_same_pmf(left, right, tol=1e-9)

    @given(joint_lotteries())
    @settings(max_examples=150, deadline=None)
    def test_conditionals_reconstruct_the_joint(self, P):
        p1 = marginal(P, 1)
        for x, px in p1.entries:
            q = conditional(P, 1, x)
            for y, qy in q.entries:
                assert P.pmf(x, y) == pytest.approx(px * qy, abs=1e-12)

    @given(marginal_lotteries(source=1), marginal_lotteries(source=2))
    @settings(max_examples=150, deadline=None)
    def test_product_round_trips_through_marginals(self, p, q):
        P = product(p, q)
        assert is_product(P)
        assert_same_pmf(marginal(P, 1), p, tol=1e-12)
        assert_same_pmf(marginal(P, 2), q, tol=1e-12)

    @given(joint_lotteries(), st.floats(0.0, 2.0), st.floats(0.0, 2.0))
    @settings(max_examples=100, deadline=None)
    def test_shift_preserves_total_mass(self, P, a1, a2):
        S = shift_clamped(P, a1, a2)
        assert sum(p for _, _, p in S.entries) == pytest.approx(1.0, abs=1e-12)

    @given(marginal_lotteries(), st.floats(0.25, 2.0), st.floats(0.25, 2.0))
    @settings(max_examples=100, deadline=None)
    def test_upward_shift_chains_are_transitively_dominant(self, p, a, b):
        q = make_marginal([(x + a, w) for x, w in p.entries], source=p.source)
        r = make_marginal([(x + b, w) for x, w in q.entries], source=p.source)
        assert fosd_strict(q, p)
        assert fosd_strict(r, q)
        assert fosd_strict(r, p)

    @given(joint_lotteries())
    @settings(max_examples=100, deadline=None)
    def test_money_aggregate_mass_matches(self, P):
        m = money_aggregate(P)
        assert sum(w for _, w in m.entries) == pytest.approx(1.0, abs=1e-12)
        mean_direct = sum(p * (x + y) for x, y, p in P.entries)
        mean_agg = sum(w * z for z, w in m.entries)
        assert mean_agg == pytest.approx(mean_direct, abs=1e-9)

"""Tests for the preference representations.

Every frozen number below was produced by an independent 40-digit oracle
before this package's implementation ran.  The property section pins the
structural identities the representations must satisfy: mixture linearity
for the joint-law families, collapse of the branch-wise rules to their
correlation-neglect versions on product lotteries, and the reduction of the
curved families to the linear ones at identity curvature.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracketlab.errors import (
    DegenerateParameters,
    DomainViolation,
    NonProductLottery,
)
from bracketlab.indices import (
    AdditiveBivariate,
    Linear,
    LossAverseSqrt,
    Power,
    SumBivariate,
    TabulatedGridBivariate,
)
from bracketlab.models import (
    BIB,
    BIBCN,
    CRRACESKMBIB,
    EDU,
    EU,
    EUCN,
    FIB,
    FIBCN,
    GBIBCN,
    GFIBCN,
    KM,
    KMBIB,
    NB,
    LambdaMix,
    OpenSet1D,
    Preference,
    Relation,
    compare,
    evaluate,
    validate_model,
)
from bracketlab.lotteries import (
    degenerate_joint,
    delta,
    make_joint,
    make_marginal,
    marginal,
    mix,
    product,
)

TOL = 1e-12

SQRT = Power(0.5)
GRID_AXES = tuple(float(t) for t in range(0, 11))
W_CROSS = TabulatedGridBivariate.from_function(lambda x, y: x * y + x + y, GRID_AXES, GRID_AXES)
W_SUM_LA = SumBivariate(LossAverseSqrt(2.0))
W_ADD = AdditiveBivariate(Linear(), Linear())

# correlated two-atom lottery used across the branch-collapse cases
P_CORR = make_joint([(0.0, 4.0, 0.5), (1.0, 9.0, 0.5)])


# ---------------------------------------------------------------------------
# Joint-law families
# ---------------------------------------------------------------------------


class TestEUAndEUCN:
    P = make_joint([(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)])

    def test_eu_sees_the_correlation(self):
        assert evaluate(EU(W_CROSS), self.P) == pytest.approx(1.5, abs=TOL)

    def test_eucn_sees_only_the_marginals(self):
        assert evaluate(EUCN(W_CROSS), self.P) == pytest.approx(1.25, abs=TOL)

    def test_both_agree_on_degenerate_lotteries(self):
        D = degenerate_joint(2.0, 3.0)
        assert evaluate(EU(W_CROSS), D) == pytest.approx(evaluate(EUCN(W_CROSS), D), abs=TOL)
        assert evaluate(EU(W_CROSS), D) == pytest.approx(11.0, abs=TOL)


class TestBranchCollapseFamilies:
    def test_bib_collapses_risk_branch_by_branch(self):
        w = AdditiveBivariate(Linear(), Power(2.0))
        assert evaluate(BIB(w, v2=SQRT), P_CORR) == pytest.approx(49.0, abs=TOL)

    def test_bibcn_collapses_the_marginal_instead(self):
        w = AdditiveBivariate(Linear(), Power(2.0))
        # CE of (1/2 d4 + 1/2 d9) under sqrt is 6.25
        assert evaluate(BIBCN(w, v2=SQRT), P_CORR) == pytest.approx(39.5625, abs=TOL)

    def test_nb_with_linear_first_index_matches_bibcn_for_additive_w(self):
        w = AdditiveBivariate(Linear(), Power(2.0))
        nb = NB(w, v1=Linear(), v2=SQRT)
        assert evaluate(nb, P_CORR) == pytest.approx(39.5625, abs=TOL)

    def test_fib_mirrors_bib(self):
        P = make_joint([(4.0, 0.0, 0.5), (9.0, 1.0, 0.5)])
        w = AdditiveBivariate(Power(2.0), Linear())
        assert evaluate(FIB(w, v1=SQRT), P) == pytest.approx(49.0, abs=TOL)

    def test_fibcn_mirrors_bibcn(self):
        P = make_joint([(4.0, 0.0, 0.5), (9.0, 1.0, 0.5)])
        w = AdditiveBivariate(Power(2.0), Linear())
        assert evaluate(FIBCN(w, v1=SQRT), P) == pytest.approx(39.5625, abs=TOL)


class TestRegionSwitching:
    MODEL_IN = GBIBCN(W_CROSS, v1=SQRT, v2=SQRT, H2=OpenSet1D(((5.0, 7.0),)))
    MODEL_OUT = GBIBCN(W_CROSS, v1=SQRT, v2=SQRT, H2=OpenSet1D(((8.0, 9.0),)))

    def test_inside_region_uses_branch_rule(self):
        # CE2 = 6.25 lies in (5, 7): V = mean of w(x, 6.25) = mean of 7.25x + 6.25
        assert evaluate(self.MODEL_IN, P_CORR) == pytest.approx(9.875, abs=TOL)

    def test_outside_region_uses_narrow_rule(self):
        # CE1 = 0.25 under sqrt: w(0.25, 6.25) = 0.25*6.25 + 0.25 + 6.25
        assert evaluate(self.MODEL_OUT, P_CORR) == pytest.approx(8.0625, abs=TOL)

    def test_empty_region_reduces_to_nb(self):
        empty = GBIBCN(W_CROSS, v1=SQRT, v2=SQRT)
        nb = NB(W_CROSS, v1=SQRT, v2=SQRT)
        assert evaluate(empty, P_CORR) == pytest.approx(evaluate(nb, P_CORR), abs=TOL)

    def test_mirrored_family_switches_on_source_one(self):
        P = make_joint([(4.0, 0.0, 0.5), (9.0, 1.0, 0.5)])
        w = TabulatedGridBivariate.from_function(
            lambda x, y: x * y + x + y, GRID_AXES, GRID_AXES
        )
        inside = GFIBCN(w, v1=SQRT, v2=SQRT, H1=OpenSet1D(((5.0, 7.0),)))
        outside = GFIBCN(w, v1=SQRT, v2=SQRT, H1=OpenSet1D(((8.0, 9.0),)))
        assert evaluate(inside, P) == pytest.approx(9.875, abs=TOL)
        assert evaluate(outside, P) == pytest.approx(8.0625, abs=TOL)


class TestOpenSet1D:
    def test_membership_is_strict(self):
        H = OpenSet1D(((1.0, 2.0), (3.0, 4.0)))
        assert H.contains(1.5)
        assert not H.contains(1.0)
        assert not H.contains(2.0)
        assert H.boundary() == (1.0, 2.0, 3.0, 4.0)

    def test_zero_must_stay_outside(self):
        with pytest.raises(DegenerateParameters):
            OpenSet1D(((-1.0, 1.0),))
        # touching zero at an endpoint is fine, membership being strict
        assert not OpenSet1D(((0.0, 1.0),)).contains(0.0)

    def test_overlapping_intervals_rejected(self):
        with pytest.raises(DegenerateParameters):
            OpenSet1D(((1.0, 3.0), (2.0, 4.0)))

    def test_empty_region(self):
        H = OpenSet1D()
        assert H.is_empty
        assert not H.contains(0.5)
        assert H.boundary() == ()


# ---------------------------------------------------------------------------
# Two-period consumption families
# ---------------------------------------------------------------------------


class TestTimeFamilies:
    def test_edu_value(self):
        P = make_joint([(1.0, 4.0, 0.5), (4.0, 9.0, 0.5)])
        # E sqrt(c1) = 1.5, E sqrt(c2) = 2.5
        assert evaluate(EDU(SQRT, beta=0.5), P) == pytest.approx(2.75, abs=TOL)

    def test_km_frozen_value(self):
        P = make_joint([(4.0, 9.0, 0.5), (9.0, 4.0, 0.5)])
        model = KM(u=SQRT, beta=0.5, phi=Power(2.0))
        assert evaluate(model, P) == pytest.approx(6.2777777777777778, abs=1e-12)

    def test_kmbib_frozen_value(self):
        P = make_joint([(4.0, 4.0, 0.25), (4.0, 16.0, 0.25), (9.0, 25.0, 0.5)])
        model = KMBIB(u=SQRT, beta=0.5, phi=Power(4.0))
        assert evaluate(model, P) == pytest.approx(551.99901162511806, rel=1e-14)

    def test_kmbib_continuation_ce_uses_curved_utility(self):
        model = KMBIB(u=SQRT, beta=0.5, phi=Power(4.0))
        q = make_marginal([(4.0, 0.5), (16.0, 0.5)], source=2)
        # phi(u(y)) = y^2, so the CE is the root mean square: sqrt(136)
        assert model.continuation_ce(q) == pytest.approx(136.0**0.5, abs=1e-9)

    def test_beta_outside_unit_interval_rejected(self):
        with pytest.raises(DomainViolation):
            EDU(SQRT, beta=1.5)
        with pytest.raises(DomainViolation):
            KMBIB(u=SQRT, beta=-0.1, phi=Power(2.0))

    def test_ces_kmbib_frozen_values(self):
        model = CRRACESKMBIB(rho=0.5, alpha=-1.0, beta=0.5)
        assert evaluate(model, degenerate_joint(4.0, 9.0)) == pytest.approx(-0.16, abs=TOL)
        assert evaluate(model, degenerate_joint(9.0, 9.0)) == pytest.approx(
            -0.1111111111111111, abs=1e-12
        )

    def test_ces_kmbib_negative_alpha_stays_order_faithful(self):
        model = CRRACESKMBIB(rho=0.5, alpha=-1.0, beta=0.5)
        low = evaluate(model, degenerate_joint(4.0, 9.0))
        high = evaluate(model, degenerate_joint(9.0, 9.0))
        assert high > low

    def test_ces_kmbib_collapses_when_exponents_match(self):
        P = make_joint([(1.0, 4.0, 0.2), (1.0, 9.0, 0.3), (4.0, 4.0, 0.5)])
        model = CRRACESKMBIB(rho=0.5, alpha=0.5, beta=0.3)
        assert evaluate(model, P) == pytest.approx(1.74, abs=1e-12)

    def test_ces_kmbib_parameter_and_domain_guards(self):
        with pytest.raises(DomainViolation):
            CRRACESKMBIB(rho=0.0, alpha=0.5, beta=0.5)
        with pytest.raises(DomainViolation):
            CRRACESKMBIB(rho=0.5, alpha=1.0, beta=0.5)
        model = CRRACESKMBIB(rho=0.5, alpha=0.5, beta=0.5)
        with pytest.raises(DomainViolation):
            evaluate(model, degenerate_joint(0.0, 1.0))

    def test_lambda_mix_frozen_value(self):
        model = LambdaMix(u=LossAverseSqrt(2.0), lam=0.5)
        P = product(
            make_marginal([(0.0, 0.5), (4.0, 0.5)], source=1),
            delta(5.0, source=2),
        )
        assert evaluate(model, P) == pytest.approx(2.9270509831248423, rel=1e-14)

    def test_lambda_mix_rejects_correlated_lotteries(self):
        model = LambdaMix(u=LossAverseSqrt(2.0), lam=0.5)
        with pytest.raises(NonProductLottery):
            evaluate(model, make_joint([(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)]))

    def test_lambda_endpoints(self):
        u = LossAverseSqrt(2.0)
        P = product(
            make_marginal([(0.0, 0.5), (4.0, 0.5)], source=1),
            delta(5.0, source=2),
        )
        pooled = evaluate(LambdaMix(u, lam=1.0), P)
        assert pooled == pytest.approx(evaluate(EU(SumBivariate(u)), P), abs=TOL)
        split = evaluate(LambdaMix(u, lam=0.0), P)
        assert split == pytest.approx(evaluate(EDU(u, beta=1.0), P), abs=TOL)


# ---------------------------------------------------------------------------
# Composite gain-loss decision pair
# ---------------------------------------------------------------------------


class TestCompositeGainLossPair:
    """A sure gain paired with a risky loss, against a risky gain paired
    with a sure loss.  The narrow summed-CE rule picks the dominated pair;
    pooled expected utility picks the dominating one."""

    A = delta(2.4, source=1)
    B = make_marginal([(10.0, 0.25), (0.0, 0.75)], source=1)
    C = delta(-7.5, source=2)
    D = make_marginal([(0.0, 0.25), (-10.0, 0.75)], source=2)
    AD = product(A, D)
    BC = product(B, C)

    def test_narrow_rule_prefers_the_dominated_pair(self):
        nb = NB(W_ADD, v1=LossAverseSqrt(2.0), v2=LossAverseSqrt(2.0))
        assert evaluate(nb, self.AD) == pytest.approx(-3.225, abs=TOL)
        assert evaluate(nb, self.BC) == pytest.approx(-6.875, abs=TOL)
        assert compare(nb, self.AD, self.BC).relation is Relation.StrictlyPrefers

    def test_pooled_expected_utility_prefers_the_dominating_pair(self):
        eu = EU(W_SUM_LA)
        assert evaluate(eu, self.AD) == pytest.approx(-3.7479162910063248, rel=1e-14)
        assert evaluate(eu, self.BC) == pytest.approx(-3.7126344737676984, rel=1e-14)
        assert compare(eu, self.BC, self.AD).relation is Relation.StrictlyPrefers


# ---------------------------------------------------------------------------
# Comparison semantics
# ---------------------------------------------------------------------------


class TestCompare:
    EU_MODEL = EU(W_CROSS)

    def test_relation_labels(self):
        P = degenerate_joint(2.0, 2.0)
        Q = degenerate_joint(1.0, 1.0)
        assert compare(self.EU_MODEL, P, Q).relation is Relation.StrictlyPrefers
        assert compare(self.EU_MODEL, Q, P).relation is Relation.StrictlyDispreferred
        assert compare(self.EU_MODEL, P, P).relation is Relation.Indifferent

    def test_band_is_relative_to_value_scale(self):
        P = degenerate_joint(8.0, 8.0)  # value 80
        Q = make_joint([(8.0, 8.0, 1.0 - 1e-12), (0.0, 0.0, 1e-12)])
        pref = compare(self.EU_MODEL, P, Q)
        assert pref.relation is Relation.Indifferent
        wide = compare(self.EU_MODEL, P, Q, band=1e-15)
        assert wide.relation is Relation.StrictlyPrefers

    def test_preference_record_carries_both_values(self):
        pref = compare(self.EU_MODEL, degenerate_joint(1.0, 1.0), degenerate_joint(0.0, 0.0))
        assert isinstance(pref, Preference)
        assert pref.value_p == pytest.approx(3.0)
        assert pref.value_q == pytest.approx(0.0)
        assert pref.favors_first and pref.is_strict and not pref.favors_second


# ---------------------------------------------------------------------------
# Pasting-condition validation
# ---------------------------------------------------------------------------


class TestValidateModel:
    H = OpenSet1D(((5.0, 7.0),))

    def test_affine_slice_passes(self):
        # w(x, y0) = (y0 + 1) x + y0 is affine in x, and v1 is linear
        model = GBIBCN(W_CROSS, v1=Linear(), v2=SQRT, H2=self.H)
        validate_model(model)

    def test_curved_index_breaks_the_pasting_condition(self):
        model = GBIBCN(W_CROSS, v1=SQRT, v2=SQRT, H2=self.H)
        with pytest.raises(DegenerateParameters):
            validate_model(model)

    def test_mirrored_family_checks_the_other_axis(self):
        w = TabulatedGridBivariate.from_function(
            lambda x, y: x * y + x + y, GRID_AXES, GRID_AXES
        )
        validate_model(GFIBCN(w, v1=SQRT, v2=Linear(), H1=self.H))
        with pytest.raises(DegenerateParameters):
            validate_model(GFIBCN(w, v1=SQRT, v2=SQRT, H1=self.H))

    def test_families_without_regions_validate_trivially(self):
        validate_model(EU(W_CROSS))
        validate_model(EDU(SQRT, beta=0.5))


# ---------------------------------------------------------------------------
# Structural properties
# ---------------------------------------------------------------------------

pos_grid = st.sampled_from([0.5, 1.0, 2.0, 3.0, 4.5, 6.0, 8.0])
weight = st.integers(min_value=1, max_value=9)


@st.composite
def pos_joints(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    atoms = draw(st.lists(st.tuples(pos_grid, pos_grid, weight), min_size=n, max_size=n))
    total = sum(w for _, _, w in atoms)
    return make_joint([(x, y, w / total) for x, y, w in atoms])


@st.composite
def pos_products(draw):
    def side(source):
        atoms = draw(
            st.lists(st.tuples(pos_grid, weight), min_size=1, max_size=3)
        )
        total = sum(w for _, w in atoms)
        return make_marginal([(x, w / total) for x, w in atoms], source=source)

    return product(side(1), side(2))


class TestStructuralProperties:
    @given(pos_joints(), pos_joints(), st.floats(0.0, 1.0))
    @settings(max_examples=150, deadline=None)
    def test_joint_law_families_are_mixture_linear(self, P, Q, alpha):
        for model in (EU(W_CROSS), KM(u=SQRT, beta=0.4, phi=Power(2.0)), EDU(SQRT, 0.7)):
            blended = evaluate(model, mix(alpha, P, Q))
            split = alpha * evaluate(model, P) + (1 - alpha) * evaluate(model, Q)
            assert blended == pytest.approx(split, abs=1e-10, rel=1e-10)

    @given(pos_products())
    @settings(max_examples=150, deadline=None)
    def test_branch_rules_match_their_neglect_versions_on_products(self, P):
        w = AdditiveBivariate(Power(0.7), Power(2.0))
        assert evaluate(BIB(w, v2=SQRT), P) == pytest.approx(
            evaluate(BIBCN(w, v2=SQRT), P), rel=1e-12, abs=1e-12
        )
        assert evaluate(FIB(w, v1=SQRT), P) == pytest.approx(
            evaluate(FIBCN(w, v1=SQRT), P), rel=1e-12, abs=1e-12
        )

    @given(pos_joints())
    @settings(max_examples=150, deadline=None)
    def test_identity_curvature_reduces_kmbib_to_edu(self, P):
        flat = KMBIB(u=SQRT, beta=0.6, phi=Linear())
        edu = EDU(SQRT, beta=0.6)
        assert evaluate(flat, P) == pytest.approx(evaluate(edu, P), rel=1e-12, abs=1e-12)

    @given(pos_joints())
    @settings(max_examples=100, deadline=None)
    def test_empty_region_switch_equals_nb_everywhere(self, P):
        empty = GBIBCN(W_CROSS, v1=SQRT, v2=SQRT)
        nb = NB(W_CROSS, v1=SQRT, v2=SQRT)
        assert evaluate(empty, P) == pytest.approx(evaluate(nb, P), rel=1e-12, abs=1e-12)

    @given(pos_joints(), pos_joints())
    @settings(max_examples=100, deadline=None)
    def test_compare_is_antisymmetric(self, P, Q):
        model = EU(W_CROSS)
        forward = compare(model, P, Q)
        backward = compare(model, Q, P)
        flip = {
            Relation.StrictlyPrefers: Relation.StrictlyDispreferred,
            Relation.StrictlyDispreferred: Relation.StrictlyPrefers,
            Relation.Indifferent: Relation.Indifferent,
        }
        assert backward.relation is flip[forward.relation]

    @given(pos_grid, pos_grid)
    @settings(max_examples=60, deadline=None)
    def test_all_families_agree_on_degenerate_lotteries(self, x, y):
        D = degenerate_joint(x, y)
        w = AdditiveBivariate(Power(0.7), Power(0.9))
        reference = w(x, y)
        for model in (
            EU(w),
            EUCN(w),
            NB(w, v1=SQRT, v2=SQRT),
            BIB(w, v2=SQRT),
            FIB(w, v1=SQRT),
            BIBCN(w, v2=SQRT),
            FIBCN(w, v1=SQRT),
        ):
            assert evaluate(model, D) == pytest.approx(reference, rel=1e-12, abs=1e-12)

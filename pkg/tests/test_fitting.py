"""Tests for zero-one-loss grid fitting of choice data.

The battery in RecoveryFixture was built so that exactly one grid point
(the pooled-vs-separate discriminator plus three acceptance thresholds)
reproduces every choice: the source-by-source model with loss aversion
2.25.  Each neighbouring grid point was checked by hand to miss at least
one observation, so noiseless recovery is an exact-identification test,
not just a zero-violation test.
"""

import warnings

import pytest

from bracketlab import fileio
from bracketlab.fitting import (
    ChoiceDataset,
    FitResult,
    Observation,
    default_grids,
    fit_dataset,
    fit_subject,
    format_fit_results,
    load_dataset,
    score_model,
)
from bracketlab.indices import (
    AdditiveBivariate,
    Linear,
    LossAverseSqrt,
    SumBivariate,
)
from bracketlab.lotteries import make_joint, make_marginal, product
from bracketlab.models import EU, NB, LambdaMix, compare

ZERO1 = make_marginal([(0.0, 1.0)], source=1)
ZERO2 = make_marginal([(0.0, 1.0)], source=2)
SURE0 = product(ZERO1, ZERO2)
W_ADD = AdditiveBivariate(Linear(), Linear())


def half_half(lo: float, hi: float):
    """A 50-50 source-1 gamble padded with a sure 0 on source 2."""
    return product(make_marginal([(lo, 0.5), (hi, 0.5)], source=1), ZERO2)


def combined_pairs():
    """The classic pair of two-gamble portfolios, as product lotteries."""
    ad = product(
        make_marginal([(2.4, 1.0)], source=1),
        make_marginal([(-10.0, 0.75), (0.0, 0.25)], source=2),
    )
    bc = product(
        make_marginal([(10.0, 0.25), (0.0, 0.75)], source=1),
        make_marginal([(-7.5, 1.0)], source=2),
    )
    return ad, bc


class RecoveryFixture:
    """Choices generated by NB with LossAverseSqrt(2.25) on both sources.

    Thresholds: a loss-averse square root with weight lam accepts the
    50-50 gamble (-L, +G) over a sure 0 exactly when sqrt(G) > lam *
    sqrt(L).  The three gambles below straddle lam = 2.25 from both
    sides, and the portfolio pair rules out every pooled candidate.
    """

    @staticmethod
    def observations():
        ad, bc = combined_pairs()
        return (
            Observation(half_half(-10.0, 21.0), SURE0, "B"),
            Observation(half_half(-100.0, 450.0), SURE0, "B"),
            Observation(half_half(-100.0, 520.0), SURE0, "A"),
            Observation(ad, bc, "A"),
        )


# ---------------------------------------------------------------------------
# Dataclass validation
# ---------------------------------------------------------------------------


class TestObservation:
    def test_rejects_unknown_choice(self):
        with pytest.raises(ValueError, match="choice"):
            Observation(SURE0, SURE0, "maybe")

    def test_accepts_indifferent(self):
        obs = Observation(SURE0, SURE0, "indifferent")
        assert obs.choice == "indifferent"


class TestChoiceDataset:
    def test_rejects_subject_without_observations(self):
        with pytest.raises(ValueError, match="no observations"):
            ChoiceDataset(subjects=(("s1", ()),))

    def test_len_counts_subjects(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        data = ChoiceDataset(subjects=(("s1", obs), ("s2", obs)))
        assert len(data) == 2


class TestFitResult:
    def test_rejects_violations_above_observations(self):
        model = EU(SumBivariate(Linear()))
        with pytest.raises(ValueError, match="violation count"):
            FitResult(
                subject="s1",
                family="eu",
                model=model,
                violations=3,
                observations=2,
                skipped=0,
                verdicts=("A", "B"),
            )


# ---------------------------------------------------------------------------
# CSV loading
# ---------------------------------------------------------------------------


class TestLoadDataset:
    def write_corpus(self, tmp_path):
        ad, bc = combined_pairs()
        fileio.write_joint(tmp_path / "ad.json", ad)
        fileio.write_joint(tmp_path / "bc.json", bc)
        return ad, bc

    def test_header_row_is_skipped(self, tmp_path):
        ad, bc = self.write_corpus(tmp_path)
        path = tmp_path / "data.csv"
        path.write_text(
            "subject,lotteryA_path,lotteryB_path,choice\n"
            "s1,ad.json,bc.json,A\n"
            "s1,bc.json,ad.json,B\n"
            "s2,ad.json,bc.json,indifferent\n"
        )
        data = load_dataset(path)
        assert [(name, len(obs)) for name, obs in data.subjects] == [
            ("s1", 2),
            ("s2", 1),
        ]
        first = data.subjects[0][1][0]
        assert first.lottery_a == ad
        assert first.lottery_b == bc
        assert first.choice == "A"

    def test_headerless_file_loads(self, tmp_path):
        self.write_corpus(tmp_path)
        path = tmp_path / "data.csv"
        path.write_text("s1,ad.json,bc.json,A\n")
        data = load_dataset(path)
        assert len(data) == 1

    def test_paths_resolve_relative_to_csv(self, tmp_path):
        self.write_corpus(tmp_path)
        sub = tmp_path / "inner"
        sub.mkdir()
        path = sub / "data.csv"
        path.write_text("s1,../ad.json,../bc.json,A\n")
        data = load_dataset(path)
        assert data.subjects[0][1][0].choice == "A"

    def test_blank_lines_are_ignored(self, tmp_path):
        self.write_corpus(tmp_path)
        path = tmp_path / "data.csv"
        path.write_text("s1,ad.json,bc.json,A\n\n   \ns1,bc.json,ad.json,B\n")
        data = load_dataset(path)
        assert len(data.subjects[0][1]) == 2

    def test_bad_choice_names_the_line(self, tmp_path):
        self.write_corpus(tmp_path)
        path = tmp_path / "data.csv"
        path.write_text("s1,ad.json,bc.json,A\ns1,ad.json,bc.json,C\n")
        with pytest.raises(ValueError, match=r":2:"):
            load_dataset(path)

    def test_wrong_column_count_names_the_line(self, tmp_path):
        self.write_corpus(tmp_path)
        path = tmp_path / "data.csv"
        path.write_text("s1,ad.json,bc.json\n")
        with pytest.raises(ValueError, match="4 columns"):
            load_dataset(path)

    def test_empty_file_is_rejected(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("subject,lotteryA_path,lotteryB_path,choice\n")
        with pytest.raises(ValueError, match="no observations"):
            load_dataset(path)


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------


class TestScoreModel:
    def test_counts_disagreements(self):
        obs = RecoveryFixture.observations()
        model = NB(W_ADD, LossAverseSqrt(2.25), LossAverseSqrt(2.25))
        violations, skipped, verdicts = score_model(model, obs)
        assert (violations, skipped) == (0, 0)
        assert verdicts == ("B", "B", "A", "A")

    def test_pooled_candidate_misses_the_portfolio_choice(self):
        obs = RecoveryFixture.observations()
        model = EU(SumBivariate(LossAverseSqrt(2.25)))
        violations, skipped, verdicts = score_model(model, obs)
        assert violations == 1
        assert verdicts[3] == "B"

    def test_indifference_is_a_verdict_not_a_violation(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        model = EU(SumBivariate(Linear()))
        violations, _, verdicts = score_model(model, obs)
        assert violations == 0
        assert verdicts == ("indifferent",)

    def test_out_of_domain_pairs_are_skipped(self):
        correlated = make_joint([(0.0, 0.0, 0.5), (1.0, 1.0, 0.5)])
        obs = (
            Observation(correlated, SURE0, "A"),
            Observation(SURE0, SURE0, "indifferent"),
        )
        model = LambdaMix(Linear(), 0.5)
        violations, skipped, verdicts = score_model(model, obs)
        assert (violations, skipped) == (0, 1)
        assert verdicts == ("skipped", "indifferent")


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


class TestFitSubject:
    def test_noiseless_recovery_is_exact(self):
        obs = RecoveryFixture.observations()
        result = fit_subject("s1", obs, ("eu", "nb"), default_grids())
        assert result.family == "nb"
        assert result.violations == 0
        assert result.model.v1 == LossAverseSqrt(2.25)
        assert result.model.v2 == LossAverseSqrt(2.25)

    def test_tie_goes_to_the_family_with_fewer_parameters(self):
        # Degenerate source 2 throughout, so pooled and source-by-source
        # candidates with the same curve agree on every pair.
        obs = (
            Observation(half_half(-10.0, 21.0), SURE0, "B"),
            Observation(half_half(-100.0, 450.0), SURE0, "B"),
            Observation(half_half(-100.0, 520.0), SURE0, "A"),
        )
        result = fit_subject("s1", obs, ("nb", "eu"), default_grids())
        assert result.family == "eu"
        assert result.violations == 0

    def test_tie_within_a_grid_goes_to_the_earlier_point(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        grid = (
            EU(SumBivariate(LossAverseSqrt(2.0))),
            EU(SumBivariate(Linear())),
        )
        result = fit_subject("s1", obs, ("eu",), {"eu": grid})
        assert result.model == grid[0]

    def test_empty_grid_warns_and_is_omitted(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        grids = {"eu": (EU(SumBivariate(Linear())),), "nb": ()}
        with pytest.warns(UserWarning, match="empty grid"):
            result = fit_subject("s1", obs, ("nb", "eu"), grids)
        assert result.family == "eu"

    def test_all_grids_empty_is_an_error(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        with pytest.raises(ValueError, match="empty grid"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                fit_subject("s1", obs, ("eu",), {"eu": ()})

    def test_unknown_family_is_an_error(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        with pytest.raises(ValueError, match="unknown family"):
            fit_subject("s1", obs, ("cara",), default_grids())

    def test_mislabeled_grid_entry_is_an_error(self):
        obs = (Observation(SURE0, SURE0, "indifferent"),)
        grid = (NB(W_ADD, Linear(), Linear()),)
        with pytest.raises(ValueError, match="contains"):
            fit_subject("s1", obs, ("eu",), {"eu": grid})


class TestFitDataset:
    def build(self, tmp_path):
        ad, bc = combined_pairs()
        fileio.write_joint(tmp_path / "ad.json", ad)
        fileio.write_joint(tmp_path / "bc.json", bc)
        path = tmp_path / "data.csv"
        path.write_text(
            "subject,lotteryA_path,lotteryB_path,choice\n"
            "narrow,ad.json,bc.json,A\n"
            "pooled,ad.json,bc.json,B\n"
        )
        return load_dataset(path)

    def test_one_result_per_subject_in_order(self, tmp_path):
        data = self.build(tmp_path)
        results = fit_dataset(data, ("eu", "nb"), default_grids())
        assert [r.subject for r in results] == ["narrow", "pooled"]
        assert [r.family for r in results] == ["nb", "eu"]
        assert all(r.violations == 0 for r in results)

    def test_search_is_deterministic(self, tmp_path):
        data = self.build(tmp_path)
        first = fit_dataset(data, ("eu", "nb"), default_grids())
        second = fit_dataset(data, ("eu", "nb"), default_grids())
        assert first == second

    def test_format_lists_every_subject(self, tmp_path):
        data = self.build(tmp_path)
        text = format_fit_results(fit_dataset(data, ("eu", "nb"), default_grids()))
        assert "narrow: nb (0/1 violations)" in text
        assert "pooled: eu (0/1 violations)" in text
        assert "ties broken" in text


class TestDefaultGrids:
    def test_families_and_sizes(self):
        grids = default_grids()
        assert set(grids) == {"eu", "eu-cn", "nb", "lambda-mix"}
        assert len(grids["eu"]) == 6
        assert len(grids["lambda-mix"]) == 30

    def test_every_entry_carries_its_own_family_label(self):
        for family, grid in default_grids().items():
            assert all(model.family == family for model in grid)

    def test_grid_predictions_match_direct_comparison(self):
        ad, bc = combined_pairs()
        model = default_grids()["nb"][3]
        pref = compare(model, ad, bc)
        violations, _, verdicts = score_model(model, (Observation(ad, bc, "A"),))
        assert verdicts[0] == {
            "StrictlyPrefers": "A",
            "StrictlyDispreferred": "B",
            "Indifferent": "indifferent",
        }[pref.relation.name]
        assert violations == 0

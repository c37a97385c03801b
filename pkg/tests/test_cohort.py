import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hiresim as hs
from hiresim.cohort import (
    COHORT_HEADER,
    TEST_NAMES,
    TRAITS,
    DirectionConfig,
    normalize_and_aggregate,
)
from hiresim.errors import (
    DegenerateTestWarning,
    DuplicateCandidateId,
    EmptyCohort,
    InvalidCohortFile,
    InvalidSpec,
    MissingColumn,
    NonFiniteScore,
)

from conftest import csv_text, make_records, valid_csv_row


def write(tmp_path, text, name="cohort.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCohort:
    def test_well_formed_three_rows(self, tmp_path):
        rows = [valid_csv_row("c1", range(11)),
                valid_csv_row("c2", range(1, 12)),
                valid_csv_row("c3", range(2, 13))]
        cohort = hs.load_cohort(write(tmp_path, csv_text(rows)))
        assert len(cohort.records) == 3
        assert len(cohort.profiles) == 3
        assert cohort.candidate_ids == ("c1", "c2", "c3")

    def test_missing_column(self, tmp_path):
        header = ",".join(c for c in COHORT_HEADER if c != "trail_making_a")
        rows = [",".join(["c1", "f", "a", "e", "u", *map(str, range(10))])]
        with pytest.raises(MissingColumn) as err:
            hs.load_cohort(write(tmp_path, csv_text(rows, header)))
        assert "trail_making_a" in str(err.value)

    def test_duplicate_candidate_id(self, tmp_path):
        rows = [valid_csv_row("c7"), valid_csv_row("c8"), valid_csv_row("c7")]
        with pytest.raises(DuplicateCandidateId) as err:
            hs.load_cohort(write(tmp_path, csv_text(rows)))
        assert err.value.candidate_id == "c7"

    def test_non_finite_score(self, tmp_path):
        rows = [valid_csv_row("c1"), valid_csv_row("c2", [*range(10), "nan"])]
        with pytest.raises(NonFiniteScore) as err:
            hs.load_cohort(write(tmp_path, csv_text(rows)))
        assert err.value.candidate_id == "c2"
        assert err.value.test == "go_no_go"

    def test_unparseable_score(self, tmp_path):
        rows = [valid_csv_row("c1"), valid_csv_row("c2", [*range(10), "oops"])]
        with pytest.raises(NonFiniteScore):
            hs.load_cohort(write(tmp_path, csv_text(rows)))

    def test_empty_and_single_row(self, tmp_path):
        with pytest.raises(EmptyCohort):
            hs.load_cohort(write(tmp_path, csv_text([])))
        with pytest.raises(EmptyCohort):
            hs.load_cohort(write(tmp_path, csv_text([valid_csv_row("c1")])))

    def test_reordered_header_rejected(self, tmp_path):
        reordered = list(COHORT_HEADER)
        reordered[5], reordered[6] = reordered[6], reordered[5]
        with pytest.raises(InvalidCohortFile):
            hs.load_cohort(write(tmp_path, csv_text([], ",".join(reordered))))

    def test_extra_column_rejected(self, tmp_path):
        header = ",".join([*COHORT_HEADER, "extra"])
        with pytest.raises(InvalidCohortFile):
            hs.load_cohort(write(tmp_path, csv_text([], header)))

    def test_rows_sorted_by_candidate_id(self, tmp_path):
        rows = [valid_csv_row("c3"), valid_csv_row("c1", range(1, 12)), valid_csv_row("c2")]
        cohort = hs.load_cohort(write(tmp_path, csv_text(rows)))
        assert cohort.candidate_ids == ("c1", "c2", "c3")

    def test_round_trip_fixed_point(self, tmp_path):
        cohort = hs.generate_synthetic_cohort(hs.SyntheticCohortSpec(size=25), 5)
        path = tmp_path / "out.csv"
        hs.write_cohort_csv(cohort, path)
        reloaded = hs.load_cohort(path)
        assert reloaded.records == cohort.records
        assert reloaded.profiles == cohort.profiles
        # and the file itself is a fixed point
        path2 = tmp_path / "out2.csv"
        hs.write_cohort_csv(reloaded, path2)
        assert path2.read_bytes() == path.read_bytes()


class TestNormalizeAndAggregate:
    def test_min_max_endpoints(self):
        rows = [[10] * 11, [20] * 11]
        directions = DirectionConfig({t: True for t in TEST_NAMES})
        profiles = normalize_and_aggregate(make_records(rows), directions)
        assert all(v == 0.0 for v in profiles[0].trait_scores.values())
        assert all(v == 1.0 for v in profiles[1].trait_scores.values())

    def test_orientation_flip_for_timed_test(self):
        # trail_making_a is lower-is-better by default: 30s beats 60s
        col = TEST_NAMES.index("trail_making_a")
        rows = [[10] * 11, [20] * 11]
        rows[0][col] = 30.0
        rows[1][col] = 60.0
        profiles = normalize_and_aggregate(make_records(rows))
        # candidate 0: lower raw times on both trail tests (better), lower
        # raw digit_symbol_coding (worse)
        assert profiles[0].trait_scores["memory"] == 0.0
        expected = (0.0 + 1.0 + 1.0) / 3
        assert profiles[0].trait_scores["information_processing_speed"] == pytest.approx(expected, abs=1e-12)

    def test_memory_trait_is_mean_of_four_tests(self):
        directions = DirectionConfig({t: True for t in TEST_NAMES})
        anchor0 = [0.0] * 11
        anchor1 = [1.0] * 11
        target = [0.2, 0.4, 0.6, 0.8, *([0.5] * 7)]
        profiles = normalize_and_aggregate(make_records([anchor0, anchor1, target]), directions)
        assert profiles[2].trait_scores["memory"] == pytest.approx(0.5, abs=1e-12)

    def test_degenerate_column_becomes_half(self):
        rows = [[10] * 11, [20] * 11]
        rows[0][0] = 7.0
        rows[1][0] = 7.0  # forward_memory_span has zero range
        with pytest.warns(DegenerateTestWarning):
            profiles = normalize_and_aggregate(make_records(rows))
        assert profiles[0].trait_scores["memory"] == pytest.approx((0.5 + 0 + 0 + 0) / 4)
        assert profiles[1].trait_scores["memory"] == pytest.approx((0.5 + 1 + 1 + 1) / 4)

    def test_requires_two_records(self):
        with pytest.raises(EmptyCohort):
            normalize_and_aggregate(make_records([[1] * 11]))

    def test_all_scores_in_unit_interval(self, small_cohort):
        matrix = small_cohort.trait_matrix()
        assert matrix.min() >= 0.0
        assert matrix.max() <= 1.0

    @settings(max_examples=50, deadline=None)
    @given(
        scale=st.floats(min_value=1e-3, max_value=1e3),
        offset=st.floats(min_value=-1e3, max_value=1e3),
        col=st.integers(min_value=0, max_value=10),
    )
    def test_affine_invariance_per_column(self, scale, offset, col):
        rng = np.random.default_rng(177)
        base = rng.uniform(0, 100, size=(12, 11))
        transformed = base.copy()
        transformed[:, col] = scale * transformed[:, col] + offset
        p_base = normalize_and_aggregate(make_records(base.tolist()))
        p_tran = normalize_and_aggregate(make_records(transformed.tolist()))
        for pb, pt in zip(p_base, p_tran):
            for trait in TRAITS:
                assert pt.trait_scores[trait] == pytest.approx(pb.trait_scores[trait], abs=1e-12)

    @given(col=st.integers(min_value=0, max_value=10))
    @settings(max_examples=11, deadline=None)
    def test_negation_with_flag_flip_is_identity(self, col):
        rng = np.random.default_rng(178)
        base = rng.uniform(0, 100, size=(9, 11))
        flipped = base.copy()
        flipped[:, col] = -flipped[:, col]
        directions = dict(DirectionConfig.default().higher_is_better)
        flipped_directions = dict(directions)
        flipped_directions[TEST_NAMES[col]] = not directions[TEST_NAMES[col]]
        p_base = normalize_and_aggregate(make_records(base.tolist()), DirectionConfig(directions))
        p_flip = normalize_and_aggregate(make_records(flipped.tolist()), DirectionConfig(flipped_directions))
        assert p_base == p_flip


class TestDirectionConfig:
    def test_default_marks_timed_tests_lower(self):
        config = DirectionConfig.default()
        assert not config.higher_is_better["trail_making_a"]
        assert not config.higher_is_better["trail_making_b"]
        assert config.higher_is_better["go_no_go"]

    def test_must_cover_all_tests(self):
        with pytest.raises(InvalidSpec):
            DirectionConfig({"go_no_go": True})

    def test_from_file_overrides(self, tmp_path):
        path = tmp_path / "directions.txt"
        path.write_text("go_no_go=lower\n# comment\ntrail_making_a=higher\n", encoding="utf-8")
        config = DirectionConfig.from_file(path)
        assert not config.higher_is_better["go_no_go"]
        assert config.higher_is_better["trail_making_a"]
        assert not config.higher_is_better["trail_making_b"]

    def test_from_file_rejects_unknown_test(self, tmp_path):
        path = tmp_path / "directions.txt"
        path.write_text("mystery_test=higher\n", encoding="utf-8")
        with pytest.raises(InvalidSpec):
            DirectionConfig.from_file(path)


class TestSyntheticGeneration:
    def test_deterministic_for_fixed_spec_and_seed(self, tmp_path):
        spec = hs.SyntheticCohortSpec(size=100)
        first = hs.generate_synthetic_cohort(spec, 7)
        second = hs.generate_synthetic_cohort(spec, 7)
        assert first.records == second.records
        assert first.profiles == second.profiles
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        hs.write_cohort_csv(first, p1)
        hs.write_cohort_csv(second, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_different_seeds_differ(self):
        spec = hs.SyntheticCohortSpec(size=50)
        assert (hs.generate_synthetic_cohort(spec, 1).records
                != hs.generate_synthetic_cohort(spec, 2).records)

    def test_group_counts_within_two_of_fractions(self):
        spec = hs.SyntheticCohortSpec(
            size=1000,
            group_fractions={**hs.cohort.DEFAULT_GROUP_FRACTIONS,
                             "gender": {"female": 0.5, "male": 0.5}},
        )
        cohort = hs.generate_synthetic_cohort(spec, 3)
        counts = {g: 0 for g in cohort.group_values("gender")}
        for record in cohort.records:
            counts[record.gender] += 1
        assert abs(counts["female"] - 500) <= 2
        assert abs(counts["male"] - 500) <= 2

    def test_reasoning_shift_raises_group_mean_across_ten_seeds(self):
        spec = hs.SyntheticCohortSpec(
            size=300,
            group_fractions={**hs.cohort.DEFAULT_GROUP_FRACTIONS,
                             "gender": {"x": 0.5, "y": 0.5}},
            trait_shifts={"gender": {"x": {"reasoning": 0.5}}},
        )
        reasoning_idx = TRAITS.index("reasoning")
        for seed in range(10):
            cohort = hs.generate_synthetic_cohort(spec, seed)
            matrix = cohort.trait_matrix()
            in_group = np.array([r.gender == "x" for r in cohort.records])
            assert matrix[in_group, reasoning_idx].mean() > matrix[~in_group, reasoning_idx].mean()

    def test_trait_scores_stay_in_unit_interval(self, shifted_cohort):
        matrix = shifted_cohort.trait_matrix()
        assert matrix.min() >= 0.0
        assert matrix.max() <= 1.0

    @pytest.mark.parametrize("kwargs", [
        {"size": 5},
        {"size": 100, "group_fractions": {**hs.cohort.DEFAULT_GROUP_FRACTIONS,
                                          "gender": {"f": 0.5, "m": 0.4}}},
        {"size": 100, "noise_scale": 0.0},
        {"size": 100, "noise_scale": -1.0},
        {"size": 100, "trait_shifts": {"gender": {"female": {"charisma": 1.0}}}},
        {"size": 100, "trait_shifts": {"hobby": {"x": {"memory": 1.0}}}},
    ])
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(InvalidSpec):
            hs.SyntheticCohortSpec(**kwargs)

    def test_spec_json_round_trip(self):
        spec = hs.default_synthetic_spec(250)
        again = hs.SyntheticCohortSpec.from_json(spec.canonical_json())
        assert again == spec

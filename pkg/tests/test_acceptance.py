"""Acceptance suite: one test per release criterion, each printing a
PASS line on success (run with -s or -rP to see them).

Criteria covered, with their stated tolerances and runtime budgets:
  1. sampling-weight endpoints and midpoint (1e-12 / 1e-9, < 1s)
  2. labeling counts at N=2000 over 100 seeds (exact, < 5s)
  3. byte-identical determinism: CLI re-run and sequential-vs-concurrent (< 30s)
  4. SVM objective vs brute-force grid oracle, 6 seeds (1e-3 relative)
     plus the separable 1-D toy at C=10 (< 60s)
  5. metric counting vs naive recount, 20 instances (exact / 1e-12, < 5s)
  6. disparity emergence: reasoning-shifted group, reasoning-only vs
     attention-only targets, >= 8 of 10 master seeds (< 2 min)
  7. identity comparison: equal weight vectors give all-zero deltas
  8. score-range sanity over 100 random weight vectors ([0, 1] bounds)
"""

import json
import time

import numpy as np
import pytest

import hiresim as hs
from hiresim.cli import main as cli_main
from hiresim.targets import ScoredCandidate

from _oracles import grid_search_svm, recount_confusion, recount_rates
from conftest import iter_delta_values


def report(name: str, started: float, detail: str = ""):
    print(f"ACCEPTANCE PASS: {name} ({time.perf_counter() - started:.2f}s) {detail}")


class TestAcceptance:
    def test_01_sampling_formula_endpoints(self):
        started = time.perf_counter()
        for n in (2, 100, 150, 10000):
            assert abs(hs.sampling_weight(1, n) - 0.99) <= 1e-12
            assert abs(hs.sampling_weight(n, n) - 0.01) <= 1e-12
            values = [hs.sampling_weight(x, n) for x in range(1, n + 1)]
            assert all(a > b for a, b in zip(values, values[1:])), f"not decreasing for n={n}"
        oracle = 0.98 / (1 - 100) * 50 + (0.01 - 0.99 * 100) / (1 - 100)
        assert abs(hs.sampling_weight(50, 100) - oracle) <= 1e-12
        assert abs(hs.sampling_weight(50, 100) - 0.5049494949) <= 1e-9
        assert time.perf_counter() - started < 1.0
        report("sampling formula endpoints", started)

    def test_02_labeling_counts(self):
        started = time.perf_counter()
        cohort = hs.generate_synthetic_cohort(hs.default_synthetic_spec(2000), 7)
        scored = hs.composite_scores(cohort, hs.WeightVector.from_csv("5,5,5,5,5"))
        rng = np.random.default_rng(2024)
        for seed in rng.integers(0, 2**62, size=100):
            ds = hs.assign_labels(scored, hs.LabelingPolicy(), int(seed), cohort=cohort)
            assert len(ds.top_subset_ids) == 300
            assert sum(ds.labels.values()) == 100
            assert set(ds.positive_ids()) <= set(ds.top_subset_ids)
        assert time.perf_counter() - started < 5.0
        report("labeling counts (100 seeds, zero violations)", started)

    def test_03_determinism(self, tmp_path):
        started = time.perf_counter()
        cohort_path = tmp_path / "cohort.csv"
        cohort = hs.generate_synthetic_cohort(hs.SyntheticCohortSpec(size=600), 17)
        hs.write_cohort_csv(cohort, cohort_path)
        flags = ["run", "--cohort", str(cohort_path), "--weights-a", "7,2,5,1,3",
                 "--weights-b", "2,8,1,6,2", "--seed", "42"]
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert cli_main([*flags, "--out", str(out1)]) == 0
        assert cli_main([*flags, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes(), "CLI re-run must be byte-identical"

        config = hs.SessionConfig(
            cohort=hs.load_cohort(cohort_path),
            weights_a=hs.WeightVector.from_csv("7,2,5,1,3"),
            weights_b=hs.WeightVector.from_csv("2,8,1,6,2"),
            master_seed=42,
        )
        sequential = hs.render_document(hs.result_document(hs.run_simulation(config)))
        concurrent = hs.render_document(hs.result_document(hs.run_simulation(config, parallel=True)))
        assert sequential == concurrent, "sequential vs concurrent A/B must be identical"
        assert sequential.encode("utf-8") == out1.read_bytes()
        assert time.perf_counter() - started < 30.0
        report("determinism (CLI bytes, sequential vs concurrent)", started)

    def test_04_svm_oracle_equivalence(self):
        started = time.perf_counter()
        for seed in (101, 202, 303, 404, 505, 606):
            rng = np.random.default_rng(seed)
            features = rng.uniform(0, 1, size=(20, 2))
            labels = rng.integers(0, 2, size=20)
            labels[0], labels[1] = 0, 1
            fit = hs.fit_linear_svm(features, labels, c=10.0)
            oracle_j, _, _ = grid_search_svm(features, labels, c=10.0, class_balance=True)
            rel = abs(fit.objective - oracle_j) / oracle_j
            assert rel <= 1e-3, f"seed {seed}: relative gap {rel:.2e}"

        toy_features = np.array([[0.0]] * 10 + [[1.0]] * 10)
        toy_labels = np.array([0] * 10 + [1] * 10)
        fit = hs.fit_linear_svm(toy_features, toy_labels, c=10.0)
        predictions = (toy_features @ fit.w + fit.b) > 0
        assert np.array_equal(predictions, toy_labels.astype(bool)), "toy accuracy must be 1.0"
        assert time.perf_counter() - started < 60.0
        report("SVM brute-force oracle equivalence (6 seeds + 1-D toy)", started)

    def test_05_metric_counting_oracle(self):
        started = time.perf_counter()
        from conftest import make_cohort_from_profiles
        for seed in range(20):
            rng = np.random.default_rng(3000 + seed)
            n = 500
            ids = [f"c{i:04d}" for i in range(n)]
            gender = [f"g{int(rng.integers(0, 4))}" for _ in ids]
            cohort = make_cohort_from_profiles([[0.5] * 5] * n, ids=ids, gender=gender)
            preds = {cid: int(rng.integers(0, 2)) for cid in ids}
            labels = {cid: int(rng.integers(0, 2)) for cid in ids}
            overall = hs.confusion(preds, labels, ids)
            assert overall.to_dict() == recount_confusion(preds, labels, ids)
            group_of = cohort.group_of("gender")
            summed = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
            for gm in hs.group_metrics(preds, labels, cohort, "gender"):
                members = [cid for cid in ids if group_of[cid] == gm.group]
                expected_cm = recount_confusion(preds, labels, members)
                assert gm.confusion.to_dict() == expected_cm
                for key, expected in recount_rates(expected_cm).items():
                    actual = getattr(gm, key)
                    if expected is None:
                        assert actual is None
                    else:
                        assert abs(actual - expected) <= 1e-12
                expected_selected = sum(preds[cid] for cid in members)
                assert gm.selected == expected_selected
                if members:
                    assert abs(gm.selection_rate - expected_selected / len(members)) <= 1e-12
                for key in summed:
                    summed[key] += getattr(gm.confusion, key)
            assert summed == overall.to_dict(), "group matrices must sum to overall"
        assert time.perf_counter() - started < 5.0
        report("metric counting oracle (20 instances)", started)

    @pytest.mark.slow
    def test_06_disparity_emergence(self):
        started = time.perf_counter()
        spec = hs.SyntheticCohortSpec(
            size=2000,
            group_fractions={**hs.cohort.DEFAULT_GROUP_FRACTIONS,
                             "gender": {"x": 0.5, "y": 0.5}},
            trait_shifts={"gender": {"x": {"reasoning": 0.5}}},
        )
        cohort = hs.generate_synthetic_cohort(spec, 123)
        reasoning_only = hs.WeightVector({"memory": 0, "information_processing_speed": 0,
                                          "reasoning": 10, "attention": 0,
                                          "behavioral_restraint": 0})
        attention_only = hs.WeightVector({"memory": 0, "information_processing_speed": 0,
                                          "reasoning": 0, "attention": 10,
                                          "behavioral_restraint": 0})
        wins = 0
        for master_seed in range(10):
            config = hs.SessionConfig(cohort=cohort, weights_a=reasoning_only,
                                      weights_b=attention_only, master_seed=master_seed)
            document = hs.result_document(hs.run_simulation(config))
            gaps = {}
            for tag in ("a", "b"):
                rates = {row["group"]: row["rate"]
                         for row in document["models"][tag]["selection"]["by_attribute"]["gender"]}
                gaps[tag] = abs(rates["x"] - rates["y"])
            wins += gaps["a"] > gaps["b"]
        assert wins >= 8, f"selection-rate gap larger under model A in only {wins}/10 seeds"
        assert time.perf_counter() - started < 120.0
        report("disparity emergence", started, f"[{wins}/10 seeds]")

    def test_07_identity_comparison(self):
        started = time.perf_counter()
        cohort = hs.generate_synthetic_cohort(hs.default_synthetic_spec(400), 31)
        weights = hs.WeightVector.from_csv("4,6,2,8,1")
        config = hs.SessionConfig(cohort=cohort, weights_a=weights, weights_b=weights,
                                  master_seed=77)
        document = hs.result_document(hs.run_simulation(config))
        for value in iter_delta_values(document["deltas"]):
            assert value == 0 or value is None, f"non-zero delta {value!r}"
        # None only where both sides are the undefined marker
        for attr, rows in document["deltas"]["fairness"].items():
            eval_a = {r["group"]: r for r in
                      document["models"]["a"]["evaluation"]["by_attribute"][attr]}
            eval_b = {r["group"]: r for r in
                      document["models"]["b"]["evaluation"]["by_attribute"][attr]}
            for row in rows:
                for key in ("tpr", "fpr", "ppv", "npv", "selection_rate"):
                    if row[key] is None:
                        assert eval_a[row["group"]][key] is None
                        assert eval_b[row["group"]][key] is None
        report("identity comparison (all deltas exactly zero)", started)

    def test_08_score_range_sanity(self):
        started = time.perf_counter()
        cohort = hs.generate_synthetic_cohort(hs.default_synthetic_spec(300), 13)
        rng = np.random.default_rng(99)
        for _ in range(100):
            raw = rng.uniform(0, 10, size=5)
            if raw.sum() == 0:
                raw[0] = 1.0
            weights = hs.WeightVector(dict(zip(hs.TRAITS, raw.tolist())))
            scored = hs.composite_scores(cohort, weights)
            values = np.array([s.composite_score for s in scored])
            assert values.min() >= 0.0 and values.max() <= 1.0
            for attr in hs.DEMOGRAPHIC_ATTRIBUTES:
                for row in hs.score_distribution(scored, cohort, attr):
                    if row["count"]:
                        assert 0.0 <= row["median"] <= 1.0
                        assert 0.0 <= row["min"] <= row["q1"] <= row["median"] \
                            <= row["q3"] <= row["max"] <= 1.0
        report("score-range sanity (100 random weight vectors)", started)

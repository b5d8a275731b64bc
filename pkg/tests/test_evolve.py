import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import best_threshold_objective_oracle, threshold_objective_oracle

from graphevolve.augment import AugmentationConfig
from graphevolve.classifiers import ClassifierConfig
from graphevolve.evolve import (
    EvolveConfig,
    confusion_matrix,
    evolve,
    filter_pool,
    find_threshold,
    label_reliabilities,
    label_reliability,
    threshold_objective,
)
from graphevolve.features import FeatureConfig
from graphevolve.synthetic import make_demo_dataset


class TestConfusionMatrix:
    def test_two_example_mean(self):
        probs = np.array([[1.0, 0.0], [0.5, 0.5]])
        cm = confusion_matrix(probs, [0, 0], n_classes=2)
        np.testing.assert_allclose(cm.q[0], [0.75, 0.25])
        np.testing.assert_allclose(cm.q[1], [0.5, 0.5])  # absent class -> uniform
        assert list(cm.class_counts) == [2, 0]

    def test_perfect_classifier_gives_identity(self):
        probs = np.eye(3)
        cm = confusion_matrix(probs, [0, 1, 2], n_classes=3)
        np.testing.assert_allclose(cm.q, np.eye(3))

    @settings(max_examples=100)
    @given(
        n=st.integers(1, 20),
        classes=st.integers(2, 5),
        seed=st.integers(0, 2**31),
    )
    def test_rows_are_distributions(self, n, classes, seed):
        rng = np.random.default_rng(seed)
        probs = rng.dirichlet(np.ones(classes), size=n)
        labels = rng.integers(0, classes, size=n)
        cm = confusion_matrix(probs, labels, classes)
        np.testing.assert_allclose(cm.q.sum(axis=1), 1.0, atol=1e-9)
        assert (cm.q >= 0).all()


class TestLabelReliability:
    def test_dot_product(self):
        assert label_reliability([0.7, 0.3], [0.6, 0.4]) == pytest.approx(0.54)

    def test_one_hot_agreement(self):
        assert label_reliability([0, 1], [0, 1]) == pytest.approx(1.0)

    def test_uniform_two_classes(self):
        assert label_reliability([0.5, 0.5], [0.5, 0.5]) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            label_reliability([0.5, 0.5], [0.2, 0.3, 0.5])

    def test_always_in_unit_interval(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            c = int(rng.integers(2, 6))
            p = rng.dirichlet(np.ones(c))
            q = rng.dirichlet(np.ones(c))
            assert 0.0 <= label_reliability(p, q) <= 1.0

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(1)
        probs = rng.dirichlet(np.ones(3), size=8)
        labels = rng.integers(0, 3, size=8)
        cm = confusion_matrix(probs, labels, 3)
        rel = label_reliabilities(probs, labels, cm)
        for i in range(8):
            assert rel[i] == pytest.approx(label_reliability(probs[i], cm.q[labels[i]]))


class TestFindThreshold:
    def test_separating_value_prefers_smallest(self):
        # objective 0 at both 0.2 and 0.9; the smaller minimizer wins
        assert find_threshold([0.9, 0.2], [True, False]) == pytest.approx(0.2)

    def test_all_correct_gives_zero(self):
        assert find_threshold([0.4, 0.9, 0.7], [True, True, True]) == 0.0

    def test_equal_reliability_correct_and_incorrect(self):
        # at 0.5 neither term trips the strict comparisons, so the
        # objective is 0 there and 1 at the candidate 0
        assert threshold_objective(0.0, [0.5, 0.5], [True, False]) == 1
        assert threshold_objective(0.5, [0.5, 0.5], [True, False]) == 0
        assert find_threshold([0.5, 0.5], [True, False]) == pytest.approx(0.5)

    def test_matches_independent_objective(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(1, 30))
            r = rng.random(n)
            c = rng.random(n) < 0.7
            theta = find_threshold(r, c)
            assert threshold_objective(theta, r, c) == threshold_objective_oracle(theta, r, c)

    def test_exhaustive_small_instances_reach_global_minimum(self):
        # all correctness patterns over reliability multisets on a 0.1 grid
        grid = [0.0, 0.1, 0.3, 0.5, 0.9]
        for n in (1, 2, 3):
            for rs in itertools.combinations_with_replacement(grid, n):
                for pattern in itertools.product([True, False], repeat=n):
                    theta = find_threshold(list(rs), list(pattern))
                    achieved = threshold_objective_oracle(theta, rs, pattern)
                    assert achieved == best_threshold_objective_oracle(rs, pattern)

    def test_randomized_instances_reach_global_minimum(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            n = int(rng.integers(1, 13))
            r = rng.integers(0, 11, size=n) / 10.0
            c = rng.random(n) < rng.random()
            theta = find_threshold(r, c)
            assert threshold_objective_oracle(theta, r, c) == best_threshold_objective_oracle(r, c)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            find_threshold([], [])


class TestFilterPool:
    def test_zero_threshold_accepts_positive_reliabilities(self):
        mask = filter_pool([0.2, 0.8, 0.001], 0.0)
        assert mask.all()

    def test_threshold_one_rejects_everything(self):
        mask = filter_pool([1.0, 0.8], 1.0)
        assert not mask.any()

    def test_strict_comparison(self):
        np.testing.assert_array_equal(filter_pool([0.3, 0.6], 0.5), [False, True])
        np.testing.assert_array_equal(filter_pool([0.5], 0.5), [False])

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(4)
        r = rng.random(50)
        accepted = [int(filter_pool(r, t).sum()) for t in sorted(rng.random(20))]
        assert all(a >= b for a, b in zip(accepted, accepted[1:]))

    def test_non_finite_threshold_rejected(self):
        with pytest.raises(ValueError):
            filter_pool([0.5], float("nan"))


def demo_splits():
    from graphevolve.datasets import stratified_split

    ds = make_demo_dataset(n_per_class=12, seed=5)
    split = stratified_split(ds, seed=3)

    def pick(idx):
        return [ds.graphs[i] for i in idx], [ds.labels[i] for i in idx]

    return pick(split.train), pick(split.val), pick(split.test)


def loop_config(iterations: int, classifier: str = "knn") -> EvolveConfig:
    return EvolveConfig(
        augmentation=AugmentationConfig(mapping="motif-similarity"),
        features=FeatureConfig(kind="spectral", dim=16),
        classifier=ClassifierConfig(kind=classifier),
        iterations=iterations,
    )


class TestEvolveLoop:
    def test_zero_iterations_is_baseline(self):
        (tg, ty), (vg, vy), (sg, sy) = demo_splits()
        report, model = evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(0), seed=1)
        assert report.iterations == ()
        assert report.final_test_accuracy == report.baseline_test_accuracy
        assert 0.0 <= report.baseline_test_accuracy <= 1.0

    def test_reproducible_from_seed(self):
        (tg, ty), (vg, vy), (sg, sy) = demo_splits()
        a, _ = evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(3), seed=42)
        b, _ = evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(3), seed=42)
        assert a == b

    def test_train_size_monotone_and_records_complete(self):
        (tg, ty), (vg, vy), (sg, sy) = demo_splits()
        report, _ = evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(4), seed=7)
        assert len(report.iterations) == 4
        sizes = [len(tg)] + [rec.train_size for rec in report.iterations]
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        for rec in report.iterations:
            assert rec.accepted <= rec.pool_size
            assert 0.0 <= rec.val_accuracy <= 1.0
            assert 0.0 <= rec.test_accuracy <= 1.0
            assert np.isfinite(rec.threshold)

    def test_inputs_never_mutated(self):
        (tg, ty), (vg, vy), (sg, sy) = demo_splits()
        tg_copy, ty_copy = list(tg), list(ty)
        vg_copy, sg_copy = list(vg), list(sg)
        evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(3), seed=3)
        assert tg == tg_copy and ty == ty_copy
        assert vg == vg_copy and sg == sg_copy

    def test_logreg_variant_runs(self):
        (tg, ty), (vg, vy), (sg, sy) = demo_splits()
        report, _ = evolve(tg, ty, vg, vy, sg, sy, 2, loop_config(1, "logreg"), seed=5)
        assert len(report.iterations) == 1

    def test_empty_acceptance_is_noop_merge(self):
        # an impossible pool: complete graphs cannot be augmented, so every
        # iteration degenerates to a retrain on the unchanged training set
        from graphevolve.graph import Graph

        complete = [
            Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
            for _ in range(8)
        ]
        labels = [0, 1] * 4
        cfg = loop_config(2)
        report, _ = evolve(
            complete, labels, complete[:4], labels[:4], complete[:4], labels[:4], 2, cfg, seed=2
        )
        for rec in report.iterations:
            assert rec.pool_size == 0
            assert rec.accepted == 0
            assert rec.train_size == 8
            assert rec.test_accuracy == report.baseline_test_accuracy

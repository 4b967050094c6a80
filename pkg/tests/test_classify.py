import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskshare import (
    LabeledDataset,
    MlrModel,
    balanced_accuracy,
    softmax_probs,
    train_mlr,
)
from riskshare.classify import read_dataset_csv


def model_with_scores(scores):
    """Model whose intercept realizes the given per-class scores at x=0."""
    k = len(scores)
    coef = np.zeros((k, 2))
    coef[:, 0] = scores
    return MlrModel(coefficients=coef)


class TestSoftmaxProbs:
    def test_zero_coefficients_give_uniform(self):
        model = model_with_scores([0.0, 0.0, 0.0])
        mix = softmax_probs(model, [0.0])
        assert mix.probs == pytest.approx((1 / 3,) * 3)

    def test_dominant_score_wins(self):
        model = model_with_scores([500.0, 0.0])
        mix = softmax_probs(model, [0.0])
        assert mix.probs[0] == pytest.approx(1.0)

    def test_log_integer_scores(self):
        model = model_with_scores([math.log(1), math.log(2), math.log(3)])
        mix = softmax_probs(model, [0.0])
        assert mix.probs == pytest.approx((1 / 6, 2 / 6, 3 / 6))

    def test_extreme_scores_stay_normalized(self):
        model = model_with_scores([800.0, -800.0, 0.0])
        mix = softmax_probs(model, [0.0])
        assert math.fsum(mix.probs) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=200)
    @given(
        st.lists(
            st.floats(min_value=-50, max_value=50, allow_nan=False),
            min_size=2,
            max_size=6,
        ),
        st.floats(min_value=-5, max_value=5, allow_nan=False),
    )
    def test_output_is_valid_mix(self, scores, x):
        k = len(scores)
        coef = np.zeros((k, 2))
        coef[:, 0] = scores
        coef[:, 1] = 1.0
        mix = softmax_probs(MlrModel(coefficients=coef), [x])
        assert all(p >= 0 for p in mix.probs)
        assert abs(math.fsum(mix.probs) - 1.0) <= 1e-9

    def test_dimension_mismatch(self):
        model = model_with_scores([0.0, 1.0])
        with pytest.raises(ValueError):
            softmax_probs(model, [1.0, 2.0])


def two_clouds(n=60, gap=6.0, seed=0):
    rng = np.random.default_rng(seed)
    x1 = rng.normal(0.0, 0.5, size=(n, 2))
    x2 = rng.normal(gap, 0.5, size=(n, 2))
    features = np.vstack([x1, x2])
    labels = np.array([1] * n + [2] * n)
    return LabeledDataset(features=features, labels=labels, n_classes=2)


class TestTrainMlr:
    def test_separable_clouds_reach_full_accuracy(self):
        data = two_clouds()
        model = train_mlr(data, l2=0.01)
        preds = [
            int(np.argmax(softmax_probs(model, x).probs)) + 1
            for x in data.features
        ]
        assert (np.array(preds) == data.labels).mean() == 1.0

    def test_null_features_predict_class_frequencies(self):
        rng = np.random.default_rng(4)
        n = 3000
        features = rng.normal(size=(n, 2))
        labels = rng.choice([1, 2, 3], size=n, p=[0.6, 0.3, 0.1])
        data = LabeledDataset(features=features, labels=labels, n_classes=3)
        model = train_mlr(data, l2=0.01)
        probs = softmax_probs(model, [0.0, 0.0]).probs
        freqs = [(labels == c).mean() for c in (1, 2, 3)]
        assert probs == pytest.approx(freqs, abs=0.05)

    def test_row_duplication_invariance(self):
        data = two_clouds(n=25)
        doubled = LabeledDataset(
            features=np.vstack([data.features, data.features]),
            labels=np.concatenate([data.labels, data.labels]),
            n_classes=2,
        )
        a = train_mlr(data, l2=0.05, max_iter=80)
        b = train_mlr(doubled, l2=0.05, max_iter=80)
        assert np.allclose(a.coefficients, b.coefficients, atol=1e-12)

    def test_single_class_rejected(self):
        data = LabeledDataset(
            features=np.zeros((5, 1)), labels=np.ones(5, dtype=int), n_classes=2
        )
        with pytest.raises(ValueError):
            train_mlr(data)

    def test_deterministic(self):
        data = two_clouds(n=30, seed=9)
        a = train_mlr(data, l2=0.02)
        b = train_mlr(data, l2=0.02)
        assert np.array_equal(a.coefficients, b.coefficients)

    def test_gradient_small_at_convergence(self):
        data = two_clouds(n=40, seed=5)
        model = train_mlr(data, l2=0.05, max_iter=2000)
        assert model.converged


class TestBalancedAccuracy:
    def test_perfect(self):
        assert balanced_accuracy([1, 2, 1], [1, 2, 1], 2).score == 1.0

    def test_hand_enumerated_three_element_case(self):
        report = balanced_accuracy([1, 1, 2], [1, 2, 2], 2)
        assert report.score == pytest.approx(0.75)
        assert report.per_class[1] == pytest.approx(0.75)
        assert report.per_class[2] == pytest.approx(0.75)

    def test_total_inversion(self):
        assert balanced_accuracy([1, 2], [2, 1], 2).score == 0.0

    def test_absent_class_skipped_not_zeroed(self):
        report = balanced_accuracy([1, 1], [1, 1], 3)
        assert report.skipped == (2, 3)
        assert report.score == 1.0
        assert set(report.per_class) == {1}

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(8)
        k = 4
        y_true = rng.integers(1, k + 1, size=200)
        y_pred = rng.integers(1, k + 1, size=200)
        base = balanced_accuracy(y_true, y_pred, k).score
        perm = rng.permutation(k) + 1
        assert balanced_accuracy(
            perm[y_true - 1], perm[y_pred - 1], k
        ).score == pytest.approx(base)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            balanced_accuracy([], [], 2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            balanced_accuracy([1], [1, 2], 2)


class TestCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("f1,f2,label\n0.5,1.0,1\n-0.5,2.0,2\n")
        data = read_dataset_csv(str(path))
        assert data.features.shape == (2, 2)
        assert list(data.labels) == [1, 2]

    def test_header_required(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("0.5,1\n")
        with pytest.raises(ValueError):
            read_dataset_csv(str(path))

    def test_model_json_round_trip(self):
        model = model_with_scores([0.1, -0.3])
        again = MlrModel.from_json(model.to_json())
        assert np.array_equal(again.coefficients, model.coefficients)

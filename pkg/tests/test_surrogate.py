import time

import numpy as np
import pytest

from riskshare import (
    CemConfig,
    ContractDesign,
    IncidentMix,
    RiskPreferences,
    SurrogateSample,
    build_training_set,
    evaluate,
    ground_up_cdf,
    objective,
    predict,
    train_surrogate,
    var,
)
from riskshare.surrogate import (
    model_from_json,
    model_to_json,
    samples_from_jsonl,
    samples_to_jsonl,
)

COARSE = CemConfig(max_iterations=40)


def make_sample(p, theta, d, obj, seed=0):
    return SurrogateSample(
        p=p, theta_star=theta, d_star=d, objective_star=obj, seed=seed
    )


@pytest.fixture(scope="module")
def solved_book(severity, prefs):
    """A small book of solved instances across the simplex."""
    rng = np.random.default_rng(77)
    p_list = [
        IncidentMix(probs=tuple(v / v.sum()))
        for v in rng.dirichlet(np.ones(4), size=12)
    ]
    return build_training_set(
        p_list, severity, prefs, COARSE, trials_per_instance=2
    )


class TestBuildTrainingSet:
    def test_single_instance_single_trial(self, severity, org_mixes, prefs):
        samples = build_training_set(
            [org_mixes[1]], severity, prefs, COARSE, trials_per_instance=1
        )
        assert len(samples) == 1
        s = samples[0]
        assert s.p == org_mixes[1].probs
        recomputed = objective(s.contract, org_mixes[1], severity, prefs)
        assert s.objective_star == pytest.approx(recomputed, abs=1e-9)

    def test_duplicates_identical(self, severity, org_mixes, prefs):
        samples = build_training_set(
            [org_mixes[2], org_mixes[2]], severity, prefs, COARSE, 2
        )
        assert samples[0] == samples[1]

    def test_reference_objective(self, severity, org_mixes, prefs):
        samples = build_training_set(
            [org_mixes[1]], severity, prefs, CemConfig(), trials_per_instance=10
        )
        assert samples[0].objective_star == pytest.approx(11.3366, rel=5e-3)

    def test_empty_rejected(self, severity, prefs):
        with pytest.raises(ValueError):
            build_training_set([], severity, prefs, COARSE, 1)


class TestTrainPredict:
    def test_memorizes_single_sample(self):
        s = make_sample((0.2, 0.8), (1, 0), (0.1, 0.2), 5.0)
        model = train_surrogate([s])
        pred = predict(model, IncidentMix(probs=(0.2, 0.8)))
        assert pred.contract == s.contract
        assert not pred.fallback

    def test_constant_patterns_give_constant_classifier(self):
        samples = [
            make_sample((0.1, 0.9), (1, 0), (0.1, 0.1), 1.0),
            make_sample((0.5, 0.5), (1, 0), (0.3, 0.1), 2.0),
            make_sample((0.9, 0.1), (1, 0), (0.5, 0.1), 3.0),
        ]
        model = train_surrogate(samples)
        for p in [(0.3, 0.7), (0.6, 0.4), (0.05, 0.95)]:
            assert predict(model, IncidentMix(probs=p)).contract.theta == (1, 0)

    def test_prediction_is_valid_contract(self, solved_book):
        model = train_surrogate(solved_book)
        rng = np.random.default_rng(5)
        for _ in range(20):
            v = rng.dirichlet(np.ones(4))
            pred = predict(model, IncidentMix(probs=tuple(v / v.sum())))
            ContractDesign(theta=pred.contract.theta, d=pred.contract.d)

    def test_far_out_extrapolation_uses_neighbors(self):
        samples = [
            make_sample((0.1, 0.9), (1, 0), (0.1, 0.2), 1.0),
            make_sample((0.2, 0.8), (1, 0), (0.3, 0.4), 1.0),
        ]
        model = train_surrogate(samples)
        pred = predict(model, IncidentMix(probs=(1.0, 0.0)))
        assert pred.contract.theta == (1, 0)
        assert pred.contract.d == pytest.approx((0.2, 0.3))  # neighbor mean

    def test_unseen_pattern_falls_back_flagged(self):
        # five neighbors whose majority vote creates a pattern no sample has
        samples = [
            make_sample((0.30, 0.30, 0.40), (1, 0, 0), (0.1, 0.1, 0.1), 1.0),
            make_sample((0.31, 0.29, 0.40), (1, 0, 0), (0.1, 0.1, 0.1), 1.0),
            make_sample((0.30, 0.31, 0.39), (0, 1, 0), (0.1, 0.1, 0.1), 1.0),
            make_sample((0.29, 0.30, 0.41), (0, 1, 0), (0.1, 0.1, 0.1), 1.0),
            make_sample((0.30, 0.29, 0.41), (0, 0, 1), (0.1, 0.1, 0.1), 1.0),
        ]
        model = train_surrogate(samples)
        pred = predict(model, IncidentMix(probs=(0.301, 0.299, 0.4)))
        # votes: (2/5, 2/5, 1/5) -> pattern (0,0,0), unseen in the book
        assert pred.fallback
        assert pred.contract == samples[0].contract  # nearest sample


class TestEvaluate:
    def test_zero_error_on_training_set(self, solved_book, severity, prefs):
        model = train_surrogate(solved_book)
        report = evaluate(model, solved_book, severity, prefs)
        assert report.error_rate == 0.0
        assert all(abs(g) <= 1e-9 for g in report.gaps)

    def test_zero_contract_predictor_has_negative_gaps(
        self, solved_book, severity, prefs
    ):
        degraded = [
            SurrogateSample(
                p=s.p,
                theta_star=(0,) * 4,
                d_star=(0.0,) * 4,
                objective_star=s.objective_star,
                seed=s.seed,
            )
            for s in solved_book
        ]
        model = train_surrogate(degraded)
        report = evaluate(model, solved_book, severity, prefs)
        for s, gap in zip(solved_book, report.gaps):
            mix = IncidentMix(probs=s.p)
            no_ins = var(
                lambda y: ground_up_cdf(mix, severity, y), prefs.beta
            )
            assert gap == pytest.approx(s.objective_star - no_ins, abs=1e-5)
            assert gap <= 1e-9

    def test_latency_budget(self, solved_book, severity, prefs):
        model = train_surrogate(solved_book)
        mix = IncidentMix(probs=(0.25, 0.25, 0.25, 0.25))
        predict(model, mix)  # warm up
        start = time.perf_counter()
        reps = 50
        for _ in range(reps):
            predict(model, mix)
        per_call = (time.perf_counter() - start) / reps
        assert per_call <= 0.010


class TestPersistence:
    def test_jsonl_round_trip(self, solved_book):
        text = samples_to_jsonl(solved_book)
        again = samples_from_jsonl(text)
        assert again == solved_book

    def test_model_round_trip(self, solved_book):
        model = train_surrogate(solved_book, k=3)
        again = model_from_json(model_to_json(model))
        assert again.k == model.k
        assert again.samples == model.samples

"""Instant quoting: learn the map from incident probabilities to solved
contracts.

Solving a contract exactly takes many solver trials; a book of solved
instances lets new probability vectors be quoted without touching the
solver.  Prediction is two-stage: a multi-label classifier picks the
flag pattern, then a per-pattern regressor supplies the thresholds.

The default learner is k-nearest-neighbor on the probability simplex
(k = min(5, n)): the flag pattern is a per-coordinate majority vote over
the neighbors, the thresholds the mean over neighbors sharing that
pattern (all neighbors if none share it).  A pattern absent from the
whole training book falls back to the nearest sample's full contract and
is flagged.  The learner memorizes its training set, is deterministic,
and sits behind plain functions so a heavier model can replace it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .cem import CemConfig, run_multi_trial, select_solution
from .lossmodel import ContractDesign, IncidentMix, SeverityModel
from .risk import RiskPreferences, objective

__all__ = [
    "SurrogateSample",
    "SurrogateModel",
    "Prediction",
    "EvalReport",
    "build_training_set",
    "train_surrogate",
    "predict",
    "evaluate",
    "samples_to_jsonl",
    "samples_from_jsonl",
    "model_to_json",
    "model_from_json",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurrogateSample:
    """One solved instance: probabilities in, selected contract out."""

    p: tuple[float, ...]
    theta_star: tuple[int, ...]
    d_star: tuple[float, ...]
    objective_star: float
    seed: int = 0

    def __post_init__(self) -> None:
        ContractDesign(theta=self.theta_star, d=self.d_star)
        IncidentMix(probs=self.p)
        if not np.isfinite(self.objective_star):
            raise ValueError("objective_star must be finite")

    @property
    def contract(self) -> ContractDesign:
        return ContractDesign(theta=self.theta_star, d=self.d_star)


@dataclass(frozen=True)
class SurrogateModel:
    """k-NN book of solved instances."""

    samples: tuple[SurrogateSample, ...]
    k: int
    base_seed: int = 0

    def __post_init__(self) -> None:
        if not self.samples:
            raise ValueError("a surrogate model needs at least one sample")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        dims = {len(s.p) for s in self.samples}
        if len(dims) != 1:
            raise ValueError("all samples must share one mixture dimension")
        object.__setattr__(
            self, "_points", np.array([s.p for s in self.samples])
        )
        object.__setattr__(
            self, "_patterns", {s.theta_star for s in self.samples}
        )


@dataclass(frozen=True)
class Prediction:
    contract: ContractDesign
    fallback: bool  # predicted pattern absent from the training book


@dataclass(frozen=True)
class EvalReport:
    error_rate: float
    gaps: tuple[float, ...]  # objective(true) - objective(predicted), signed


def build_training_set(
    p_list: list[IncidentMix],
    sev: SeverityModel,
    prefs: RiskPreferences,
    config: CemConfig,
    trials_per_instance: int,
    select_tol: float = 1e-4,
) -> list[SurrogateSample]:
    """Solve every instance and keep the uniquely selected solution.

    Every instance runs under the same configuration (and therefore the
    same trial seeds), so duplicated probability vectors yield identical
    samples.  Instances whose solve fails are logged and skipped.
    """
    if not p_list:
        raise ValueError("p_list must be non-empty")
    out: list[SurrogateSample] = []
    for idx, mix in enumerate(p_list):
        try:
            _, trials = run_multi_trial(mix, sev, prefs, config, trials_per_instance)
            chosen = select_solution(
                [t.best_z for t in trials], mix, sev, prefs, tol=select_tol
            )
            out.append(
                SurrogateSample(
                    p=mix.probs,
                    theta_star=chosen.theta,
                    d_star=chosen.d,
                    objective_star=objective(chosen, mix, sev, prefs),
                    seed=config.seed,
                )
            )
        except Exception as exc:
            logger.warning("instance %d failed and was skipped: %s", idx, exc)
    return out


def train_surrogate(train: list[SurrogateSample], k: int = 5) -> SurrogateModel:
    if not train:
        raise ValueError("training set must be non-empty")
    return SurrogateModel(samples=tuple(train), k=min(k, len(train)))


def _neighbors(model: SurrogateModel, p: np.ndarray) -> np.ndarray:
    dist = np.linalg.norm(model._points - p, axis=1)  # type: ignore[attr-defined]
    return np.argsort(dist, kind="stable")


def predict(model: SurrogateModel, mix: IncidentMix) -> Prediction:
    """Two-stage prediction: majority-vote flags, then mean thresholds.

    A query that coincides with a training point returns that sample's
    contract verbatim, so the learner memorizes its book.
    """
    p = np.asarray(mix.probs)
    if p.shape != (len(model.samples[0].p),):
        raise ValueError("probability vector has the wrong dimension")
    order = _neighbors(model, p)
    nearest = model.samples[order[0]]
    if nearest.p == mix.probs:
        return Prediction(contract=nearest.contract, fallback=False)
    near = [model.samples[i] for i in order[: model.k]]
    votes = np.array([s.theta_star for s in near]).mean(axis=0)
    pattern = tuple(int(v >= 0.5) for v in votes)
    if pattern not in model._patterns:  # type: ignore[attr-defined]
        nearest = model.samples[order[0]]
        return Prediction(contract=nearest.contract, fallback=True)
    sharing = [s for s in near if s.theta_star == pattern]
    pool = sharing if sharing else near
    d = tuple(np.array([s.d_star for s in pool]).mean(axis=0))
    return Prediction(
        contract=ContractDesign(theta=pattern, d=d), fallback=False
    )


def evaluate(
    model: SurrogateModel,
    test: list[SurrogateSample],
    sev: SeverityModel,
    prefs: RiskPreferences,
    tol: float = 1e-4,
) -> EvalReport:
    """Objective-gap error rate of the model on held-out samples.

    The gap of a sample is objective(selected solution) minus
    objective(prediction); negative means the prediction is worse.  A
    sample errs when |gap| exceeds ``tol`` relative to its objective.
    """
    if not test:
        raise ValueError("test set must be non-empty")
    gaps = []
    errors = 0
    for s in test:
        mix = IncidentMix(probs=s.p)
        pred = predict(model, mix)
        gap = s.objective_star - objective(pred.contract, mix, sev, prefs)
        gaps.append(gap)
        if abs(gap) > tol * max(1.0, abs(s.objective_star)):
            errors += 1
    return EvalReport(error_rate=errors / len(test), gaps=tuple(gaps))


def samples_to_jsonl(samples: list[SurrogateSample]) -> str:
    lines = [
        json.dumps(
            {
                "p": list(s.p),
                "theta_star": list(s.theta_star),
                "d_star": list(s.d_star),
                "objective_star": s.objective_star,
                "seed": s.seed,
            },
            sort_keys=True,
        )
        for s in samples
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def samples_from_jsonl(text: str) -> list[SurrogateSample]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        out.append(
            SurrogateSample(
                p=tuple(doc["p"]),
                theta_star=tuple(doc["theta_star"]),
                d_star=tuple(doc["d_star"]),
                objective_star=float(doc["objective_star"]),
                seed=int(doc.get("seed", 0)),
            )
        )
    return out


def model_to_json(model: SurrogateModel) -> str:
    return json.dumps(
        {
            "k": model.k,
            "base_seed": model.base_seed,
            "samples": [
                {
                    "p": list(s.p),
                    "theta_star": list(s.theta_star),
                    "d_star": list(s.d_star),
                    "objective_star": s.objective_star,
                    "seed": s.seed,
                }
                for s in model.samples
            ],
        },
        sort_keys=True,
    )


def model_from_json(text: str) -> SurrogateModel:
    doc = json.loads(text)
    samples = tuple(
        SurrogateSample(
            p=tuple(s["p"]),
            theta_star=tuple(s["theta_star"]),
            d_star=tuple(s["d_star"]),
            objective_star=float(s["objective_star"]),
            seed=int(s.get("seed", 0)),
        )
        for s in doc["samples"]
    )
    return SurrogateModel(
        samples=samples, k=int(doc["k"]), base_seed=int(doc.get("base_seed", 0))
    )

"""Cross-entropy solver over the mixed decision vector z = (d, theta).

Each iteration draws ``sample_size`` candidate contracts from an
independent proposal (truncated normals for the thresholds, Bernoullis
for the flags), ranks them by the bilateral objective, refits the
proposal to the elite fraction by per-coordinate maximum likelihood, and
stops once every coordinate variance of the freshly drawn population is
under its threshold and the elite threshold tau has not moved over the
last ``lag`` iterations.  Trials are independent given their seeds and
are merged deterministically by (objective, seed).

The returned contract is the best candidate observed anywhere in the
trial, seeded with the no-cession contract so a solve can never be worse
than not buying insurance.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .lossmodel import ContractDesign, IncidentMix, SeverityModel, expected_seller_loss
from .risk import RiskPreferences, objective

__all__ = [
    "CemConfig",
    "CemParams",
    "TrialResult",
    "TrialError",
    "SolverError",
    "sample_population",
    "update_params",
    "run_trial",
    "run_multi_trial",
    "select_solution",
]

logger = logging.getLogger(__name__)

SD_FLOOR = 1e-9  # millions; keeps the proposal density proper
TAU_REL_TOL = 1e-6  # relative equality tolerance for the tau stability check


class TrialError(RuntimeError):
    """A trial aborted because the objective could not be evaluated."""


class SolverError(RuntimeError):
    """Every trial of a sweep failed."""


def _as_vector(value, k: int, name: str) -> tuple[float, ...]:
    if np.isscalar(value):
        return (float(value),) * k
    vec = tuple(float(v) for v in value)
    if len(vec) != k:
        raise ValueError(f"{name} must have {k} entries, got {len(vec)}")
    return vec


@dataclass(frozen=True)
class CemConfig:
    """Solver configuration; thresholds and monetary fields are in millions.

    Scalar ``init_*`` fields broadcast over the K incident types.
    """

    elite_proportion: float = 0.2
    sample_size: int = 10
    var_threshold_d: float = 0.1
    var_threshold_theta: float = 0.01
    lag: int = 10
    max_iterations: int = 401
    init_d_mean: float | tuple[float, ...] = 0.0
    init_d_sd: float | tuple[float, ...] = 0.1
    init_theta_prob: float | tuple[float, ...] = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.elite_proportion < 1.0:
            raise ValueError("elite_proportion must lie in (0, 1)")
        if self.sample_size < 2:
            raise ValueError("sample_size must be at least 2")
        if self.lag < 1:
            raise ValueError("lag must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.var_threshold_d <= 0 or self.var_threshold_theta <= 0:
            raise ValueError("variance thresholds must be positive")

    @property
    def elite_size(self) -> int:
        return math.ceil(self.elite_proportion * self.sample_size)

    def initial_params(self, k: int) -> "CemParams":
        sd = _as_vector(self.init_d_sd, k, "init_d_sd")
        if any(s <= 0 for s in sd):
            raise ValueError("init_d_sd must be positive elementwise")
        prob = _as_vector(self.init_theta_prob, k, "init_theta_prob")
        if any(not 0.0 <= p <= 1.0 for p in prob):
            raise ValueError("init_theta_prob must lie in [0, 1] elementwise")
        return CemParams(
            d_mean=_as_vector(self.init_d_mean, k, "init_d_mean"),
            d_sd=sd,
            theta_prob=prob,
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "elite_proportion": self.elite_proportion,
                "sample_size": self.sample_size,
                "var_threshold_d": self.var_threshold_d,
                "var_threshold_theta": self.var_threshold_theta,
                "lag": self.lag,
                "max_iterations": self.max_iterations,
                "init_d_mean": self.init_d_mean,
                "init_d_sd": self.init_d_sd,
                "init_theta_prob": self.init_theta_prob,
                "seed": self.seed,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "CemConfig":
        doc = json.loads(text)
        listy = {k: tuple(v) if isinstance(v, list) else v for k, v in doc.items()}
        return CemConfig(**listy)


@dataclass(frozen=True)
class CemParams:
    """Proposal parameters: threshold normals and flag Bernoullis."""

    d_mean: tuple[float, ...]
    d_sd: tuple[float, ...]
    theta_prob: tuple[float, ...]

    def __post_init__(self) -> None:
        if not len(self.d_mean) == len(self.d_sd) == len(self.theta_prob):
            raise ValueError("parameter vectors must share one length")
        if any(s < SD_FLOOR for s in self.d_sd):
            raise ValueError(f"d_sd entries must be >= the {SD_FLOOR} floor")
        if any(not 0.0 <= p <= 1.0 for p in self.theta_prob):
            raise ValueError("theta_prob entries must lie in [0, 1]")


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one solver trial."""

    best_z: ContractDesign
    best_objective: float
    iterations: int
    status: str  # "variance_converged" | "max_iterations_reached"
    tau_history: tuple[float, ...]
    seed: int


def sample_population(
    params: CemParams, n: int, rng: np.random.Generator
) -> list[ContractDesign]:
    """Draw n candidates; thresholds are normals truncated to [0, inf) by
    per-coordinate rejection, flags are Bernoulli."""
    k = len(params.d_mean)
    mean = np.asarray(params.d_mean)
    sd = np.asarray(params.d_sd)
    d = rng.normal(mean, sd, size=(n, k))
    while True:
        neg = d < 0.0
        if not neg.any():
            break
        d[neg] = rng.normal(
            np.broadcast_to(mean, (n, k))[neg], np.broadcast_to(sd, (n, k))[neg]
        )
    theta = (rng.random((n, k)) < np.asarray(params.theta_prob)).astype(int)
    return [
        ContractDesign(theta=tuple(theta[i]), d=tuple(d[i])) for i in range(n)
    ]


def update_params(elite: list[ContractDesign]) -> CemParams:
    """Per-coordinate MLE refit to the elite sample.

    Threshold parameters are the elite mean and population standard
    deviation (floored); flag probabilities are the fraction of ones.
    No truncation correction is applied.
    """
    if not elite:
        raise ValueError("elite sample must be non-empty")
    d = np.array([c.d for c in elite])
    theta = np.array([c.theta for c in elite])
    return CemParams(
        d_mean=tuple(d.mean(axis=0)),
        d_sd=tuple(np.maximum(d.std(axis=0), SD_FLOOR)),
        theta_prob=tuple(theta.mean(axis=0)),
    )


def run_trial(
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
    config: CemConfig,
    seed: int | None = None,
) -> TrialResult:
    """One full solver trial; reproducible given (config, seed)."""
    k = mix.k
    trial_seed = config.seed if seed is None else seed
    rng = np.random.default_rng(trial_seed)
    params = config.initial_params(k)
    n, ne = config.sample_size, config.elite_size

    def evaluate(c: ContractDesign) -> float:
        try:
            return objective(c, mix, sev, prefs)
        except Exception as exc:  # pragma: no cover - defensive
            raise TrialError(
                f"objective evaluation failed in trial seed={trial_seed}: {exc}"
            ) from exc

    incumbent = ContractDesign.zero(k)
    best_z, best_obj = incumbent, evaluate(incumbent)

    pop = sample_population(params, n, rng)
    tau_history: list[float] = []
    status = "max_iterations_reached"
    iterations = 0
    for _ in range(config.max_iterations):
        objs = np.array([evaluate(c) for c in pop])
        order = np.argsort(objs, kind="stable")
        iterations += 1
        tau = float(objs[order[ne - 1]])
        tau_history.append(tau)
        if objs[order[0]] < best_obj:
            best_obj = float(objs[order[0]])
            best_z = pop[order[0]]
        params = update_params([pop[i] for i in order[:ne]])
        pop = sample_population(params, n, rng)
        d = np.array([c.d for c in pop])
        theta = np.array([c.theta for c in pop])
        if len(tau_history) > config.lag:
            delta = max(
                abs(tau - tau_history[-1 - j]) for j in range(1, config.lag + 1)
            )
        else:
            delta = math.inf
        if (
            d.var(axis=0).max() <= config.var_threshold_d
            and theta.var(axis=0).max() <= config.var_threshold_theta
            and delta <= TAU_REL_TOL * max(1.0, abs(tau))
        ):
            status = "variance_converged"
            break
    return TrialResult(
        best_z=best_z,
        best_objective=best_obj,
        iterations=iterations,
        status=status,
        tau_history=tuple(tau_history),
        seed=trial_seed,
    )


def _trial_worker(args) -> TrialResult:
    mix, sev, prefs, config, seed = args
    return run_trial(mix, sev, prefs, config, seed=seed)


def run_multi_trial(
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
    config: CemConfig,
    n_trials: int,
    max_workers: int | None = None,
) -> tuple[TrialResult, list[TrialResult]]:
    """Run independent trials with seeds config.seed + i; return (best, all).

    A failed trial is logged and dropped; the sweep only errors when every
    trial fails.  The best trial minimizes (objective, seed), so running
    trials concurrently cannot change the reported winner.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    if max_workers is None:
        max_workers = int(os.environ.get("QUOTE_THREADS", "1") or "1")
    seeds = [config.seed + i for i in range(n_trials)]
    results: list[TrialResult] = []
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            futures = {
                s: pool.submit(_trial_worker, (mix, sev, prefs, config, s))
                for s in seeds
            }
            for seed in seeds:
                try:
                    results.append(futures[seed].result())
                except TrialError as exc:
                    logger.warning("trial seed=%d failed: %s", seed, exc)
    else:
        for seed in seeds:
            try:
                results.append(run_trial(mix, sev, prefs, config, seed=seed))
            except TrialError as exc:
                logger.warning("trial seed=%d failed: %s", seed, exc)
    if not results:
        raise SolverError("all trials failed")
    best = min(results, key=lambda r: (r.best_objective, r.seed))
    return best, results


def select_solution(
    candidates: list[ContractDesign],
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
    tol: float = 1e-4,
) -> ContractDesign:
    """Pick a unique representative among near-tied candidates.

    Candidates whose objectives tie with the minimum within relative
    ``tol`` compete on expected ceded loss; remaining ties break
    lexicographically by (theta as a binary number, then d componentwise).
    """
    if not candidates:
        raise ValueError("candidate list must be non-empty")
    objs = [objective(c, mix, sev, prefs) for c in candidates]
    best = min(objs)
    pool = [
        c for c, o in zip(candidates, objs) if o - best <= tol * max(1.0, abs(best))
    ]
    return min(pool, key=lambda c: (expected_seller_loss(c, mix, sev), c.theta, c.d))

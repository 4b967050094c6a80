"""Maximum-likelihood severity fitting, AIC selection, and KS testing.

Four candidate families are fitted to positive loss samples: log-normal
and exponential in closed form, gamma and Weibull by one-dimensional
root-finding on the profile-likelihood shape equation with the scale in
closed form given the shape.  Families are compared by AIC
(2 * n_params - 2 * loglik, lower is better).  The two-sample
Kolmogorov-Smirnov statistic is computed exactly from the sorted merge
and its p-value from the asymptotic Kolmogorov series.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, gammaln

from .lossmodel import SeverityEntry, SeverityModel

__all__ = [
    "DegenerateSampleError",
    "FitError",
    "LossSample",
    "FittedModel",
    "fit_lognormal",
    "fit_exponential",
    "fit_gamma",
    "fit_weibull",
    "select_best",
    "ks_two_sample",
    "read_loss_csv",
    "build_severity_model",
]

FAMILY_ORDER = ("lognormal", "gamma", "weibull", "exponential")


class FitError(RuntimeError):
    """A family could not be fitted to the sample."""


class DegenerateSampleError(FitError):
    """The sample carries no spread on the scale the family needs."""


@dataclass(frozen=True)
class LossSample:
    """Positive loss observations, optionally tagged with a type label."""

    values: tuple[float, ...]
    label: str | None = None

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("a loss sample needs at least one observation")
        if any(not math.isfinite(v) or v <= 0 for v in values):
            raise ValueError("loss observations must be positive and finite")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FittedModel:
    family: str
    params: dict
    loglik: float
    aic: float

    def __post_init__(self) -> None:
        n_params = len(self.params)
        expected = 2.0 * n_params - 2.0 * self.loglik
        if self.aic != expected:
            raise ValueError("aic must equal 2*n_params - 2*loglik exactly")


def _require_fit_sample(sample: LossSample) -> np.ndarray:
    if len(sample) < 2:
        raise FitError(f"need at least 2 observations, got {len(sample)}")
    # sorted order canonicalizes float sums: fits are then exactly
    # invariant to permutations of the input
    return np.sort(np.asarray(sample.values))


def _make(family: str, params: dict, loglik: float) -> FittedModel:
    return FittedModel(
        family=family,
        params=params,
        loglik=loglik,
        aic=2.0 * len(params) - 2.0 * loglik,
    )


def fit_lognormal(sample: LossSample) -> FittedModel:
    """Closed-form MLE: mu = mean(ln x), sigma = population sd(ln x)."""
    x = _require_fit_sample(sample)
    logs = np.log(x)
    mu = float(logs.mean())
    sigma = float(logs.std())
    if sigma < 1e-12 * max(1.0, abs(mu)):
        raise DegenerateSampleError("zero variance on the log scale")
    n = len(x)
    loglik = float(
        -n * math.log(sigma) - 0.5 * n * math.log(2.0 * math.pi) - logs.sum() - 0.5 * n
    )
    return _make("lognormal", {"mu": mu, "sigma": sigma}, loglik)


def fit_exponential(sample: LossSample) -> FittedModel:
    x = _require_fit_sample(sample)
    rate = float(1.0 / x.mean())
    loglik = float(len(x) * math.log(rate) - rate * x.sum())
    return _make("exponential", {"rate": rate}, loglik)


def _gamma_loglik(x: np.ndarray, shape: float, scale: float) -> float:
    n = len(x)
    return float(
        (shape - 1.0) * np.log(x).sum()
        - x.sum() / scale
        - n * shape * math.log(scale)
        - n * gammaln(shape)
    )


def fit_gamma(sample: LossSample) -> FittedModel:
    """Profile MLE: the shape solves ln(s) - psi(s) = ln(mean) - mean(ln x)."""
    x = _require_fit_sample(sample)
    logs = np.log(x)
    gap = math.log(x.mean()) - float(logs.mean())
    if gap < 1e-12:
        raise DegenerateSampleError("constant sample has no gamma MLE")

    def eqn(s: float) -> float:
        return math.log(s) - digamma(s) - gap

    lo, hi = 1e-8, 1.0
    while eqn(hi) > 0:
        hi *= 2.0
        if hi > 1e12:
            raise FitError("gamma shape search did not bracket a root")
    shape = float(brentq(eqn, lo, hi, xtol=1e-12, rtol=1e-14))
    scale = float(x.mean() / shape)
    return _make(
        "gamma", {"shape": shape, "scale": scale}, _gamma_loglik(x, shape, scale)
    )


def _weibull_loglik(x: np.ndarray, shape: float, scale: float) -> float:
    n = len(x)
    z = x / scale
    return float(
        n * math.log(shape)
        - n * shape * math.log(scale)
        + (shape - 1.0) * np.log(x).sum()
        - (z**shape).sum()
    )


def fit_weibull(sample: LossSample) -> FittedModel:
    """Profile MLE on the shape; the scale is closed-form given the shape.

    Observations are normalized by their maximum before exponentiation to
    keep x**c in range for large shapes.
    """
    x = _require_fit_sample(sample)
    if x.max() == x.min():
        raise DegenerateSampleError("constant sample has no Weibull MLE")
    xm = x / x.max()
    logs_raw = np.log(x)
    logs = np.log(xm)
    mean_log = float(logs_raw.mean())

    def eqn(c: float) -> float:
        w = xm**c
        return float((w * logs_raw).sum() / w.sum() - 1.0 / c - mean_log)

    lo, hi = 1e-3, 1.0
    while eqn(lo) > 0:
        lo /= 2.0
        if lo < 1e-12:
            raise FitError("Weibull shape search did not bracket a root (low)")
    while eqn(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise FitError("Weibull shape search did not bracket a root (high)")
    shape = float(brentq(eqn, lo, hi, xtol=1e-12, rtol=1e-14))
    scale = float(x.max() * (xm**shape).mean() ** (1.0 / shape))
    return _make(
        "weibull", {"shape": shape, "scale": scale}, _weibull_loglik(x, shape, scale)
    )


_FITTERS: dict[str, Callable[[LossSample], FittedModel]] = {
    "lognormal": fit_lognormal,
    "exponential": fit_exponential,
    "gamma": fit_gamma,
    "weibull": fit_weibull,
}


def select_best(sample: LossSample) -> FittedModel:
    """Fit every family that converges and return the minimal-AIC model.

    Ties break by the fixed family order lognormal < gamma < weibull <
    exponential.
    """
    fits: list[tuple[float, int, FittedModel]] = []
    for rank, family in enumerate(FAMILY_ORDER):
        try:
            model = _FITTERS[family](sample)
        except FitError:
            continue
        fits.append((model.aic, rank, model))
    if not fits:
        raise FitError("no candidate family could be fitted")
    fits.sort(key=lambda t: (t[0], t[1]))
    return fits[0][2]


def _kolmogorov_sf(lam: float, terms: int = 100) -> float:
    """Asymptotic Kolmogorov survival function, series truncated."""
    if lam <= 0:
        return 1.0
    total = 0.0
    for j in range(1, terms + 1):
        total += (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
    return min(max(2.0 * total, 0.0), 1.0)


def ks_two_sample(a: LossSample, b: LossSample) -> tuple[float, float]:
    """Two-sample KS statistic and its asymptotic p-value.

    D is the exact sup-distance between the empirical CDFs over the merged
    sample; the p-value uses the Kolmogorov law at sqrt(na*nb/(na+nb))*D.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be non-empty")
    xa = np.sort(np.asarray(a.values))
    xb = np.sort(np.asarray(b.values))
    grid = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, grid, side="right") / len(xa)
    fb = np.searchsorted(xb, grid, side="right") / len(xb)
    d = float(np.abs(fa - fb).max())
    ne = len(xa) * len(xb) / (len(xa) + len(xb))
    p = _kolmogorov_sf(math.sqrt(ne) * d)
    return d, p


def read_loss_csv(path: str) -> dict[str, LossSample]:
    """Ingest a two-column loss CSV with a required header.

    Columns are ``incident_type_label`` and ``loss_amount``; amounts are in
    currency units and are converted to millions for fitting.
    """
    per_label: dict[str, list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV") from None
        if [h.strip() for h in header] != ["incident_type_label", "loss_amount"]:
            raise ValueError(
                "expected header 'incident_type_label,loss_amount', "
                f"got {','.join(header)!r}"
            )
        for i, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"line {i}: expected 2 columns, got {len(row)}")
            label = row[0].strip()
            try:
                amount = float(row[1])
            except ValueError:
                raise ValueError(f"line {i}: non-numeric loss {row[1]!r}") from None
            if not math.isfinite(amount) or amount <= 0:
                raise ValueError(f"line {i}: losses must be positive, got {amount}")
            per_label.setdefault(label, []).append(amount / 1e6)
    return {
        label: LossSample(values=tuple(vals), label=label)
        for label, vals in per_label.items()
    }


def build_severity_model(samples: Mapping[str, LossSample]) -> SeverityModel:
    """Fit the best family per type and assemble a severity model.

    Only log-normal winners can be represented; any other winning family
    is reported as a fit error so the caller can intervene.
    """
    entries = []
    for idx, label in enumerate(sorted(samples), start=1):
        best = select_best(samples[label])
        if best.family != "lognormal":
            raise FitError(
                f"type {label!r}: best family is {best.family}, which the "
                "mixture model cannot represent"
            )
        entries.append(
            SeverityEntry(
                type_id=idx,
                mu=best.params["mu"],
                sigma=best.params["sigma"],
                label=label,
            )
        )
    return SeverityModel(entries=tuple(entries))

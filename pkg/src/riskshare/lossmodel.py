"""Probabilistic loss model for incident-specific risk transfer.

A loss event has a type ``k`` drawn from a categorical mixture and a
severity ``X`` that, conditional on the type, is log-normal in millions of
currency.  A contract assigns each type a binary flag ``theta_k`` and a
monetary threshold ``d_k``:

* ``theta_k = 1`` — deductible for the buyer: the seller's payout on a
  type-``k`` event is the part of the loss above ``d_k``.
* ``theta_k = 0`` — limit on the indemnity: the seller's payout is capped
  at ``d_k``; the buyer keeps the excess.

The module offers two views of a contract.  The *settlement* view
(:func:`apply_contract`) splits one realized loss exactly between the
parties, so ``retained + ceded == x`` to machine precision.  The
*valuation* view (:func:`party_loss_cdf`, :func:`sample_party_loss`)
evaluates each party's risk position per type as franchise-style cover:
the side on the excess bears the full loss once it crosses the threshold
(atom at zero of mass ``F_k(d_k)``, upper branch ``F_k(y)``), while the
side under the cap bears ``min(X, d_k)``.  Quote and solver figures are
computed on the valuation view; claim settlement uses the exact algebra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "SeverityEntry",
    "SeverityModel",
    "IncidentMix",
    "ContractDesign",
    "MoneySplit",
    "Party",
    "lognormal_cdf",
    "ground_up_cdf",
    "apply_contract",
    "party_loss_cdf",
    "expected_seller_loss",
    "sample_ground_up",
    "sample_party_loss",
    "model_to_json",
    "model_from_json",
]

_SQRT2 = math.sqrt(2.0)

Party = Literal["buyer", "seller"]


class DimensionMismatchError(ValueError):
    """Inputs disagree on the number of incident types."""


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SeverityEntry:
    """Log-normal severity of one incident type.

    ``mu`` is the log-mean of the loss in ln(millions); ``sigma`` the
    log-standard-deviation (dimensionless).
    """

    type_id: int
    mu: float
    sigma: float
    label: str = ""

    def __post_init__(self) -> None:
        _check_finite("mu", self.mu)
        _check_finite("sigma", self.sigma)
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.type_id < 1:
            raise ValueError(f"type ids start at 1, got {self.type_id}")


@dataclass(frozen=True)
class SeverityModel:
    """Per-type severity laws; exactly one entry per type id 1..K."""

    entries: tuple[SeverityEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=lambda e: e.type_id))
        object.__setattr__(self, "entries", entries)
        ids = [e.type_id for e in entries]
        if not ids:
            raise ValueError("severity model needs at least one incident type")
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError(f"type ids must be exactly 1..K, got {ids}")
        object.__setattr__(self, "_mu", np.array([e.mu for e in entries]))
        object.__setattr__(self, "_sigma", np.array([e.sigma for e in entries]))

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def mu(self) -> np.ndarray:
        return self._mu  # type: ignore[attr-defined]

    @property
    def sigma(self) -> np.ndarray:
        return self._sigma  # type: ignore[attr-defined]

    def labels(self) -> tuple[str, ...]:
        return tuple(e.label or f"T{e.type_id}" for e in self.entries)


@dataclass(frozen=True)
class IncidentMix:
    """Probability vector over the K mutually exclusive incident types."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise ValueError("empty probability vector")
        for p in probs:
            _check_finite("probability", p)
            if p < 0:
                raise ValueError(f"probabilities must be non-negative, got {p}")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1 (got {total!r})")

    @property
    def k(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class ContractDesign:
    """Decision vector: per-type flag ``theta_k`` and threshold ``d_k``.

    ``theta_k = 1`` puts a deductible of ``d_k`` on type k (seller pays the
    excess); ``theta_k = 0`` caps the indemnity at ``d_k``.
    """

    theta: tuple[int, ...]
    d: tuple[float, ...]

    def __post_init__(self) -> None:
        theta = tuple(int(t) for t in self.theta)
        d = tuple(float(x) for x in self.d)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "d", d)
        if len(theta) != len(d):
            raise DimensionMismatchError(
                f"theta has {len(theta)} entries but d has {len(d)}"
            )
        if any(t not in (0, 1) for t in theta):
            raise ValueError(f"theta entries must be 0 or 1, got {theta}")
        for x in d:
            _check_finite("threshold", x)
            if x < 0:
                raise ValueError(f"thresholds must be non-negative, got {x}")

    @property
    def k(self) -> int:
        return len(self.theta)

    @staticmethod
    def zero(k: int) -> "ContractDesign":
        """The no-cession contract: every indemnity capped at 0."""
        return ContractDesign(theta=(0,) * k, d=(0.0,) * k)


@dataclass(frozen=True)
class MoneySplit:
    """Exact split of one realized loss: buyer share and seller share."""

    retained: float
    ceded: float


def _check_k(*objs) -> int:
    ks = {o.k for o in objs}
    if len(ks) != 1:
        raise DimensionMismatchError(f"inconsistent type counts: {sorted(ks)}")
    return ks.pop()


def lognormal_cdf(x: float, mu: float, sigma: float) -> float:
    """CDF of a log-normal law; 0 on the non-positive axis."""
    x = _check_finite("x", x)
    mu = _check_finite("mu", mu)
    sigma = _check_finite("sigma", sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if x <= 0.0:
        return 0.0
    return 0.5 * (1.0 + math.erf((math.log(x) - mu) / (sigma * _SQRT2)))


def ground_up_cdf(mix: IncidentMix, sev: SeverityModel, y: float) -> float:
    """Mixture CDF of the ground-up loss: sum_k p_k F_k(y)."""
    _check_k(mix, sev)
    y = _check_finite("y", y)
    if y <= 0.0:
        return 0.0
    z = (math.log(y) - sev.mu) / (sev.sigma * _SQRT2)
    comp = 0.5 * (1.0 + np.array([math.erf(v) for v in z]))
    return float(np.dot(mix.probs, comp))


def apply_contract(x: float, k: int, c: ContractDesign) -> MoneySplit:
    """Split one realized type-``k`` loss between buyer and seller.

    Ceded (seller) share is ``(x - d_k)_+`` under a deductible and
    ``min(x, d_k)`` under a limit; the buyer retains the rest.
    """
    x = _check_finite("x", x)
    if x < 0:
        raise ValueError(f"losses are non-negative, got {x}")
    if not 1 <= k <= c.k:
        raise ValueError(f"incident type {k} outside 1..{c.k}")
    dk = c.d[k - 1]
    if c.theta[k - 1] == 1:
        ceded = max(x - dk, 0.0)
    else:
        ceded = min(x, dk)
    retained = x - ceded
    # snap a 1-ulp residual so retained + ceded == x holds exactly
    for _ in range(2):
        if retained + ceded == x:
            break
        ceded = x - retained
        if retained + ceded == x:
            break
        retained = x - ceded
    return MoneySplit(retained=retained, ceded=ceded)


def _component_cdf(tail: bool, mu: float, sigma: float, dk: float, y: float) -> float:
    """CDF of one party's position on a single type.

    Excess side (franchise trigger): full loss borne once above ``d_k``,
    so an atom at 0 of mass F(d_k) and the upper branch F(y) for y >= d_k.
    Capped side: the law of min(X, d_k), with its atom at d_k.
    """
    if y < 0.0:
        return 0.0
    if tail:
        return lognormal_cdf(max(y, dk), mu, sigma)
    return 1.0 if y >= dk else lognormal_cdf(y, mu, sigma)


def party_loss_cdf(
    party: Party,
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    y: float,
) -> float:
    """Right-continuous CDF of one party's loss under the contract.

    The seller sits on the excess side of deductible types (theta=1) and
    under the cap of limit types (theta=0); the buyer mirrors.  All atoms
    are carried analytically.
    """
    _check_k(c, mix, sev)
    if party not in ("buyer", "seller"):
        raise ValueError(f"party must be 'buyer' or 'seller', got {party!r}")
    y = _check_finite("y", y)
    total = 0.0
    for p, entry, th, dk in zip(mix.probs, sev.entries, c.theta, c.d):
        seller_tail = th == 1
        tail = seller_tail if party == "seller" else not seller_tail
        total += p * _component_cdf(tail, entry.mu, entry.sigma, dk, y)
    return total


def _lognormal_mean(mu: float, sigma: float) -> float:
    return math.exp(mu + 0.5 * sigma * sigma)


def _limited_expected_value(d: float, mu: float, sigma: float) -> float:
    """E[min(X, d)] for log-normal X, in closed form."""
    if d <= 0.0:
        return 0.0
    z = (math.log(d) - mu) / sigma
    phi_shift = 0.5 * (1.0 + math.erf((z - sigma) / _SQRT2))
    phi = 0.5 * (1.0 + math.erf(z / _SQRT2))
    return _lognormal_mean(mu, sigma) * phi_shift + d * (1.0 - phi)


def expected_seller_loss(
    c: ContractDesign, mix: IncidentMix, sev: SeverityModel
) -> float:
    """Expected ceded amount under the settlement algebra.

    Uses the closed-form limited expected value of the log-normal per type:
    deductible types contribute E(X - d)_+, limit types E min(X, d).
    """
    _check_k(c, mix, sev)
    total = 0.0
    for p, entry, th, dk in zip(mix.probs, sev.entries, c.theta, c.d):
        lev = _limited_expected_value(dk, entry.mu, entry.sigma)
        if th == 1:
            total += p * (_lognormal_mean(entry.mu, entry.sigma) - lev)
        else:
            total += p * lev
    return total


def sample_ground_up(
    mix: IncidentMix, sev: SeverityModel, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` (type, loss) pairs from the mixture model."""
    _check_k(mix, sev)
    types = rng.choice(sev.k, size=n, p=np.asarray(mix.probs)) + 1
    z = rng.standard_normal(n)
    losses = np.exp(sev.mu[types - 1] + sev.sigma[types - 1] * z)
    return types, losses


def sample_party_loss(
    party: Party,
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw ``n`` losses from the same per-type laws party_loss_cdf evaluates."""
    _check_k(c, mix, sev)
    types, x = sample_ground_up(mix, sev, n, rng)
    theta = np.asarray(c.theta)[types - 1]
    d = np.asarray(c.d)[types - 1]
    seller_tail = theta == 1
    tail = seller_tail if party == "seller" else ~seller_tail
    out = np.where(tail, np.where(x > d, x, 0.0), np.minimum(x, d))
    return out


def model_to_json(sev: SeverityModel, mix: IncidentMix | None = None) -> str:
    """Serialize severities (and optionally the mix) to the wire document."""
    doc: dict = {
        "types": [
            {"id": e.type_id, "label": e.label or f"T{e.type_id}", "mu": e.mu, "sigma": e.sigma}
            for e in sev.entries
        ]
    }
    if mix is not None:
        _check_k(sev, mix)
        doc["probs"] = list(mix.probs)
    return json.dumps(doc, sort_keys=True)


def model_from_json(text: str) -> tuple[SeverityModel, IncidentMix | None]:
    """Parse the wire document; the probability vector is optional."""
    doc = json.loads(text)
    try:
        entries = tuple(
            SeverityEntry(
                type_id=int(t["id"]),
                mu=float(t["mu"]),
                sigma=float(t["sigma"]),
                label=str(t.get("label", "")),
            )
            for t in doc["types"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed severity document: {exc}") from exc
    sev = SeverityModel(entries=entries)
    mix = None
    if "probs" in doc and doc["probs"] is not None:
        mix = IncidentMix(probs=tuple(float(p) for p in doc["probs"]))
        _check_k(sev, mix)
    return sev, mix

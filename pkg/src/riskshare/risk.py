"""Value-at-Risk measures, the bilateral objective, and quote assembly.

VaR is the generalized inverse ``inf{y : F(y) >= gamma}`` of a monotone,
right-continuous CDF.  It is computed by bracketing (doubling an upper
bracket from 1.0 million) and bisecting to an absolute tolerance of 1e-6
million, which resolves atoms and flat segments without committing to a
grid.

The bilateral objective of a contract is the sum of the seller's VaR at
level ``alpha`` and the buyer's VaR at level ``beta`` on the valuation
view of :mod:`riskshare.lossmodel`.  Minimizing it yields Pareto-optimal
risk sharing under translation-invariant preferences; the admissible
premium interval is then pinned by both parties' participation
constraints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

from .lossmodel import (
    ContractDesign,
    IncidentMix,
    SeverityModel,
    ground_up_cdf,
    party_loss_cdf,
)

__all__ = [
    "UnreachableLevelError",
    "RiskPreferences",
    "PremiumRange",
    "QuoteResult",
    "var",
    "objective",
    "premium_range",
    "quote_report",
]

VAR_TOL = 1e-6  # absolute bisection tolerance, millions ($1)


class UnreachableLevelError(RuntimeError):
    """The CDF stays below the requested level on the whole search range."""


@dataclass(frozen=True)
class RiskPreferences:
    """Seller and buyer VaR tolerance levels."""

    alpha: float = 0.95
    beta: float = 0.90

    def __post_init__(self) -> None:
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class PremiumRange:
    """Admissible premium interval [lo, hi].

    ``lo`` is the seller's participation floor (its VaR of the ceded
    loss), ``hi`` the buyer's ceiling (its VaR reduction).  Arbitrary
    contracts may produce an empty interval; it is returned as-is and
    flagged via :attr:`empty` rather than raised.
    """

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi + VAR_TOL


@dataclass(frozen=True)
class QuoteResult:
    """Full risk decomposition of a contract, as shown to an underwriter."""

    contract: ContractDesign
    buyer_var_no_ins: float
    buyer_var_with_ins: float
    seller_var_with_ins: float
    objective: float
    premium: PremiumRange

    def __post_init__(self) -> None:
        expected = self.buyer_var_with_ins + self.seller_var_with_ins
        if self.objective != expected:
            raise ValueError("objective must equal the sum of both parties' VaR")

    @property
    def buyer_risk_reduction(self) -> float:
        return self.buyer_var_no_ins - self.buyer_var_with_ins

    @property
    def seller_risk_increase(self) -> float:
        return self.seller_var_with_ins

    @property
    def aggregate_risk_reduction(self) -> float:
        return self.buyer_var_no_ins - self.objective

    def to_dict(self) -> dict:
        return {
            "buyer_risk_without_insurance": self.buyer_var_no_ins,
            "buyer_risk_with_insurance": self.buyer_var_with_ins,
            "seller_risk_with_insurance": self.seller_var_with_ins,
            "aggregate_risk_with_insurance": self.objective,
            "premium_lo": self.premium.lo,
            "premium_hi": self.premium.hi,
            "premium_empty": self.premium.empty,
            "optimum": self.objective,
            "contract": {"theta": list(self.contract.theta), "d": list(self.contract.d)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def var(
    cdf: Callable[[float], float],
    gamma: float,
    *,
    lower: float = 0.0,
    bracket: float = 1.0,
    tol: float = VAR_TOL,
    max_doublings: int = 80,
) -> float:
    """Generalized inverse ``inf{y : F(y) >= gamma}`` of a monotone CDF.

    Handles atoms (the bisection lands on the jump) and flat segments
    (returns the left endpoint).  Raises :class:`UnreachableLevelError`
    when no bracket up to ``bracket * 2**max_doublings`` reaches the
    level, and ``ValueError`` for a level outside (0, 1).
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {gamma}")
    if cdf(lower) >= gamma:
        return lower
    lo = lower
    hi = max(bracket, lower + tol)
    doublings = 0
    while cdf(hi) < gamma:
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            raise UnreachableLevelError(
                f"CDF below {gamma} everywhere up to {hi:.3e}"
            )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if cdf(mid) >= gamma:
            hi = mid
        else:
            lo = mid
    return hi


def _party_var(
    party: str,
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    gamma: float,
) -> float:
    return var(lambda y: party_loss_cdf(party, c, mix, sev, y), gamma)  # type: ignore[arg-type]


def objective(
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
) -> float:
    """Sum of seller VaR at alpha and buyer VaR at beta under the contract."""
    return _party_var("seller", c, mix, sev, prefs.alpha) + _party_var(
        "buyer", c, mix, sev, prefs.beta
    )


def premium_range(
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
) -> PremiumRange:
    """Participation-constraint interval for the premium.

    lo = seller's VaR of its post-transfer loss; hi = buyer's VaR without
    insurance minus with insurance.  Solver outputs always yield lo <= hi;
    hand-edited contracts may not, which is reported, not raised.
    """
    lo = _party_var("seller", c, mix, sev, prefs.alpha)
    no_ins = var(lambda y: ground_up_cdf(mix, sev, y), prefs.beta)
    hi = no_ins - _party_var("buyer", c, mix, sev, prefs.beta)
    return PremiumRange(lo=lo, hi=hi)


def quote_report(
    c: ContractDesign,
    mix: IncidentMix,
    sev: SeverityModel,
    prefs: RiskPreferences,
) -> QuoteResult:
    """Assemble the displayed quote: risks with/without cover and premium."""
    seller = _party_var("seller", c, mix, sev, prefs.alpha)
    buyer = _party_var("buyer", c, mix, sev, prefs.beta)
    no_ins = var(lambda y: ground_up_cdf(mix, sev, y), prefs.beta)
    return QuoteResult(
        contract=c,
        buyer_var_no_ins=no_ins,
        buyer_var_with_ins=buyer,
        seller_var_with_ins=seller,
        objective=buyer + seller,
        premium=PremiumRange(lo=seller, hi=no_ins - buyer),
    )

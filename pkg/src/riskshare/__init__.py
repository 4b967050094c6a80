"""riskshare: bilateral design engine for incident-specific insurance.

Builds Pareto-optimal per-incident deductible/limit contracts on a
log-normal mixture loss model by minimizing the sum of seller and buyer
Value-at-Risk, with a cross-entropy solver, maximum-likelihood severity
fitting, an instant-quote surrogate, and an HTTP quote service.
"""

from .cem import (
    CemConfig,
    CemParams,
    TrialResult,
    run_multi_trial,
    run_trial,
    sample_population,
    select_solution,
    update_params,
)
from .classify import (
    BalancedAccuracy,
    LabeledDataset,
    MlrModel,
    balanced_accuracy,
    softmax_probs,
    train_mlr,
)
from .lossmodel import (
    ContractDesign,
    IncidentMix,
    MoneySplit,
    SeverityEntry,
    SeverityModel,
    apply_contract,
    expected_seller_loss,
    ground_up_cdf,
    lognormal_cdf,
    model_from_json,
    model_to_json,
    party_loss_cdf,
    sample_ground_up,
    sample_party_loss,
)
from .risk import (
    PremiumRange,
    QuoteResult,
    RiskPreferences,
    UnreachableLevelError,
    objective,
    premium_range,
    quote_report,
    var,
)
from .sevfit import (
    FittedModel,
    LossSample,
    fit_exponential,
    fit_gamma,
    fit_lognormal,
    fit_weibull,
    ks_two_sample,
    select_best,
)
from .surrogate import (
    EvalReport,
    Prediction,
    SurrogateModel,
    SurrogateSample,
    build_training_set,
    evaluate,
    predict,
    train_surrogate,
)

__version__ = "0.1.0"

__all__ = [
    "CemConfig",
    "CemParams",
    "TrialResult",
    "run_multi_trial",
    "run_trial",
    "sample_population",
    "select_solution",
    "update_params",
    "BalancedAccuracy",
    "LabeledDataset",
    "MlrModel",
    "balanced_accuracy",
    "softmax_probs",
    "train_mlr",
    "ContractDesign",
    "IncidentMix",
    "MoneySplit",
    "SeverityEntry",
    "SeverityModel",
    "apply_contract",
    "expected_seller_loss",
    "ground_up_cdf",
    "lognormal_cdf",
    "model_from_json",
    "model_to_json",
    "party_loss_cdf",
    "sample_ground_up",
    "sample_party_loss",
    "PremiumRange",
    "QuoteResult",
    "RiskPreferences",
    "UnreachableLevelError",
    "objective",
    "premium_range",
    "quote_report",
    "var",
    "FittedModel",
    "LossSample",
    "fit_exponential",
    "fit_gamma",
    "fit_lognormal",
    "fit_weibull",
    "ks_two_sample",
    "select_best",
    "EvalReport",
    "Prediction",
    "SurrogateModel",
    "SurrogateSample",
    "build_training_set",
    "evaluate",
    "predict",
    "train_surrogate",
]

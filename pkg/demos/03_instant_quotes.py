"""Instant quoting via the learned surrogate.

Exact solving takes many trials per portfolio; a quoting desk cannot
wait.  This demo solves a sweep of portfolios once, trains the
k-nearest-neighbor surrogate on the solved book, and then compares
instant predictions against fresh exact solves on held-out portfolios.

    python demos/03_instant_quotes.py
"""

import time
from pathlib import Path

import numpy as np

from riskshare import (
    CemConfig,
    IncidentMix,
    RiskPreferences,
    build_training_set,
    evaluate,
    model_from_json,
    predict,
    train_surrogate,
)

doc = Path(__file__).with_name("data").joinpath("cyber_severities.json")
sev, _ = model_from_json(doc.read_text())
prefs = RiskPreferences()
rng = np.random.default_rng(7)

print("=== building the solved book (120 portfolios, coarse solver) ===")
sweep = [
    IncidentMix(probs=tuple(v / v.sum()))
    for v in rng.dirichlet(np.ones(4), size=120)
]
start = time.perf_counter()
book = build_training_set(
    sweep, sev, prefs, CemConfig(max_iterations=30), trials_per_instance=3
)
print(f"solved {len(book)} portfolios in {time.perf_counter() - start:.1f}s")

train, held_out = book[:100], book[100:]
model = train_surrogate(train)

print("\n=== instant vs exact on held-out portfolios ===")
report = evaluate(model, held_out, sev, prefs)
print(f"objective-gap error rate: {report.error_rate:.2f} "
      f"(fraction of held-out portfolios where the instant quote's "
      f"objective differs from the exact one)")
worst = min(report.gaps)
print(f"worst gap: {worst:.4f}M (negative = instant quote slightly worse)")

print("\n=== latency ===")
mix = IncidentMix(probs=(0.25, 0.25, 0.25, 0.25))
predict(model, mix)
start = time.perf_counter()
reps = 200
for _ in range(reps):
    predict(model, mix)
per_call = (time.perf_counter() - start) / reps
print(f"instant quote: {per_call * 1e3:.3f} ms per call")

pred = predict(model, mix)
print(f"\nuniform portfolio -> theta={pred.contract.theta}, "
      f"d={tuple(round(x, 4) for x in pred.contract.d)}"
      + ("  [fallback: pattern unseen in book]" if pred.fallback else ""))

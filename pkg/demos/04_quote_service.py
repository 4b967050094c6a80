"""The quote service end to end, in process.

Boots the HTTP facade with a severity model and a small surrogate book,
then exercises every endpoint the way the browser UI does: an instant
quote, an exact solve, and a what-if evaluation of a hand-edited
contract.  For a real server use:

    riskshare serve --severity demos/data/cyber_severities.json --bind 127.0.0.1:8000

    python demos/04_quote_service.py
"""

from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from riskshare import (
    CemConfig,
    IncidentMix,
    RiskPreferences,
    build_training_set,
    model_from_json,
    train_surrogate,
)
from riskshare.service import create_app

doc = Path(__file__).with_name("data").joinpath("cyber_severities.json")
sev, default_mix = model_from_json(doc.read_text())

print("=== training a small surrogate book for instant quotes ===")
rng = np.random.default_rng(3)
sweep = [default_mix] + [
    IncidentMix(probs=tuple(v / v.sum()))
    for v in rng.dirichlet(np.ones(4), size=30)
]
book = build_training_set(
    sweep, sev, RiskPreferences(), CemConfig(max_iterations=30), 3
)
surrogate = train_surrogate(book)

app = create_app(sev, surrogate_model=surrogate, default_mix=default_mix)
client = TestClient(app)

print("\nGET /v1/health ->", client.get("/v1/health").json())
print("GET /v1/model  ->", client.get("/v1/model").json()["types"][0], "...")

probs = list(default_mix.probs)

print("\nPOST /v1/quote (surrogate mode: instant)")
r = client.post("/v1/quote", json={"probs": probs, "mode": "surrogate"})
body = r.json()
print(f"  {r.status_code} in {r.headers['X-Compute-Millis']}ms computed")
print(f"  optimum {body['optimum']:.4f}M, "
      f"premium [{body['premium_lo']:.4f}, {body['premium_hi']:.4f}]M")

print("\nPOST /v1/quote (exact mode, 10 seeded trials)")
r = client.post(
    "/v1/quote",
    json={"probs": probs, "mode": "exact", "trials": 10, "seed": 0},
)
body = r.json()
print(f"  {r.status_code} in {r.headers['X-Compute-Millis']}ms computed")
print(f"  optimum {body['optimum']:.4f}M, theta {body['contract']['theta']}, "
      f"budget_exhausted={body['budget_exhausted']}")

print("\nPOST /v1/evaluate (what-if: underwriter edits the contract)")
edited = {
    "probs": probs,
    "theta": body["contract"]["theta"],
    "d": [round(2.0 * x, 4) for x in body["contract"]["d"]],
}
r = client.post("/v1/evaluate", json=edited)
w = r.json()
print(f"  {r.status_code}: optimum {w['optimum']:.4f}M, "
      f"premium [{w['premium_lo']:.4f}, {w['premium_hi']:.4f}]M, "
      f"empty={w['premium_empty']}")

print("\nPOST /v1/quote with a malformed probability vector")
r = client.post("/v1/quote", json={"probs": [0.9, 0.9, 0.1, 0.1]})
print(f"  {r.status_code}: {r.json()['detail']}")

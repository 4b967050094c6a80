import type { QuoteDoc } from "../src/types.js";

export const TYPE_LABELS = ["PV", "DB", "FE", "ITE"];

// Verbatim /v1/quote response of the bundled service for the reference
// portfolio (exact mode, ten trials, seed 0).
export const REFERENCE_QUOTE: QuoteDoc = {
  aggregate_risk_with_insurance: 11.333261489868164,
  budget_exhausted: false,
  buyer_risk_with_insurance: 9.038049697875977,
  buyer_risk_without_insurance: 13.698101043701172,
  contract: {
    d: [0.07758718474580595, 0.0153019711281495, 0.1371469457287023, 0.021017292733610197],
    theta: [1, 0, 0, 0],
  },
  fallback: false,
  mode: "exact",
  optimum: 11.333261489868164,
  premium_empty: false,
  premium_hi: 4.660051345825195,
  premium_lo: 2.2952117919921875,
  seed: 0,
  seller_risk_with_insurance: 2.2952117919921875,
};

export function quoteWith(overrides: Partial<QuoteDoc>): QuoteDoc {
  return {
    ...REFERENCE_QUOTE,
    ...overrides,
    contract: {
      theta: [...(overrides.contract ?? REFERENCE_QUOTE.contract).theta],
      d: [...(overrides.contract ?? REFERENCE_QUOTE.contract).d],
    },
  };
}

// Wire types of the /v1 quote service.

export interface ContractDoc {
  theta: number[];
  d: number[];
}

export interface QuoteDoc {
  buyer_risk_without_insurance: number;
  buyer_risk_with_insurance: number;
  seller_risk_with_insurance: number;
  aggregate_risk_with_insurance: number;
  premium_lo: number;
  premium_hi: number;
  premium_empty: boolean;
  optimum: number;
  contract: ContractDoc;
  mode?: string;
  seed?: number;
  budget_exhausted?: boolean;
  fallback?: boolean;
}

export interface SeverityTypeDoc {
  id: number;
  label: string;
  mu: number;
  sigma: number;
}

export interface ModelDoc {
  types: SeverityTypeDoc[];
  probs?: number[];
}

export type SolveMode = "exact" | "surrogate";

export interface QuoteRequestDraft {
  probs: number[];
  alpha: number;
  beta: number;
  mode: SolveMode;
  trials: number;
  seed: number;
}

export interface EvaluateRequest {
  probs: number[];
  alpha: number;
  beta: number;
  theta: number[];
  d: number[];
}

import type { ContractDoc, QuoteDoc, QuoteRequestDraft } from "./types.js";

// Session state for the quote explorer. What-if edits work on copies;
// the last applied service result is kept frozen so an edit can never
// mutate a solver-produced contract in place. Responses are applied
// under a monotone sequence number so a stale (slow) response can never
// overwrite a newer one.

export interface Snapshot {
  draft: QuoteRequestDraft;
  contract: ContractDoc | null;
}

export interface SessionState {
  baseUrl: string;
  draft: QuoteRequestDraft;
  /** editable what-if copy of the displayed contract */
  contract: ContractDoc | null;
  /** last applied service payload (frozen) */
  lastQuote: Readonly<QuoteDoc> | null;
  history: Snapshot[];
  nextSeq: number;
  appliedSeq: number;
}

export function newSession(baseUrl: string, k: number): SessionState {
  return {
    baseUrl,
    draft: {
      probs: new Array(k).fill(1 / k),
      alpha: 0.95,
      beta: 0.9,
      mode: "surrogate",
      trials: 10,
      seed: 0,
    },
    contract: null,
    lastQuote: null,
    history: [],
    nextSeq: 1,
    appliedSeq: 0,
  };
}

function cloneDraft(draft: QuoteRequestDraft): QuoteRequestDraft {
  return { ...draft, probs: [...draft.probs] };
}

function cloneContract(c: ContractDoc | null): ContractDoc | null {
  return c === null ? null : { theta: [...c.theta], d: [...c.d] };
}

/** Problems that must block a request; empty when the draft is sendable. */
export function validateDraft(draft: QuoteRequestDraft): string[] {
  const problems: string[] = [];
  const sum = draft.probs.reduce((a, b) => a + b, 0);
  if (draft.probs.some((p) => p < 0 || !Number.isFinite(p))) {
    problems.push("probabilities must be non-negative");
  }
  if (Math.abs(sum - 1) > 1e-9) {
    problems.push(`probabilities must sum to 1 (got ${sum})`);
  }
  for (const [name, v] of [["alpha", draft.alpha], ["beta", draft.beta]] as const) {
    if (!(v > 0 && v < 1)) problems.push(`${name} must lie in (0, 1)`);
  }
  if (draft.mode === "exact" && draft.trials < 1) {
    problems.push("exact mode needs at least one trial");
  }
  return problems;
}

/** Push the pre-edit snapshot, then apply the mutation to copies. */
export function pushEdit(
  state: SessionState,
  mutate: (draft: QuoteRequestDraft, contract: ContractDoc | null) => void,
): void {
  state.history.push({
    draft: cloneDraft(state.draft),
    contract: cloneContract(state.contract),
  });
  const draft = cloneDraft(state.draft);
  const contract = cloneContract(state.contract);
  mutate(draft, contract);
  state.draft = draft;
  state.contract = contract;
}

export function undo(state: SessionState): boolean {
  const snap = state.history.pop();
  if (snap === undefined) return false;
  state.draft = snap.draft;
  state.contract = snap.contract;
  return true;
}

export function takeSeq(state: SessionState): number {
  return state.nextSeq++;
}

/** Apply a service response unless a newer one already landed. */
export function applyQuote(
  state: SessionState,
  seq: number,
  quote: QuoteDoc,
): boolean {
  if (seq <= state.appliedSeq) return false;
  state.appliedSeq = seq;
  state.lastQuote = Object.freeze({
    ...quote,
    contract: Object.freeze({
      theta: Object.freeze([...quote.contract.theta]) as unknown as number[],
      d: Object.freeze([...quote.contract.d]) as unknown as number[],
    }),
  });
  state.contract = { theta: [...quote.contract.theta], d: [...quote.contract.d] };
  return true;
}

/** Premium slider positions are confined to the displayed interval. */
export function clampPremium(state: SessionState, value: number): number {
  if (state.lastQuote === null) return value;
  const { premium_lo, premium_hi } = state.lastQuote;
  return Math.min(Math.max(value, premium_lo), premium_hi);
}

import type { QuoteClient } from "./api.js";
import {
  applyQuote,
  pushEdit,
  SessionState,
  takeSeq,
  validateDraft,
} from "./state.js";
import type { ContractDoc, QuoteDoc, QuoteRequestDraft } from "./types.js";

// Drives the what-if loop: every edit is pushed onto the undo stack,
// then an evaluate call is debounced (sliders fire dozens of edits per
// second) and its response applied only if no newer response landed
// first. The solve path is explicit and not debounced.

export interface ControllerEvents {
  onQuote(quote: QuoteDoc): void;
  onError(message: string): void;
  onValidation(problems: string[]): void;
}

export class WhatIfController {
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly client: QuoteClient,
    readonly state: SessionState,
    private readonly events: ControllerEvents,
    private readonly debounceMs = 150,
  ) {}

  /** Apply an edit and schedule a re-evaluation of the edited contract. */
  edit(mutate: (draft: QuoteRequestDraft, contract: ContractDoc | null) => void): void {
    pushEdit(this.state, mutate);
    const problems = validateDraft(this.state.draft);
    this.events.onValidation(problems);
    if (problems.length > 0 || this.state.contract === null) {
      return; // invalid drafts never reach the service
    }
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fireEvaluate();
    }, this.debounceMs);
  }

  /** Ask the service for a fresh quote (surrogate or exact). */
  async solve(): Promise<void> {
    const problems = validateDraft(this.state.draft);
    this.events.onValidation(problems);
    if (problems.length > 0) return;
    const seq = takeSeq(this.state);
    const result = await this.client.quote(this.state.draft);
    if (result.body === null) {
      this.events.onError(result.error ?? "quote failed");
      return;
    }
    if (applyQuote(this.state, seq, result.body)) {
      this.events.onQuote(result.body);
    }
  }

  private async fireEvaluate(): Promise<void> {
    const contract = this.state.contract;
    if (contract === null) return;
    const seq = takeSeq(this.state);
    const result = await this.client.evaluate({
      probs: [...this.state.draft.probs],
      alpha: this.state.draft.alpha,
      beta: this.state.draft.beta,
      theta: [...contract.theta],
      d: [...contract.d],
    });
    if (result.body === null) {
      // the draft survives service errors; the user just sees the banner
      this.events.onError(result.error ?? "evaluate failed");
      return;
    }
    if (applyQuote(this.state, seq, result.body)) {
      this.events.onQuote(result.body);
    }
  }
}

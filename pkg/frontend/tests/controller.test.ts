import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { QuoteClient } from "../src/api.js";
import { WhatIfController } from "../src/controller.js";
import { applyQuote, newSession, takeSeq } from "../src/state.js";
import type { QuoteDoc } from "../src/types.js";
import { quoteWith, REFERENCE_QUOTE } from "./fixtures.js";

interface Captured {
  url: string;
  body: unknown;
}

function makeHarness(respond: (call: Captured, index: number) => Promise<QuoteDoc>) {
  const calls: Captured[] = [];
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const call = {
      url,
      body: init?.body !== undefined ? JSON.parse(String(init.body)) : null,
    };
    const index = calls.length;
    calls.push(call);
    const doc = await respond(call, index);
    return { status: 200, json: async () => doc };
  };
  const client = new QuoteClient("http://svc", fetchImpl);
  const state = newSession("http://svc", 4);
  state.draft.probs = [0.3383, 0.5717, 0.07, 0.02];
  applyQuote(state, takeSeq(state), quoteWith({}));
  const quotes: QuoteDoc[] = [];
  const errors: string[] = [];
  const validations: string[][] = [];
  const controller = new WhatIfController(
    client,
    state,
    {
      onQuote: (q) => quotes.push(q),
      onError: (m) => errors.push(m),
      onValidation: (p) => validations.push(p),
    },
    150,
  );
  return { controller, state, calls, quotes, errors, validations };
}

describe("what-if controller", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("debounces slider bursts into one evaluate call", async () => {
    const h = makeHarness(async () => quoteWith({}));
    for (const v of [0.11, 0.12, 0.13, 0.14]) {
      h.controller.edit((_, c) => {
        if (c !== null) c.d[1] = v;
      });
      vi.advanceTimersByTime(50); // under the 150ms debounce window
    }
    vi.advanceTimersByTime(200);
    await vi.runAllTimersAsync();
    expect(h.calls.length).toBe(1);
    const body = h.calls[0].body as { d: number[] };
    expect(h.calls[0].url).toBe("http://svc/v1/evaluate");
    expect(body.d[1]).toBe(0.14); // only the latest edit reaches the wire
  });

  it("sends the edited contract verbatim", async () => {
    const h = makeHarness(async () => quoteWith({}));
    h.controller.edit((_, c) => {
      if (c !== null) {
        c.theta[2] = 1 - c.theta[2];
        c.d[2] = 0.2;
      }
    });
    vi.advanceTimersByTime(200);
    await vi.runAllTimersAsync();
    const body = h.calls[0].body as {
      probs: number[];
      theta: number[];
      d: number[];
      alpha: number;
      beta: number;
    };
    expect(body.probs).toEqual([0.3383, 0.5717, 0.07, 0.02]);
    expect(body.theta).toEqual([1, 0, 1, 0]);
    expect(body.d[2]).toBe(0.2);
    expect(body.alpha).toBe(0.95);
    expect(body.beta).toBe(0.9);
  });

  it("never applies a stale response over a newer one", async () => {
    const flush = async () => {
      for (let i = 0; i < 20; i++) await Promise.resolve();
    };
    const gates: Array<(doc: QuoteDoc) => void> = [];
    const h = makeHarness(
      (_call, index) =>
        new Promise((resolve) => {
          gates[index] = resolve;
        }),
    );
    h.controller.edit((_, c) => {
      if (c !== null) c.d[0] = 0.111;
    });
    vi.advanceTimersByTime(200);
    await flush();
    h.controller.edit((_, c) => {
      if (c !== null) c.d[0] = 0.222;
    });
    vi.advanceTimersByTime(200);
    await flush();
    expect(gates.length).toBe(2);
    // the second (newer) request resolves first
    gates[1](quoteWith({ optimum: 222 }));
    await flush();
    gates[0](quoteWith({ optimum: 111 }));
    await flush();
    expect(h.quotes.map((q) => q.optimum)).toEqual([222]);
    expect(h.state.lastQuote?.optimum).toBe(222);
  });

  it("client-side validation blocks bad probability edits", async () => {
    const h = makeHarness(async () => quoteWith({}));
    h.controller.edit((draft) => {
      draft.probs = [0.9, 0.9, 0.1, 0.1];
    });
    vi.advanceTimersByTime(500);
    await vi.runAllTimersAsync();
    expect(h.calls.length).toBe(0);
    expect(h.validations.at(-1)?.length).toBeGreaterThan(0);
  });

  it("service errors surface without losing the draft", async () => {
    const fetchImpl = async () => ({
      status: 400,
      json: async () => ({ detail: "no good" }),
    });
    const client = new QuoteClient("http://svc", fetchImpl);
    const state = newSession("http://svc", 4);
    state.draft.probs = [0.25, 0.25, 0.25, 0.25];
    applyQuote(state, takeSeq(state), quoteWith({}));
    const errors: string[] = [];
    const controller = new WhatIfController(client, state, {
      onQuote: () => undefined,
      onError: (m) => errors.push(m),
      onValidation: () => undefined,
    });
    controller.edit((_, c) => {
      if (c !== null) c.d[0] = 0.5;
    });
    vi.advanceTimersByTime(200);
    await vi.runAllTimersAsync();
    expect(errors.length).toBe(1);
    expect(state.contract?.d[0]).toBe(0.5); // draft intact
  });

  it("solve path requests a quote and applies it", async () => {
    const h = makeHarness(async () => quoteWith({ optimum: 7 }));
    await h.controller.solve();
    expect(h.calls[0].url).toBe("http://svc/v1/quote");
    const body = h.calls[0].body as { mode: string; probs: number[] };
    expect(body.mode).toBe("surrogate");
    expect(h.state.lastQuote?.optimum).toBe(7);
  });
});

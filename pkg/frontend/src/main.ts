import { QuoteClient } from "./api.js";
import { WhatIfController } from "./controller.js";
import { renderBanner, renderPremiumSlider, renderView } from "./dom.js";
import { newSession, undo } from "./state.js";
import { renderQuote } from "./viewmodel.js";

// Page bootstrap: fetch the loaded model, build the session, wire the
// controls. The service URL comes from ?service=... or defaults to the
// same origin.

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? "";
  const client = new QuoteClient(baseUrl);

  const banner = document.getElementById("banner")!;
  const quotePane = document.getElementById("quote")!;
  const premiumPane = document.getElementById("premium")!;
  const probsPane = document.getElementById("probs")!;

  const model = await client.model();
  if (model.body === null) {
    renderBanner(banner, `cannot reach quote service: ${model.error}`);
    return;
  }
  const labels = model.body.types.map((t) => t.label);
  const state = newSession(baseUrl, labels.length);
  if (model.body.probs !== undefined) {
    state.draft.probs = [...model.body.probs];
  }

  const controller = new WhatIfController(client, state, {
    onQuote(quote) {
      const rendered = renderQuote(quote, labels);
      if (!rendered.ok) {
        renderBanner(banner, rendered.error);
        return;
      }
      renderBanner(banner, null);
      renderView(
        quotePane,
        rendered.view,
        (i, value) => controller.edit((_, c) => {
          if (c !== null) c.d[i] = value;
        }),
        (i) => controller.edit((_, c) => {
          if (c !== null) c.theta[i] = 1 - c.theta[i];
        }),
      );
      renderPremiumSlider(premiumPane, state, rendered.view);
    },
    onError(message) {
      renderBanner(banner, message);
    },
    onValidation(problems) {
      renderBanner(banner, problems.length > 0 ? problems.join("; ") : null);
    },
  });

  const renderProbInputs = () => {
    probsPane.replaceChildren();
    state.draft.probs.forEach((p, i) => {
      const label = document.createElement("label");
      label.textContent = labels[i];
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.0001";
      input.min = "0";
      input.value = String(p);
      input.addEventListener("change", () =>
        controller.edit((draft) => {
          draft.probs[i] = Number(input.value);
        }),
      );
      label.appendChild(input);
      probsPane.appendChild(label);
    });

    const mkButton = (text: string, onClick: () => void) => {
      const b = document.createElement("button");
      b.textContent = text;
      b.addEventListener("click", onClick);
      probsPane.appendChild(b);
    };
    mkButton("instant quote", () => {
      state.draft.mode = "surrogate";
      void controller.solve();
    });
    mkButton("exact solve (budget 120s)", () => {
      state.draft.mode = "exact";
      void controller.solve();
    });
    mkButton("undo", () => {
      undo(state);
      renderProbInputs();
    });
  };
  renderProbInputs();
}

void boot();

import { clampPremium, SessionState } from "./state.js";
import type { QuoteView } from "./viewmodel.js";

// Straight DOM rendering of a QuoteView; all strings arrive
// preformatted from the view model.

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (className !== undefined) node.className = className;
  return node;
}

export function renderBanner(container: HTMLElement, message: string | null): void {
  container.replaceChildren();
  if (message !== null) {
    container.appendChild(el("div", message, "banner"));
  }
}

export function renderView(
  container: HTMLElement,
  view: QuoteView,
  onThreshold: (index: number, value: number) => void,
  onFlagToggle: (index: number) => void,
): void {
  container.replaceChildren();

  const incidents = el("table", undefined, "incidents");
  const head = el("tr");
  for (const h of ["incident type", "cover", "threshold (M)", ""]) {
    head.appendChild(el("th", h));
  }
  incidents.appendChild(head);
  view.incidents.forEach((row, i) => {
    const tr = el("tr");
    tr.appendChild(el("td", row.label));
    tr.appendChild(el("td", row.kind, `kind-${row.kind}`));
    tr.appendChild(el("td", row.threshold));
    const cell = el("td");
    const slider = el("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.0001";
    slider.value = row.threshold;
    slider.addEventListener("input", () => onThreshold(i, Number(slider.value)));
    const toggle = el("button", "switch cover type");
    toggle.addEventListener("click", () => onFlagToggle(i));
    cell.appendChild(slider);
    cell.appendChild(toggle);
    tr.appendChild(cell);
    incidents.appendChild(tr);
  });
  container.appendChild(incidents);

  const figures = el("table", undefined, "figures");
  for (const row of view.figures) {
    const tr = el("tr");
    tr.appendChild(el("td", row.name));
    tr.appendChild(el("td", row.value, "money"));
    figures.appendChild(tr);
  }
  container.appendChild(figures);

  for (const badge of view.badges) {
    container.appendChild(el("div", badge, "badge"));
  }
}

export function renderPremiumSlider(
  container: HTMLElement,
  state: SessionState,
  view: QuoteView,
): void {
  container.replaceChildren();
  container.appendChild(
    el("span", `premium in [${view.premiumLo}, ${view.premiumHi}] (M)`),
  );
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = view.premiumLo;
  slider.max = view.premiumHi;
  slider.step = "0.0001";
  slider.value = view.premiumLo;
  const chosen = el("span", view.premiumLo, "money");
  slider.addEventListener("input", () => {
    const clamped = clampPremium(state, Number(slider.value));
    slider.value = clamped.toFixed(4);
    chosen.textContent = clamped.toFixed(4);
  });
  container.appendChild(slider);
  container.appendChild(chosen);
}

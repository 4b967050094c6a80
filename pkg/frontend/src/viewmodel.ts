import { coverageLabel, money4 } from "./format.js";
import type { QuoteDoc } from "./types.js";

export interface IncidentRow {
  label: string;
  kind: "deductible" | "limit";
  threshold: string;
}

export interface FigureRow {
  name: string;
  value: string;
}

export interface QuoteView {
  incidents: IncidentRow[];
  figures: FigureRow[];
  premiumLo: string;
  premiumHi: string;
  premiumEmpty: boolean;
  badges: string[];
}

export type RenderResult =
  | { ok: true; view: QuoteView }
  | { ok: false; error: string };

const FIGURE_FIELDS: Array<[string, keyof QuoteDoc]> = [
  ["buyer risk without insurance", "buyer_risk_without_insurance"],
  ["buyer risk with insurance", "buyer_risk_with_insurance"],
  ["buyer risk reduction (premium ceiling)", "premium_hi"],
  ["seller risk with insurance", "seller_risk_with_insurance"],
  ["aggregate risk with insurance", "aggregate_risk_with_insurance"],
  ["optimum", "optimum"],
];

function isNumberArray(v: unknown, n?: number): v is number[] {
  return (
    Array.isArray(v) &&
    (n === undefined || v.length === n) &&
    v.every((x) => typeof x === "number" && Number.isFinite(x))
  );
}

function malformed(reason: string): RenderResult {
  return { ok: false, error: `malformed quote payload: ${reason}` };
}

/** Build the display model for a quote. Every value string is the
 * 4-decimal rendering of a field of the payload itself. */
export function renderQuote(payload: unknown, typeLabels: string[]): RenderResult {
  if (typeof payload !== "object" || payload === null) {
    return malformed("not an object");
  }
  const doc = payload as Record<string, unknown>;
  for (const [, field] of FIGURE_FIELDS) {
    if (typeof doc[field] !== "number" || !Number.isFinite(doc[field])) {
      return malformed(`missing numeric field ${String(field)}`);
    }
  }
  if (typeof doc.premium_lo !== "number" || typeof doc.premium_hi !== "number") {
    return malformed("missing premium interval");
  }
  const contract = doc.contract as Record<string, unknown> | undefined;
  if (
    contract === undefined ||
    !isNumberArray(contract.theta, typeLabels.length) ||
    !isNumberArray(contract.d, typeLabels.length)
  ) {
    return malformed("missing or mis-sized contract");
  }
  const theta = contract.theta;
  const d = contract.d;
  const quote = doc as unknown as QuoteDoc;
  const badges: string[] = [];
  if (quote.premium_empty) badges.push("premium interval empty: infeasible what-if");
  if (quote.budget_exhausted) badges.push("time budget exhausted: best found so far");
  if (quote.fallback) badges.push("instant quote fell back to nearest solved portfolio");
  return {
    ok: true,
    view: {
      incidents: typeLabels.map((label, i) => ({
        label,
        kind: coverageLabel(theta[i]),
        threshold: money4(d[i]),
      })),
      figures: FIGURE_FIELDS.map(([name, field]) => ({
        name,
        value: money4(quote[field] as number),
      })),
      premiumLo: money4(quote.premium_lo),
      premiumHi: money4(quote.premium_hi),
      premiumEmpty: Boolean(quote.premium_empty),
      badges,
    },
  };
}

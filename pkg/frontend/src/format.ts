// Display formatting. Every number shown in the UI goes through money4
// applied directly to a service-response value; the client never derives
// figures of its own.

export function money4(value: number): string {
  return value.toFixed(4);
}

export function coverageLabel(theta: number): "deductible" | "limit" {
  return theta === 1 ? "deductible" : "limit";
}

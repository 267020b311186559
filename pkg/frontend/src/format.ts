/** Display formatting. Numbers pass through Number formatting only; no
 * figure shown to the user is computed here. */

export function fmtNumber(x: number | null | undefined, digits = 6): string {
  if (x === null || x === undefined) return "-";
  if (!Number.isFinite(x)) return String(x);
  if (x !== 0 && (Math.abs(x) >= 1e7 || Math.abs(x) < 1e-4)) {
    return x.toExponential(Math.max(1, digits - 1));
  }
  const fixed = x.toPrecision(digits);
  // trim trailing zeros without re-rounding
  return fixed.includes(".") ? fixed.replace(/\.?0+$/, "") : fixed;
}

export function fmtPair(pair: [string, string] | null | undefined): string {
  return pair ? `${pair[0]} – ${pair[1]}` : "-";
}

export function fmtVector(v: number[] | null | undefined, digits = 4): string {
  if (!v) return "-";
  return `[${v.map((x) => fmtNumber(x, digits)).join(", ")}]`;
}

// Deterministic colour per batch-group letter: same letter, same colour, in
// every session and on every station.

const PALETTE = [
  "#e6194b",
  "#3cb44b",
  "#ffe119",
  "#4363d8",
  "#f58231",
  "#911eb4",
  "#46f0f0",
  "#f032e6",
  "#bcf60c",
  "#fabebe",
  "#008080",
  "#e6beff",
] as const;

/** A..Z -> 1..26, AA -> 27, AB -> 28 ... (spreadsheet order). */
export function labelOrdinal(label: string): number {
  let value = 0;
  for (const ch of label) {
    const digit = ch.charCodeAt(0) - 64; // "A" = 1
    if (digit < 1 || digit > 26) {
      throw new Error(`invalid group label '${label}'`);
    }
    value = value * 26 + digit;
  }
  return value;
}

export function colorForLabel(label: string): string {
  return PALETTE[(labelOrdinal(label) - 1) % PALETTE.length]!;
}

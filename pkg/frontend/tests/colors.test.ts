import { describe, expect, it } from "vitest";

import { colorForLabel, labelOrdinal } from "../src/colors.js";

describe("group colours", () => {
  it("orders labels spreadsheet style", () => {
    expect(labelOrdinal("A")).toBe(1);
    expect(labelOrdinal("Z")).toBe(26);
    expect(labelOrdinal("AA")).toBe(27);
    expect(labelOrdinal("AB")).toBe(28);
  });

  it("is a pure function of the label", () => {
    for (const label of ["A", "B", "H", "AA"]) {
      expect(colorForLabel(label)).toBe(colorForLabel(label));
    }
  });

  it("gives neighbouring labels distinct colours", () => {
    const labels = ["A", "B", "C", "D", "E", "F", "G", "H"];
    const colours = new Set(labels.map(colorForLabel));
    expect(colours.size).toBe(labels.length);
  });

  it("rejects malformed labels", () => {
    expect(() => colorForLabel("a")).toThrow();
    expect(() => colorForLabel("A1")).toThrow();
  });
});

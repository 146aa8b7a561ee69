import { describe, expect, it } from "vitest";

import { buildScheduleView, isValidReorder, nextState } from "../src/scheduleView.js";
import type { ScheduleEntry, ScheduleResponse } from "../src/types.js";

function entry(position: number, mbId: string, label: string, state: ScheduleEntry["state"] = "pending"): ScheduleEntry {
  return {
    position,
    mb_id: mbId,
    fprb_label: label,
    thickness: 180,
    kernel_count: 2,
    state,
    operator_note: null,
  };
}

function response(entries: ScheduleEntry[]): ScheduleResponse {
  return {
    run_id: "r1",
    config_digest: "c1",
    fitness: { f1: 0, f2: 1, combined: 1 },
    entries,
  };
}

describe("schedule view", () => {
  it("renders four batches over two groups in two colours", () => {
    const view = buildScheduleView(response([
      entry(0, "A1", "A"),
      entry(1, "A2", "A"),
      entry(2, "B1", "B"),
      entry(3, "B2", "B"),
    ]));
    expect(view.cards.map((c) => c.mbId)).toEqual(["A1", "A2", "B1", "B2"]);
    const colours = new Set(view.cards.map((c) => c.color));
    expect(colours.size).toBe(2);
    expect(view.cards[0]!.color).toBe(view.cards[1]!.color);
  });

  it("keeps server position order even when entries arrive shuffled", () => {
    const view = buildScheduleView(response([
      entry(2, "B1", "B"),
      entry(0, "A1", "A"),
      entry(1, "A2", "A"),
    ]));
    expect(view.cards.map((c) => c.mbId)).toEqual(["A1", "A2", "B1"]);
  });

  it("marks the first unsorted batch as current", () => {
    const view = buildScheduleView(response([
      entry(0, "A1", "A", "sorted"),
      entry(1, "A2", "A", "at_control"),
      entry(2, "B1", "B"),
    ]));
    expect(view.currentPosition).toBe(1);
    const done = buildScheduleView(response([entry(0, "A1", "A", "sorted")]));
    expect(done.currentPosition).toBe(1);
  });

  it("only ever advances one step", () => {
    expect(nextState("pending")).toBe("cut");
    expect(nextState("cut")).toBe("at_control");
    expect(nextState("at_control")).toBe("sorted");
    expect(nextState("sorted")).toBeNull();
  });
});

describe("reorder validation", () => {
  const entries = [
    entry(0, "A1", "A", "cut"),
    entry(1, "A2", "A"),
    entry(2, "B1", "B"),
  ];

  it("accepts permutations that keep non-pending batches in place", () => {
    expect(isValidReorder(entries, ["A1", "B1", "A2"])).toBe(true);
    expect(isValidReorder(entries, ["A1", "A2", "B1"])).toBe(true);
  });

  it("rejects moving a cut batch", () => {
    expect(isValidReorder(entries, ["A2", "A1", "B1"])).toBe(false);
  });

  it("rejects non-permutations", () => {
    expect(isValidReorder(entries, ["A1", "A2"])).toBe(false);
    expect(isValidReorder(entries, ["A1", "A2", "A2"])).toBe(false);
    expect(isValidReorder(entries, ["A1", "A2", "Z9"])).toBe(false);
  });
});

// View model for the control-step pallet board.
//
// Board state is derived purely from the server's pallet timeline and the
// batch statuses: a group's pallets are on the floor once any of its batches
// has been cut and leave when its last batch is sorted.

import { colorForLabel } from "./colors.js";
import type { PalletsResponse, ScheduleEntry } from "./types.js";

export interface OpenPallet {
  fprId: string;
  fprbLabel: string;
  color: string;
  openedAt: number;
}

export interface PalletBoard {
  runId: string;
  pallets: OpenPallet[];
  open: number;
  limit: number;
  /** True when advancing the next scheduled batch would push the board over the limit. */
  warning: boolean;
  nextBatch: string | null;
}

function groupStates(entries: ScheduleEntry[]): Map<string, ScheduleEntry[]> {
  const groups = new Map<string, ScheduleEntry[]>();
  for (const entry of entries) {
    const members = groups.get(entry.fprb_label) ?? [];
    members.push(entry);
    groups.set(entry.fprb_label, members);
  }
  return groups;
}

function activeLabels(entries: ScheduleEntry[]): Set<string> {
  const active = new Set<string>();
  for (const [label, members] of groupStates(entries)) {
    const started = members.some((e) => e.state !== "pending");
    const finished = members.every((e) => e.state === "sorted");
    if (started && !finished) {
      active.add(label);
    }
  }
  return active;
}

function firstOpenPosition(pallets: PalletsResponse, fprId: string): number {
  for (const slot of pallets.timeline) {
    if (slot.open_fprs.includes(fprId)) {
      return slot.position;
    }
  }
  return -1;
}

export function buildPalletBoard(pallets: PalletsResponse, entries: ScheduleEntry[]): PalletBoard {
  const active = activeLabels(entries);
  const board: OpenPallet[] = [];
  for (const [fprId, label] of Object.entries(pallets.fprb_of_fpr).sort()) {
    if (active.has(label)) {
      board.push({
        fprId,
        fprbLabel: label,
        color: colorForLabel(label),
        openedAt: firstOpenPosition(pallets, fprId),
      });
    }
  }

  const ordered = [...entries].sort((a, b) => a.position - b.position);
  const next = ordered.find((e) => e.state === "pending") ?? null;
  let projected = board.length;
  if (next !== null && !active.has(next.fprb_label)) {
    projected += Object.values(pallets.fprb_of_fpr).filter((label) => label === next.fprb_label).length;
  }

  return {
    runId: pallets.run_id,
    pallets: board,
    open: board.length,
    limit: pallets.limit,
    warning: projected > pallets.limit,
    nextBatch: next ? next.mb_id : null,
  };
}

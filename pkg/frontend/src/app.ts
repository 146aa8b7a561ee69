// DOM wiring for the control station. All numbers on screen come from the
// service; this file only renders them and forwards operator actions.

import { ApiError, StationClient } from "./api.js";
import { buildPalletBoard } from "./palletBoard.js";
import { buildScheduleView, nextState } from "./scheduleView.js";
import type { BatchCard } from "./scheduleView.js";
import type { PalletsResponse, ScheduleResponse } from "./types.js";
import { WhatIfOverlay } from "./whatIf.js";

const POLL_INTERVAL_MS = 5000;

interface Station {
  client: StationClient;
  runId: string;
  overlay: WhatIfOverlay;
  schedule: ScheduleResponse | null;
  pallets: PalletsResponse | null;
  stale: boolean;
  dragged: string | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function refresh(station: Station): Promise<void> {
  try {
    station.schedule = await station.client.getSchedule(station.runId);
    station.pallets = await station.client.getPallets(station.runId);
    station.stale = false;
  } catch {
    station.stale = true; // keep showing the last good data
  }
  render(station);
}

function cardOrder(station: Station): BatchCard[] {
  if (!station.schedule) return [];
  const view = buildScheduleView(station.schedule);
  const local = station.overlay.localOrder();
  if (!local) return view.cards;
  const byId = new Map(view.cards.map((c) => [c.mbId, c]));
  return local.map((mbId) => byId.get(mbId)!).filter(Boolean);
}

function render(station: Station): void {
  const root = document.getElementById("station");
  if (!root || !station.schedule || !station.pallets) return;
  root.textContent = "";

  if (station.stale) {
    const banner = el("div", "banner stale", "connection lost; showing last known state");
    const retry = el("button", "", "retry");
    retry.onclick = () => void refresh(station);
    banner.appendChild(retry);
    root.appendChild(banner);
  }

  const view = buildScheduleView(station.schedule);
  const board = buildPalletBoard(station.pallets, station.schedule.entries);

  // pallet board with capacity gauge
  const boardBox = el("section", "pallet-board");
  boardBox.appendChild(el("h2", "", `Pallets ${board.open}/${board.limit}`));
  if (board.warning) {
    boardBox.appendChild(el("div", "banner warning", "next batch would exceed the pallet limit"));
  }
  const gauge = el("div", "gauge");
  const fill = el("div", "gauge-fill");
  fill.style.width = `${Math.min(100, (board.open / board.limit) * 100)}%`;
  gauge.appendChild(fill);
  boardBox.appendChild(gauge);
  const palletRow = el("div", "pallet-row");
  for (const pallet of board.pallets) {
    const chip = el("span", "pallet", `${pallet.fprId} (${pallet.fprbLabel})`);
    chip.style.background = pallet.color;
    palletRow.appendChild(chip);
  }
  boardBox.appendChild(palletRow);
  root.appendChild(boardBox);

  // what-if overlay numbers
  const overlayState = station.overlay.state;
  if (overlayState.mode === "preview" || overlayState.mode === "applied") {
    const n = overlayState.numbers;
    const panel = el("section", "whatif");
    panel.appendChild(el("h2", "", overlayState.mode === "preview" ? "What-if preview" : "Local order applied"));
    panel.appendChild(el(
      "p",
      "",
      `f1 ${n.f1} (${fmtDelta(n.delta_f1)})  f2 ${n.f2} (${fmtDelta(n.delta_f2)})  ` +
        `combined ${n.combined} (${fmtDelta(n.delta_combined)})  pallets ${n.max_open} (${fmtDelta(n.delta_max_open)})`,
    ));
    if (overlayState.mode === "preview") {
      const apply = el("button", "", "apply");
      apply.onclick = () => {
        station.overlay.apply();
        render(station);
      };
      panel.appendChild(apply);
    }
    const discard = el("button", "", "discard");
    discard.onclick = () => {
      station.overlay.discard();
      render(station);
    };
    panel.appendChild(discard);
    root.appendChild(panel);
  } else if (overlayState.mode === "error") {
    const panel = el("section", "whatif error");
    panel.appendChild(el("p", "", overlayState.message));
    const dismiss = el("button", "", "dismiss");
    dismiss.onclick = () => {
      station.overlay.discard();
      render(station);
    };
    panel.appendChild(dismiss);
    root.appendChild(panel);
  }

  // schedule cards
  const list = el("section", "schedule");
  list.appendChild(el("h2", "", `Schedule (${view.cards.length} batches)`));
  for (const card of cardOrder(station)) {
    list.appendChild(renderCard(station, card, card.position === view.currentPosition));
  }
  root.appendChild(list);
}

function fmtDelta(value: number): string {
  return value > 0 ? `+${value}` : `${value}`;
}

function renderCard(station: Station, card: BatchCard, isCurrent: boolean): HTMLElement {
  const node = el("div", `card state-${card.state}${isCurrent ? " current" : ""}`);
  node.style.borderLeft = `10px solid ${card.color}`;
  node.appendChild(el("span", "mb", card.mbId));
  node.appendChild(el("span", "meta", `${card.fprbLabel} · ${card.thickness / 10} mm · ${card.kernelCount} kernels`));
  node.appendChild(el("span", "badge", card.state));
  if (card.note) node.appendChild(el("span", "note", card.note));

  const advance = nextState(card.state);
  if (advance) {
    const button = el("button", "", `mark ${advance}`);
    button.onclick = () => void advanceStatus(station, card.mbId, advance);
    node.appendChild(button);
  }

  // drag to reorder; only pending cards move, the server checks the rest
  node.draggable = card.state === "pending";
  node.dataset.mb = card.mbId;
  node.ondragstart = () => {
    station.dragged = card.mbId;
  };
  node.ondragover = (event) => event.preventDefault();
  node.ondrop = (event) => {
    event.preventDefault();
    if (station.dragged && station.dragged !== card.mbId) {
      void proposeSwap(station, station.dragged, card.mbId);
    }
    station.dragged = null;
  };
  return node;
}

async function advanceStatus(station: Station, mbId: string, state: string): Promise<void> {
  if (!station.schedule) return;
  const entry = station.schedule.entries.find((e) => e.mb_id === mbId);
  if (!entry) return;
  const previous = entry.state;
  entry.state = state as typeof entry.state; // optimistic
  render(station);
  try {
    await station.client.postStatus(station.runId, mbId, state as never);
  } catch (err) {
    entry.state = previous; // rolled back; fetch the authoritative state
    const message = err instanceof ApiError ? err.detail : String(err);
    window.alert(`rejected: ${message}`);
  }
  await refresh(station);
}

async function proposeSwap(station: Station, fromId: string, toId: string): Promise<void> {
  if (!station.schedule) return;
  const order = cardOrder(station).map((c) => c.mbId);
  const from = order.indexOf(fromId);
  const to = order.indexOf(toId);
  if (from === -1 || to === -1) return;
  order.splice(to, 0, ...order.splice(from, 1));
  await station.overlay.propose(station.schedule.entries, order);
  render(station);
}

export async function start(baseUrl: string): Promise<void> {
  const client = new StationClient(baseUrl);
  const picker = document.getElementById("runs");
  if (!picker) return;
  const runs = await client.listRuns();
  picker.textContent = "";
  for (const run of runs.runs) {
    const button = el("button", "run", `${run.run_id} (${run.manufacturing_batches} batches)`);
    button.onclick = () => {
      const station: Station = {
        client,
        runId: run.run_id,
        overlay: new WhatIfOverlay(client, run.run_id),
        schedule: null,
        pallets: null,
        stale: false,
        dragged: null,
      };
      void refresh(station);
      window.setInterval(() => void refresh(station), POLL_INTERVAL_MS);
    };
    picker.appendChild(button);
  }
}

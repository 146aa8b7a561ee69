// Wire types for the cutting work-center service API.

export type BatchState = "pending" | "cut" | "at_control" | "sorted";

export interface RunSummary {
  run_id: string;
  config_digest: string;
  created_at: string;
  fpr_batches: number;
  manufacturing_batches: number;
}

export interface RunListResponse {
  runs: RunSummary[];
}

export interface ScheduleEntry {
  position: number;
  mb_id: string;
  fprb_label: string;
  thickness: number;
  kernel_count: number;
  state: BatchState;
  operator_note: string | null;
}

export interface Fitness {
  f1: number;
  f2: number;
  combined: number;
}

export interface ScheduleResponse {
  run_id: string;
  config_digest: string;
  fitness: Fitness;
  entries: ScheduleEntry[];
}

export interface PalletPosition {
  position: number;
  open_fprs: string[];
}

export interface PalletsResponse {
  run_id: string;
  config_digest: string;
  limit: number;
  max_open: number;
  violations: number[];
  timeline: PalletPosition[];
  fprb_of_fpr: Record<string, string>;
}

export interface ComparisonRow {
  policy: string;
  setups: number;
  max_wip_same_fpr: number;
  max_pallets_open: number;
}

export interface ReportResponse {
  run_id: string;
  config_digest: string;
  order_digest: string;
  fitness: Fitness;
  comparison: ComparisonRow[];
  text: string;
}

export interface StatusResponse {
  run_id: string;
  config_digest: string;
  mb_id: string;
  state: BatchState;
  updated_at: string;
  operator_note: string | null;
}

export interface WhatIfResponse {
  run_id: string;
  config_digest: string;
  f1: number;
  f2: number;
  combined: number;
  max_open: number;
  pallet_violations: number[];
  delta_f1: number;
  delta_f2: number;
  delta_combined: number;
  delta_max_open: number;
}

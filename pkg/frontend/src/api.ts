// Typed client for the control-station endpoints. The UI never computes
// fitness or pallet numbers itself: everything displayed comes back from here.

import type {
  BatchState,
  PalletsResponse,
  ReportResponse,
  RunListResponse,
  ScheduleResponse,
  StatusResponse,
  WhatIfResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `network failure: ${String(err)}`);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail ?? body);
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class StationClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  listRuns(): Promise<RunListResponse> {
    return request(this.url("/runs"));
  }

  getSchedule(runId: string): Promise<ScheduleResponse> {
    return request(this.url(`/runs/${runId}/schedule`));
  }

  getPallets(runId: string): Promise<PalletsResponse> {
    return request(this.url(`/runs/${runId}/pallets`));
  }

  getReport(runId: string): Promise<ReportResponse> {
    return request(this.url(`/runs/${runId}/report`));
  }

  postStatus(runId: string, mbId: string, state: BatchState, note?: string): Promise<StatusResponse> {
    return request(this.url(`/runs/${runId}/batches/${mbId}/status`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(note === undefined ? { state } : { state, note }),
    });
  }

  postWhatIf(runId: string, sequence: string[]): Promise<WhatIfResponse> {
    return request(this.url(`/runs/${runId}/whatif`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ sequence }),
    });
  }
}

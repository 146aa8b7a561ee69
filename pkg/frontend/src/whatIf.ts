// What-if overlay state: propose a reordering, show the server's recomputed
// numbers, then either apply it as the local working order or discard back to
// the server plan. Stored artifacts on the server never change.

import { StationClient } from "./api.js";
import { isValidReorder } from "./scheduleView.js";
import type { ScheduleEntry, WhatIfResponse } from "./types.js";

export type WhatIfState =
  | { mode: "idle" }
  | { mode: "preview"; sequence: string[]; numbers: WhatIfResponse }
  | { mode: "applied"; sequence: string[]; numbers: WhatIfResponse }
  | { mode: "error"; message: string };

export class WhatIfOverlay {
  state: WhatIfState = { mode: "idle" };

  constructor(
    private readonly client: StationClient,
    private readonly runId: string,
  ) {}

  /** POST the hypothetical order; the overlay shows exactly what the server returned. */
  async propose(entries: ScheduleEntry[], sequence: string[]): Promise<WhatIfState> {
    if (!isValidReorder(entries, sequence)) {
      this.state = { mode: "error", message: "only pending batches can be reordered" };
      return this.state;
    }
    try {
      const numbers = await this.client.postWhatIf(this.runId, sequence);
      this.state = { mode: "preview", sequence: [...sequence], numbers };
    } catch (err) {
      this.state = { mode: "error", message: String(err) };
    }
    return this.state;
  }

  /** Keep the previewed order as the local working arrangement. */
  apply(): WhatIfState {
    if (this.state.mode === "preview") {
      this.state = { mode: "applied", sequence: this.state.sequence, numbers: this.state.numbers };
    }
    return this.state;
  }

  /** Back to the server plan. */
  discard(): WhatIfState {
    this.state = { mode: "idle" };
    return this.state;
  }

  /** The order the cards should currently render in; null means server order. */
  localOrder(): string[] | null {
    return this.state.mode === "applied" ? this.state.sequence : null;
  }
}

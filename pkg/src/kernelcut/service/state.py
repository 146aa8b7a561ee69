"""Server-side run state: artifact store, batch statuses, append-only event log.

Status mutations and their log appends go through one lock, so concurrent
operators see a single consistent ordering; replaying the log from an empty
state reconstructs the current status map exactly.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..errors import KernelCutError
from ..pipeline import EVENTS_FILE, RUN_FILE, RunArtifacts, load_artifacts

STATES = ("pending", "cut", "at_control", "sorted")


class UnknownRunError(KernelCutError):
    pass


class UnknownBatchError(KernelCutError):
    pass


class IllegalTransitionError(KernelCutError):
    pass


@dataclass
class BatchStatus:
    mb_id: str
    state: str
    updated_at: str
    operator_note: str | None = None


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class RunStore:
    """All runs under one store directory, plus their mutable batch statuses."""

    def __init__(self, store_dir):
        self.store_dir = Path(store_dir)
        self._lock = threading.Lock()
        self._runs: dict[str, RunArtifacts] = {}
        self._statuses: dict[str, dict[str, BatchStatus]] = {}
        self.reload()

    def reload(self) -> None:
        """Scan the store directory and replay each run's event log."""
        runs: dict[str, RunArtifacts] = {}
        statuses: dict[str, dict[str, BatchStatus]] = {}
        if self.store_dir.exists():
            for run_dir in sorted(self.store_dir.iterdir()):
                if not (run_dir / RUN_FILE).exists():
                    continue
                artifacts = load_artifacts(run_dir)
                runs[artifacts.run_id] = artifacts
                statuses[artifacts.run_id] = self._replay(run_dir, artifacts)
        with self._lock:
            self._runs = runs
            self._statuses = statuses

    def _replay(self, run_dir: Path, artifacts: RunArtifacts) -> dict[str, BatchStatus]:
        status = {
            mb_id: BatchStatus(mb_id=mb_id, state="pending", updated_at=artifacts.created_at)
            for mb_id in artifacts.schedule.sequence
        }
        events_path = run_dir / EVENTS_FILE
        if events_path.exists():
            for line in events_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                event = json.loads(line)
                status[event["mb_id"]] = BatchStatus(
                    mb_id=event["mb_id"],
                    state=event["state"],
                    updated_at=event["ts"],
                    operator_note=event.get("note"),
                )
        return status

    def run_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._runs)

    def get(self, run_id: str) -> RunArtifacts:
        with self._lock:
            if run_id not in self._runs:
                raise UnknownRunError(f"no run '{run_id}' in store")
            return self._runs[run_id]

    def statuses(self, run_id: str) -> dict[str, BatchStatus]:
        with self._lock:
            if run_id not in self._statuses:
                raise UnknownRunError(f"no run '{run_id}' in store")
            return {mb_id: BatchStatus(**vars(st)) for mb_id, st in self._statuses[run_id].items()}

    def advance_status(self, run_id: str, mb_id: str, state: str, note: str | None = None) -> BatchStatus:
        """Move one batch forward a single step; anything else is rejected."""
        if state not in STATES:
            raise IllegalTransitionError(f"unknown state '{state}'")
        with self._lock:
            if run_id not in self._runs:
                raise UnknownRunError(f"no run '{run_id}' in store")
            run_statuses = self._statuses[run_id]
            if mb_id not in run_statuses:
                raise UnknownBatchError(f"run '{run_id}' has no batch '{mb_id}'")
            current = run_statuses[mb_id]
            if STATES.index(state) != STATES.index(current.state) + 1:
                if current.state == "sorted":
                    detail = "it is already in the terminal state"
                else:
                    detail = f"the only legal next state is '{STATES[STATES.index(current.state) + 1]}'"
                raise IllegalTransitionError(f"batch '{mb_id}' is '{current.state}'; {detail}, not '{state}'")
            updated = BatchStatus(mb_id=mb_id, state=state, updated_at=_now(), operator_note=note)
            self._append_event(run_id, updated)
            run_statuses[mb_id] = updated
            return BatchStatus(**vars(updated))

    def _append_event(self, run_id: str, status: BatchStatus) -> None:
        record = {
            "run_id": run_id,
            "mb_id": status.mb_id,
            "state": status.state,
            "note": status.operator_note,
            "ts": status.updated_at,
        }
        path = self.store_dir / run_id / EVENTS_FILE
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

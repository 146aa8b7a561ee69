"""Pydantic request and response models for the control-station API.

Every response carries the run id and the configuration digest so a client
can always tell which plan its numbers belong to.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel


class RunSummary(BaseModel):
    run_id: str
    config_digest: str
    created_at: str
    fpr_batches: int
    manufacturing_batches: int


class RunListResponse(BaseModel):
    runs: list[RunSummary]


class ScheduleEntry(BaseModel):
    position: int
    mb_id: str
    fprb_label: str
    thickness: int
    kernel_count: int
    state: str
    operator_note: Optional[str] = None


class FitnessModel(BaseModel):
    f1: int
    f2: int
    combined: float


class ScheduleResponse(BaseModel):
    run_id: str
    config_digest: str
    fitness: FitnessModel
    entries: list[ScheduleEntry]


class PalletPosition(BaseModel):
    position: int
    open_fprs: list[str]


class PalletsResponse(BaseModel):
    run_id: str
    config_digest: str
    limit: int
    max_open: int
    violations: list[int]
    timeline: list[PalletPosition]
    fprb_of_fpr: dict[str, str]


class ComparisonRow(BaseModel):
    policy: str
    setups: int
    max_wip_same_fpr: int
    max_pallets_open: int


class ReportResponse(BaseModel):
    run_id: str
    config_digest: str
    order_digest: str
    fitness: FitnessModel
    comparison: list[ComparisonRow]
    text: str


class StatusUpdateRequest(BaseModel):
    state: Literal["pending", "cut", "at_control", "sorted"]
    note: Optional[str] = None


class StatusResponse(BaseModel):
    run_id: str
    config_digest: str
    mb_id: str
    state: str
    updated_at: str
    operator_note: Optional[str] = None


class WhatIfRequest(BaseModel):
    sequence: list[str]


class WhatIfResponse(BaseModel):
    run_id: str
    config_digest: str
    f1: int
    f2: int
    combined: float
    max_open: int
    pallet_violations: list[int]
    delta_f1: int
    delta_f2: int
    delta_combined: float
    delta_max_open: int

"""FastAPI application wrapping the core package for the control station.

The service only reads artifacts produced by the pipeline; the one thing it
mutates is batch status, and that goes through the store's event log. What-if
requests are evaluated on the fly and never touch stored artifacts.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import metrics, objective
from ..model import Schedule
from ..pipeline import RunArtifacts
from . import schemas
from .state import IllegalTransitionError, RunStore, UnknownBatchError, UnknownRunError


def _weights(artifacts: RunArtifacts) -> objective.ObjectiveWeights:
    echo = artifacts.config_echo
    return objective.ObjectiveWeights(alpha=echo["alpha"], beta=echo["beta"])


def create_app(store: RunStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="kernelcut control station", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(UnknownRunError)
    async def unknown_run(request: Request, exc: UnknownRunError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(UnknownBatchError)
    async def unknown_batch(request: Request, exc: UnknownBatchError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(IllegalTransitionError)
    async def illegal_transition(request: Request, exc: IllegalTransitionError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/runs", response_model=schemas.RunListResponse)
    def list_runs():
        summaries = []
        for run_id in store.run_ids():
            a = store.get(run_id)
            summaries.append(schemas.RunSummary(
                run_id=a.run_id,
                config_digest=a.config_digest,
                created_at=a.created_at,
                fpr_batches=len(a.batching.fpr_batches),
                manufacturing_batches=len(a.batching.manufacturing_batches),
            ))
        return schemas.RunListResponse(runs=summaries)

    @app.get("/runs/{run_id}/schedule", response_model=schemas.ScheduleResponse)
    def get_schedule(run_id: str):
        a = store.get(run_id)
        statuses = store.statuses(run_id)
        by_id = {mb.mb_id: mb for mb in a.batching.manufacturing_batches}
        labels = {i: fb.label for i, fb in enumerate(a.batching.fpr_batches)}
        entries = []
        for pos, mb_id in enumerate(a.schedule.sequence):
            mb = by_id[mb_id]
            st = statuses[mb_id]
            entries.append(schemas.ScheduleEntry(
                position=pos,
                mb_id=mb_id,
                fprb_label=labels[mb.fprb_index],
                thickness=mb.thickness,
                kernel_count=len(mb.kernel_ids),
                state=st.state,
                operator_note=st.operator_note,
            ))
        best = a.ga.best.fitness
        return schemas.ScheduleResponse(
            run_id=a.run_id,
            config_digest=a.config_digest,
            fitness=schemas.FitnessModel(f1=best.f1, f2=best.f2, combined=best.combined),
            entries=entries,
        )

    @app.get("/runs/{run_id}/pallets", response_model=schemas.PalletsResponse)
    def get_pallets(run_id: str):
        a = store.get(run_id)
        fprb_of_fpr = dict(sorted(a.batching.assignment.items()))
        return schemas.PalletsResponse(
            run_id=a.run_id,
            config_digest=a.config_digest,
            limit=a.pallets.limit,
            max_open=a.pallets.max_open,
            violations=list(a.pallets.violations),
            timeline=[
                schemas.PalletPosition(position=t, open_fprs=sorted(open_set))
                for t, open_set in enumerate(a.pallets.open_by_position)
            ],
            fprb_of_fpr=fprb_of_fpr,
        )

    @app.get("/runs/{run_id}/report", response_model=schemas.ReportResponse)
    def get_report(run_id: str):
        from ..pipeline import render_report

        a = store.get(run_id)
        best = a.ga.best.fitness
        return schemas.ReportResponse(
            run_id=a.run_id,
            config_digest=a.config_digest,
            order_digest=a.order_digest,
            fitness=schemas.FitnessModel(f1=best.f1, f2=best.f2, combined=best.combined),
            comparison=[
                schemas.ComparisonRow(
                    policy=row.policy,
                    setups=row.setups,
                    max_wip_same_fpr=row.max_wip_same_fpr,
                    max_pallets_open=row.max_pallets_open,
                )
                for row in a.comparison.rows
            ],
            text=render_report(a, "text"),
        )

    @app.post("/runs/{run_id}/batches/{mb_id}/status", response_model=schemas.StatusResponse)
    def post_status(run_id: str, mb_id: str, body: schemas.StatusUpdateRequest):
        a = store.get(run_id)
        status = store.advance_status(run_id, mb_id, body.state, body.note)
        return schemas.StatusResponse(
            run_id=a.run_id,
            config_digest=a.config_digest,
            mb_id=status.mb_id,
            state=status.state,
            updated_at=status.updated_at,
            operator_note=status.operator_note,
        )

    @app.post("/runs/{run_id}/whatif", response_model=schemas.WhatIfResponse)
    def post_whatif(run_id: str, body: schemas.WhatIfRequest):
        a = store.get(run_id)
        if sorted(body.sequence) != sorted(a.schedule.sequence):
            return JSONResponse(
                status_code=400,
                content={"detail": "sequence must be a permutation of the run's manufacturing batches"},
            )
        hypothetical = Schedule.from_sequence(body.sequence)
        weights = _weights(a)
        value = objective.fitness(hypothetical, a.batching, weights)
        timeline = metrics.simulate_control_step(hypothetical, a.batching, limit=a.pallets.limit)
        current = a.ga.best.fitness
        return schemas.WhatIfResponse(
            run_id=a.run_id,
            config_digest=a.config_digest,
            f1=value.f1,
            f2=value.f2,
            combined=value.combined,
            max_open=timeline.max_open,
            pallet_violations=list(timeline.violations),
            delta_f1=value.f1 - current.f1,
            delta_f2=value.f2 - current.f2,
            delta_combined=value.combined - current.combined,
            delta_max_open=timeline.max_open - a.pallets.max_open,
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

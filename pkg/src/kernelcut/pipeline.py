"""End-to-end run pipeline and its on-disk artifacts.

A run is: validate the book, batch it, evolve a schedule, compare against the
legacy rules, simulate the control step. Everything an operator or the
service needs afterwards is written under one run directory. The schedule
file and the rendered reports contain no timestamps, so identical inputs and
seed reproduce them byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import metrics
from .batching import BatchingResult, batch_kernels, piece_count_spread
from .config import RunConfig
from .errors import InvalidOrderBookError, KernelCutError, PipelineError
from .ga import GaRunResult, Individual, Termination, evolve
from .metrics import ComparisonReport, PalletTimeline, PolicyMetrics
from .model import (
    FPRBatch,
    ManufacturingBatch,
    OrderBook,
    Schedule,
    ValidationReport,
    validate_order_book,
)
from .objective import FitnessValue
from .orders import order_book_digest

SCHEDULE_FILE = "schedule.json"
RUN_FILE = "run.json"
REPORT_TEXT_FILE = "report.txt"
REPORT_MARKDOWN_FILE = "report.md"
EVENTS_FILE = "events.jsonl"


@dataclass
class RunArtifacts:
    run_id: str
    created_at: str
    order_digest: str
    config_echo: dict
    config_digest: str
    validation: ValidationReport
    oversize_kernels: tuple[str, ...]
    batching: BatchingResult
    ga: GaRunResult
    schedule: Schedule
    comparison: ComparisonReport
    pallets: PalletTimeline
    fprb_piece_counts: dict[str, int]
    fprb_piece_stddev: float


def config_digest(echo: dict) -> str:
    canonical = json.dumps(echo, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def run_pipeline(
    order_book: OrderBook,
    config: RunConfig,
    eval_workers: int = 1,
    now: datetime | None = None,
) -> RunArtifacts:
    """Execute every stage on one order book; failures carry their stage name."""

    def stage(name: str, fn):
        try:
            return fn()
        except KernelCutError as err:
            raise PipelineError(name, err) from err

    def validate():
        report = validate_order_book(order_book)
        if not report.valid:
            raise InvalidOrderBookError(report)
        return report

    validation = stage("validation", validate)
    batching = stage("batching", lambda: batch_kernels(order_book, config.batching))
    weights = config.weights_for(len(batching.manufacturing_batches))
    ga_result = stage("scheduling", lambda: evolve(batching, weights, config.ga, eval_workers=eval_workers))
    schedule = ga_result.best_schedule
    comparison = stage(
        "metrics",
        lambda: metrics.compare(order_book, (batching, schedule), limit=config.pallet_limit),
    )
    pallets = stage(
        "simulation",
        lambda: metrics.simulate_control_step(schedule, batching, limit=config.pallet_limit),
    )

    created = (now or datetime.now(timezone.utc)).strftime("%Y%m%dT%H%M%SZ")
    echo = config.echo(batch_count=len(batching.manufacturing_batches))
    piece_counts, stddev = piece_count_spread(order_book, batching)
    return RunArtifacts(
        run_id=f"{created}-s{config.ga.seed}",
        created_at=created,
        order_digest=order_book_digest(order_book),
        config_echo=echo,
        config_digest=config_digest(echo),
        validation=validation,
        oversize_kernels=tuple(sorted(k.kernel_id for k in order_book.kernels if k.oversize)),
        batching=batching,
        ga=ga_result,
        schedule=schedule,
        comparison=comparison,
        pallets=pallets,
        fprb_piece_counts=piece_counts,
        fprb_piece_stddev=stddev,
    )


# ---------------------------------------------------------------------------
# schedule file

def write_schedule(schedule: Schedule, path) -> None:
    """Positions are explicit on disk: a hand-edited file that breaks the
    permutation shows up in constraint checking instead of silently reordering."""
    payload = {"positions": {mb_id: pos for mb_id, pos in sorted(schedule.positions.items())}}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_schedule(path) -> Schedule:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    positions = payload["positions"]
    sequence = [mb_id for mb_id, _ in sorted(positions.items(), key=lambda item: item[1])]
    return Schedule(sequence=tuple(sequence), positions={k: int(v) for k, v in positions.items()})


# ---------------------------------------------------------------------------
# artifact serialization

def _batching_to_dict(b: BatchingResult) -> dict:
    return {
        "fpr_batches": [
            {"label": fb.label, "fpr_ids": sorted(fb.fpr_ids), "p_m": fb.p_m}
            for fb in b.fpr_batches
        ],
        "manufacturing_batches": [
            {
                "mb_id": mb.mb_id,
                "fprb_index": mb.fprb_index,
                "thickness": mb.thickness,
                "kernel_ids": sorted(mb.kernel_ids),
            }
            for mb in b.manufacturing_batches
        ],
        "assignment": dict(sorted(b.assignment.items())),
        "kernel_fprs": dict(sorted(b.kernel_fprs.items())),
    }


def _batching_from_dict(data: dict) -> BatchingResult:
    return BatchingResult(
        fpr_batches=tuple(
            FPRBatch(label=fb["label"], fpr_ids=frozenset(fb["fpr_ids"]), p_m=fb["p_m"])
            for fb in data["fpr_batches"]
        ),
        manufacturing_batches=tuple(
            ManufacturingBatch(
                mb_id=mb["mb_id"],
                fprb_index=mb["fprb_index"],
                thickness=mb["thickness"],
                kernel_ids=frozenset(mb["kernel_ids"]),
            )
            for mb in data["manufacturing_batches"]
        ),
        assignment=dict(data["assignment"]),
        kernel_fprs=dict(data["kernel_fprs"]),
    )


def _fitness_to_dict(v: FitnessValue) -> dict:
    return {"f1": v.f1, "f2": v.f2, "combined": v.combined}


def _fitness_from_dict(data: dict) -> FitnessValue:
    return FitnessValue(combined=data["combined"], f2=data["f2"], f1=data["f1"])


def artifacts_to_dict(a: RunArtifacts) -> dict:
    return {
        "run_id": a.run_id,
        "created_at": a.created_at,
        "order_digest": a.order_digest,
        "config": a.config_echo,
        "config_digest": a.config_digest,
        "validation": {
            "violations": [{"kind": v.kind, "message": v.message} for v in a.validation.violations],
            "warnings": [{"kind": v.kind, "message": v.message} for v in a.validation.warnings],
        },
        "oversize_kernels": list(a.oversize_kernels),
        "batching": _batching_to_dict(a.batching),
        "ga": {
            "best_sequence": list(a.ga.best.sequence),
            "best_fitness": _fitness_to_dict(a.ga.best.fitness),
            "history": [list(entry) for entry in a.ga.history],
            "generations_run": a.ga.generations_run,
            "termination_reason": a.ga.termination_reason.value,
        },
        "schedule": {"positions": dict(sorted(a.schedule.positions.items()))},
        "comparison": [
            {
                "policy": row.policy,
                "setups": row.setups,
                "max_wip_same_fpr": row.max_wip_same_fpr,
                "max_pallets_open": row.max_pallets_open,
            }
            for row in a.comparison.rows
        ],
        "pallets": {
            "limit": a.pallets.limit,
            "max_open": a.pallets.max_open,
            "violations": list(a.pallets.violations),
            "open_by_position": [sorted(s) for s in a.pallets.open_by_position],
        },
        "fprb_piece_counts": dict(sorted(a.fprb_piece_counts.items())),
        "fprb_piece_stddev": a.fprb_piece_stddev,
    }


def artifacts_from_dict(data: dict) -> RunArtifacts:
    from .model import ValidationReport, Violation  # local to keep module top lean

    ga_data = data["ga"]
    best = Individual(
        sequence=tuple(ga_data["best_sequence"]),
        fitness=_fitness_from_dict(ga_data["best_fitness"]),
    )
    ga_result = GaRunResult(
        best=best,
        history=tuple((h[0], h[1]) for h in ga_data["history"]),
        generations_run=ga_data["generations_run"],
        termination_reason=Termination(ga_data["termination_reason"]),
    )
    positions = {k: int(v) for k, v in data["schedule"]["positions"].items()}
    sequence = tuple(mb_id for mb_id, _ in sorted(positions.items(), key=lambda item: item[1]))
    return RunArtifacts(
        run_id=data["run_id"],
        created_at=data["created_at"],
        order_digest=data["order_digest"],
        config_echo=data["config"],
        config_digest=data["config_digest"],
        validation=ValidationReport(
            violations=tuple(Violation(v["kind"], v["message"]) for v in data["validation"]["violations"]),
            warnings=tuple(Violation(v["kind"], v["message"]) for v in data["validation"]["warnings"]),
        ),
        oversize_kernels=tuple(data["oversize_kernels"]),
        batching=_batching_from_dict(data["batching"]),
        ga=ga_result,
        schedule=Schedule(sequence=sequence, positions=positions),
        comparison=ComparisonReport(rows=tuple(
            PolicyMetrics(
                policy=row["policy"],
                setups=row["setups"],
                max_wip_same_fpr=row["max_wip_same_fpr"],
                max_pallets_open=row["max_pallets_open"],
            )
            for row in data["comparison"]
        )),
        pallets=PalletTimeline(
            open_by_position=tuple(frozenset(s) for s in data["pallets"]["open_by_position"]),
            max_open=data["pallets"]["max_open"],
            limit=data["pallets"]["limit"],
            violations=tuple(data["pallets"]["violations"]),
        ),
        fprb_piece_counts=dict(data["fprb_piece_counts"]),
        fprb_piece_stddev=data["fprb_piece_stddev"],
    )


def save_artifacts(artifacts: RunArtifacts, store_dir) -> Path:
    """Write run.json, the schedule file and both report renderings under one run directory."""
    run_dir = Path(store_dir) / artifacts.run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / RUN_FILE).write_text(
        json.dumps(artifacts_to_dict(artifacts), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    write_schedule(artifacts.schedule, run_dir / SCHEDULE_FILE)
    (run_dir / REPORT_TEXT_FILE).write_text(render_report(artifacts, "text"), encoding="utf-8")
    (run_dir / REPORT_MARKDOWN_FILE).write_text(render_report(artifacts, "markdown"), encoding="utf-8")
    return run_dir


def load_artifacts(run_dir) -> RunArtifacts:
    payload = json.loads((Path(run_dir) / RUN_FILE).read_text(encoding="utf-8"))
    return artifacts_from_dict(payload)


# ---------------------------------------------------------------------------
# report rendering

def _schedule_rows(a: RunArtifacts):
    by_id = {mb.mb_id: mb for mb in a.batching.manufacturing_batches}
    labels = {i: fb.label for i, fb in enumerate(a.batching.fpr_batches)}
    for pos, mb_id in enumerate(a.schedule.sequence):
        mb = by_id[mb_id]
        yield pos, mb_id, mb.thickness, labels[mb.fprb_index]


def render_report(artifacts: RunArtifacts, format: str = "text") -> str:
    """Human-facing run summary: comparison table, schedule listing, pallet timeline."""
    if format not in ("text", "markdown"):
        raise ValueError(f"unknown report format '{format}'")
    md = format == "markdown"
    a = artifacts
    best = a.ga.best.fitness
    lines: list[str] = []

    def heading(text: str):
        if md:
            lines.append(f"## {text}")
        else:
            lines.append(text)
            lines.append("-" * len(text))

    if md:
        lines.append("# Cutting work-center run")
    else:
        lines.append("CUTTING WORK-CENTER RUN")
        lines.append("=" * 23)
    lines.append("")
    lines.append(f"order digest: {a.order_digest}")
    lines.append(f"config digest: {a.config_digest}")
    lines.append(f"seed: {a.config_echo['seed']}")
    lines.append(
        f"batches: {len(a.batching.fpr_batches)} FPR batches, "
        f"{len(a.batching.manufacturing_batches)} manufacturing batches"
    )
    if a.oversize_kernels:
        lines.append(f"oversize kernels excluded: {', '.join(a.oversize_kernels)}")
    lines.append(
        f"fitness: f1={best.f1} f2={best.f2} combined={best.combined:g} "
        f"({a.ga.generations_run} generations, {a.ga.termination_reason.value})"
    )
    sizes = " ".join(f"{label}={count}" for label, count in sorted(a.fprb_piece_counts.items()))
    lines.append(f"group piece counts: {sizes} (stddev {a.fprb_piece_stddev:.2f})")
    lines.append("")

    heading("Comparison")
    if md:
        lines.append("| policy | setups | max_wip_same_fpr | max_pallets_open |")
        lines.append("| --- | ---: | ---: | ---: |")
        for row in a.comparison.rows:
            lines.append(f"| {row.policy} | {row.setups} | {row.max_wip_same_fpr} | {row.max_pallets_open} |")
    else:
        lines.append("policy | setups | max_wip_same_fpr | max_pallets_open")
        for row in a.comparison.rows:
            lines.append(f"{row.policy} | {row.setups} | {row.max_wip_same_fpr} | {row.max_pallets_open}")
    lines.append("")

    heading("Schedule")
    if md:
        lines.append("| pos | mb_id | thickness | fprb |")
        lines.append("| ---: | --- | ---: | --- |")
        for pos, mb_id, thickness, label in _schedule_rows(a):
            lines.append(f"| {pos} | {mb_id} | {thickness} | {label} |")
    else:
        lines.append("pos | mb_id | thickness | fprb")
        for pos, mb_id, thickness, label in _schedule_rows(a):
            lines.append(f"{pos:>3} | {mb_id} | {thickness} | {label}")
    lines.append("")

    heading(f"Pallet timeline (limit {a.pallets.limit})")
    for t, open_set in enumerate(a.pallets.open_by_position):
        marker = "  << over limit" if t in a.pallets.violations else ""
        names = ",".join(sorted(open_set))
        lines.append(f"pos {t}: open={len(open_set)} [{names}]{marker}")
    if a.pallets.violations:
        lines.append(f"pallet limit exceeded at positions {list(a.pallets.violations)}")
    else:
        lines.append(f"pallet limit respected (max {a.pallets.max_open} <= {a.pallets.limit})")
    lines.append("")
    return "\n".join(lines)

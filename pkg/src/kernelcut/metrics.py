"""Evaluation of schedules the way the shop floor sees them: setup count,
work-in-process between a reference's batches, and simultaneously open
pallets at the control step. Includes the two legacy scheduling rules used as
baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import objective
from .batching import BatchingResult
from .errors import EmptyInputError, UnscheduledFprError
from .model import FPRBatch, ManufacturingBatch, OrderBook, Schedule, batch_label


@dataclass(frozen=True)
class PalletTimeline:
    """Per-position open pallet sets for one schedule.

    A reference's pallet stays open from the first to the last position of its
    FPR batch: the sorters cannot close a kitchen until its whole group has
    passed the saw.
    """

    open_by_position: tuple[frozenset[str], ...]
    max_open: int
    limit: int
    violations: tuple[int, ...]


@dataclass(frozen=True)
class PolicyMetrics:
    policy: str
    setups: int
    max_wip_same_fpr: int
    max_pallets_open: int


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[PolicyMetrics, ...]


def setups(schedule: Schedule, batching: BatchingResult) -> int:
    """Thickness changeovers; same definition as the f2 objective, single implementation."""
    return objective.f2(schedule, batching)


def _positions_by_fpr(schedule: Schedule, batching: BatchingResult) -> dict[str, list[int]]:
    positions: dict[str, list[int]] = {fpr_id: [] for fpr_id in batching.assignment}
    for mb in batching.manufacturing_batches:
        pos = schedule.positions.get(mb.mb_id)
        if pos is None:
            continue
        for kid in mb.kernel_ids:
            fpr_id = batching.kernel_fprs[kid]
            positions[fpr_id].append(pos)
    return {fpr_id: sorted(set(ps)) for fpr_id, ps in positions.items()}


def max_wip_same_fpr(schedule: Schedule, batching: BatchingResult) -> int:
    """Largest count of foreign schedule slots a reference has to wait through.

    For each reference: the slots strictly between its first and last batch
    that do not themselves carry one of its kernels. A reference whose batches
    run back to back scores 0 however many batches it has.
    """
    worst = 0
    for fpr_id, ps in sorted(_positions_by_fpr(schedule, batching).items()):
        if not ps:
            raise UnscheduledFprError(f"reference '{fpr_id}' has no batch in the schedule")
        span = ps[-1] - ps[0] - 1
        waiting = span - (len(ps) - 2) if span > 0 else 0
        worst = max(worst, waiting)
    return worst


def simulate_control_step(schedule: Schedule, batching: BatchingResult, limit: int = 7) -> PalletTimeline:
    """Walk the schedule position by position tracking which pallets are open.

    One pallet per reference, opened when the first batch of its FPR group is
    cut and closed after the group's last; positions whose open count exceeds
    the floor limit are reported.
    """
    intervals: dict[int, tuple[int, int]] = {}
    for mb in batching.manufacturing_batches:
        pos = schedule.positions.get(mb.mb_id)
        if pos is None:
            continue
        lo, hi = intervals.get(mb.fprb_index, (pos, pos))
        intervals[mb.fprb_index] = (min(lo, pos), max(hi, pos))

    for index, fb in enumerate(batching.fpr_batches):
        if index not in intervals:
            raise UnscheduledFprError(
                f"group '{fb.label}' has no batch in the schedule; its references never open"
            )

    total = len(schedule.sequence)
    open_by_position = []
    for t in range(total):
        open_fprs = set()
        for index, fb in enumerate(batching.fpr_batches):
            lo, hi = intervals[index]
            if lo <= t <= hi:
                open_fprs.update(fb.fpr_ids)
        open_by_position.append(frozenset(open_fprs))

    max_open = max((len(s) for s in open_by_position), default=0)
    violations = tuple(t for t, s in enumerate(open_by_position) if len(s) > limit)
    return PalletTimeline(
        open_by_position=tuple(open_by_position),
        max_open=max_open,
        limit=limit,
        violations=violations,
    )


def baseline_group_by_fpr(order_book: OrderBook) -> tuple[BatchingResult, Schedule]:
    """Legacy rule one: every reference is its own batch group.

    Groups are scheduled one after another in fpr_id order, thickness
    ascending inside each, so each reference's batches are contiguous.
    """
    kernels = [k for k in order_book.kernels if not k.oversize]
    if not kernels:
        raise EmptyInputError("order book has no kernels the cutting machine can process")

    by_fpr: dict[str, list] = {}
    for k in kernels:
        by_fpr.setdefault(k.fpr_id, []).append(k)

    fpr_batches = []
    mbs = []
    assignment = {}
    kernel_fprs = {}
    sequence = []
    for index, fpr_id in enumerate(sorted(by_fpr)):
        label = batch_label(index)
        members = by_fpr[fpr_id]
        thicknesses = sorted({k.thickness for k in members})
        fpr_batches.append(FPRBatch(label=label, fpr_ids=frozenset({fpr_id}), p_m=len(thicknesses)))
        assignment[fpr_id] = label
        for sub, thickness in enumerate(thicknesses, start=1):
            mb_id = f"{label}{sub}"
            kernel_ids = frozenset(k.kernel_id for k in members if k.thickness == thickness)
            mbs.append(ManufacturingBatch(mb_id=mb_id, fprb_index=index, thickness=thickness, kernel_ids=kernel_ids))
            sequence.append(mb_id)
        for k in members:
            kernel_fprs[k.kernel_id] = fpr_id

    batching = BatchingResult(
        fpr_batches=tuple(fpr_batches),
        manufacturing_batches=tuple(mbs),
        assignment=assignment,
        kernel_fprs=kernel_fprs,
    )
    return batching, Schedule.from_sequence(sequence)


def baseline_group_by_thickness(order_book: OrderBook) -> tuple[BatchingResult, Schedule]:
    """Legacy rule two: one batch per distinct thickness across the whole book.

    Modelled as a single group holding every reference; the per-group cap does
    not apply to this rule, which predates it.
    """
    kernels = [k for k in order_book.kernels if not k.oversize]
    if not kernels:
        raise EmptyInputError("order book has no kernels the cutting machine can process")

    fpr_ids = sorted({k.fpr_id for k in kernels})
    thicknesses = sorted({k.thickness for k in kernels})
    group = FPRBatch(label="A", fpr_ids=frozenset(fpr_ids), p_m=len(thicknesses))

    mbs = []
    sequence = []
    for sub, thickness in enumerate(thicknesses, start=1):
        mb_id = f"A{sub}"
        kernel_ids = frozenset(k.kernel_id for k in kernels if k.thickness == thickness)
        mbs.append(ManufacturingBatch(mb_id=mb_id, fprb_index=0, thickness=thickness, kernel_ids=kernel_ids))
        sequence.append(mb_id)

    batching = BatchingResult(
        fpr_batches=(group,),
        manufacturing_batches=tuple(mbs),
        assignment={fpr_id: "A" for fpr_id in fpr_ids},
        kernel_fprs={k.kernel_id: k.fpr_id for k in kernels},
    )
    return batching, Schedule.from_sequence(sequence)


def _metric_row(policy: str, batching: BatchingResult, schedule: Schedule, limit: int) -> PolicyMetrics:
    timeline = simulate_control_step(schedule, batching, limit)
    return PolicyMetrics(
        policy=policy,
        setups=setups(schedule, batching),
        max_wip_same_fpr=max_wip_same_fpr(schedule, batching),
        max_pallets_open=timeline.max_open,
    )


def compare(order_book: OrderBook, proposed: tuple[BatchingResult, Schedule], limit: int = 7) -> ComparisonReport:
    """Metric triple for the proposed schedule and both legacy rules on one book."""
    proposed_batching, proposed_schedule = proposed
    rows = (
        _metric_row("proposed", proposed_batching, proposed_schedule, limit),
        _metric_row("group_by_fpr", *baseline_group_by_fpr(order_book), limit),
        _metric_row("group_by_thickness", *baseline_group_by_thickness(order_book), limit),
    )
    return ComparisonReport(rows=rows)

import random

import pytest

from kernelcut.batching import BatchingResult
from kernelcut.errors import EmptyInputError, UnscheduledFprError
from kernelcut.metrics import (
    baseline_group_by_fpr,
    baseline_group_by_thickness,
    compare,
    max_wip_same_fpr,
    setups,
    simulate_control_step,
)
from kernelcut.model import FPRBatch, ManufacturingBatch, OrderBook, Schedule
from kernelcut.objective import f2

from instances import book_from_rows, random_instance, simple_batching


def _explicit_batching(groups):
    """groups: label -> list of (mb thickness, {kernel: fpr}) in sub-label order."""
    fpr_batches = []
    mbs = []
    assignment = {}
    kernel_fprs = {}
    for index, (label, batch_specs) in enumerate(groups.items()):
        fprs = set()
        for sub, (thickness, members) in enumerate(batch_specs, start=1):
            mbs.append(ManufacturingBatch(
                mb_id=f"{label}{sub}",
                fprb_index=index,
                thickness=thickness,
                kernel_ids=frozenset(members),
            ))
            for kid, fpr_id in members.items():
                kernel_fprs[kid] = fpr_id
                fprs.add(fpr_id)
        fpr_batches.append(FPRBatch(label=label, fpr_ids=frozenset(fprs), p_m=len(batch_specs)))
        for fpr_id in fprs:
            assignment[fpr_id] = label
    return BatchingResult(
        fpr_batches=tuple(fpr_batches),
        manufacturing_batches=tuple(mbs),
        assignment=assignment,
        kernel_fprs=kernel_fprs,
    )


def test_wip_zero_for_single_batch_reference():
    batching = _explicit_batching({"A": [(180, {"k1": "P1"}), (220, {"k2": "P2"})]})
    schedule = Schedule.from_sequence(["A1", "A2"])
    assert max_wip_same_fpr(schedule, batching) == 0


def test_wip_counts_foreign_slot_between_batches():
    batching = _explicit_batching({
        "A": [(180, {"k1": "P1"}), (220, {"k2": "P1"})],
        "B": [(250, {"k3": "P2"})],
    })
    # P1's batches sit at 0 and 2 with B1 between them
    schedule = Schedule.from_sequence(["A1", "B1", "A2"])
    assert max_wip_same_fpr(schedule, batching) == 1


def test_wip_ignores_own_batches_in_between():
    batching = _explicit_batching({
        "A": [(180, {"k1": "P1"}), (220, {"k2": "P1"}), (250, {"k3": "P1"})],
    })
    schedule = Schedule.from_sequence(["A1", "A2", "A3"])
    assert max_wip_same_fpr(schedule, batching) == 0


def test_wip_bounded_inside_contiguous_groups():
    rng = random.Random(14)
    for _ in range(20):
        _, batching = random_instance(rng)
        # schedule group blocks back to back: each group contiguous
        ordering = []
        for index in range(len(batching.fpr_batches)):
            ordering.extend(mb.mb_id for mb in batching.manufacturing_batches if mb.fprb_index == index)
        schedule = Schedule.from_sequence(ordering)
        largest_group = max(
            sum(1 for mb in batching.manufacturing_batches if mb.fprb_index == i)
            for i in range(len(batching.fpr_batches))
        )
        assert max_wip_same_fpr(schedule, batching) < largest_group


def test_wip_raises_for_unscheduled_reference():
    batching = _explicit_batching({"A": [(180, {"k1": "P1"}), (220, {"k2": "P2"})]})
    partial = Schedule.from_sequence(["A1"])
    with pytest.raises(UnscheduledFprError):
        max_wip_same_fpr(partial, batching)


def test_pallets_single_group_all_open_together():
    batching = _explicit_batching({
        "A": [(180, {"k1": "P1", "k2": "P2"}), (220, {"k3": "P3"}), (250, {"k4": "P1"})],
    })
    timeline = simulate_control_step(Schedule.from_sequence(["A1", "A2", "A3"]), batching, limit=7)
    assert timeline.max_open == 3
    assert all(open_set == frozenset({"P1", "P2", "P3"}) for open_set in timeline.open_by_position)
    assert timeline.violations == ()


def test_pallets_sequential_groups_do_not_stack():
    batching = _explicit_batching({
        "A": [(180, {"k1": "PA1", "k2": "PA2"}), (220, {"k3": "PA1"})],
        "B": [(180, {"k4": "PB1"}), (250, {"k5": "PB2"})],
    })
    timeline = simulate_control_step(Schedule.from_sequence(["A1", "A2", "B1", "B2"]), batching, limit=7)
    assert timeline.max_open == 2


def test_pallets_interleaved_groups_stack():
    batching = _explicit_batching({
        "A": [(180, {"k1": "PA1", "k2": "PA2"}), (220, {"k3": "PA1"})],
        "B": [(180, {"k4": "PB1"}), (250, {"k5": "PB2"})],
    })
    timeline = simulate_control_step(Schedule.from_sequence(["A1", "B1", "A2", "B2"]), batching, limit=7)
    assert timeline.max_open == 4
    assert timeline.violations == ()
    tight = simulate_control_step(Schedule.from_sequence(["A1", "B1", "A2", "B2"]), batching, limit=3)
    assert tight.violations == (1, 2)


def test_pallets_max_open_caps_at_reference_count():
    rng = random.Random(3)
    for _ in range(20):
        _, batching = random_instance(rng)
        ids = list(batching.mb_ids)
        rng.shuffle(ids)
        timeline = simulate_control_step(Schedule.from_sequence(ids), batching, limit=7)
        assert timeline.max_open <= len(batching.assignment)


def test_group_by_fpr_baseline_shape():
    book = book_from_rows([
        ("K1", "P1", 180, 2),
        ("K2", "P1", 220, 2),
        ("K3", "P2", 180, 1),
        ("K4", "P2", 220, 1),
    ])
    batching, schedule = baseline_group_by_fpr(book)
    thickness = {mb.mb_id: mb.thickness for mb in batching.manufacturing_batches}
    fpr = {mb.mb_id: batching.fpr_batches[mb.fprb_index].fpr_ids for mb in batching.manufacturing_batches}
    rendered = [(sorted(fpr[mb_id])[0], thickness[mb_id]) for mb_id in schedule.sequence]
    assert rendered == [("P1", 180), ("P1", 220), ("P2", 180), ("P2", 220)]
    assert max_wip_same_fpr(schedule, batching) == 0
    assert setups(schedule, batching) == 3


def test_group_by_thickness_baseline_shape():
    book = book_from_rows([
        ("K1", "P1", 180, 2),
        ("K2", "P1", 300, 2),
        ("K3", "P2", 220, 1),
        ("K4", "P3", 250, 1),
    ])
    batching, schedule = baseline_group_by_thickness(book)
    assert [mb.thickness for mb in batching.manufacturing_batches] == [180, 220, 250, 300]
    assert setups(schedule, batching) == 3
    # P1 spans the extreme thicknesses with two foreign batches between
    assert max_wip_same_fpr(schedule, batching) == 2


def test_group_by_thickness_attains_setup_lower_bound():
    rng = random.Random(23)
    for _ in range(20):
        book, _ = random_instance(rng)
        batching, schedule = baseline_group_by_thickness(book)
        distinct = len({k.thickness for k in book.kernels if not k.oversize})
        assert setups(schedule, batching) == distinct - 1


def test_baselines_reject_empty_books():
    empty = OrderBook(kernels=(), fprs=(), n_fprs=0)
    with pytest.raises(EmptyInputError):
        baseline_group_by_fpr(empty)
    with pytest.raises(EmptyInputError):
        baseline_group_by_thickness(empty)


def test_compare_report_rows():
    rng = random.Random(31)
    book, batching = random_instance(rng)
    ids = list(batching.mb_ids)
    rng.shuffle(ids)
    schedule = Schedule.from_sequence(ids)
    report = compare(book, (batching, schedule), limit=7)

    assert [row.policy for row in report.rows] == ["proposed", "group_by_fpr", "group_by_thickness"]
    by_policy = {row.policy: row for row in report.rows}
    assert by_policy["proposed"].setups == f2(schedule, batching)
    assert by_policy["group_by_fpr"].max_wip_same_fpr == 0
    assert by_policy["group_by_thickness"].setups == min(row.setups for row in report.rows)


def test_setups_equals_objective_f2_everywhere():
    rng = random.Random(8)
    for _ in range(30):
        _, batching = random_instance(rng)
        ids = list(batching.mb_ids)
        rng.shuffle(ids)
        schedule = Schedule.from_sequence(ids)
        assert setups(schedule, batching) == f2(schedule, batching)

"""Schedule objectives: same-group dispersion (f1), thickness setups (f2),
their weighted combination, and structural constraint checking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .batching import BatchingResult
from .errors import MalformedScheduleError
from .model import Schedule, Violation


@dataclass(frozen=True)
class ObjectiveWeights:
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
            raise ValueError("weights must be non-negative and not both zero")


@dataclass(frozen=True, order=True)
class FitnessValue:
    combined: float
    f2: int
    f1: int


@dataclass(frozen=True)
class ConstraintReport:
    """Structural findings for a schedule; objective values included when computable."""

    violations: tuple[Violation, ...]
    f1: int | None
    f2: int | None
    setups_at_least_group_count: bool | None

    @property
    def valid(self) -> bool:
        return not self.violations


def _check_schedule(schedule: Schedule, batching: BatchingResult) -> None:
    expected = set(batching.mb_ids)
    seq = schedule.sequence
    if set(seq) != expected or len(seq) != len(expected):
        raise MalformedScheduleError("sequence is not a permutation of the batching's manufacturing batches")
    for i, mb_id in enumerate(seq):
        if schedule.positions.get(mb_id) != i:
            raise MalformedScheduleError(f"position map disagrees with sequence at '{mb_id}'")


def _f1_core(sequence, fprb_of) -> int:
    # Per group, positions arrive already ascending; the pairwise gap sum
    # sum_{a<b} (p_b - p_a - 1) collapses to a single linear pass.
    positions: dict[int, list[int]] = {}
    for pos, mb_id in enumerate(sequence):
        positions.setdefault(fprb_of[mb_id], []).append(pos)
    total = 0
    for ps in positions.values():
        k = len(ps)
        if k > 1:
            total += sum(p * (2 * i - k + 1) for i, p in enumerate(ps)) - k * (k - 1) // 2
    return total


def _f2_core(sequence, thickness_of) -> int:
    return sum(1 for a, b in zip(sequence, sequence[1:]) if thickness_of[a] != thickness_of[b])


def _indexes(batching: BatchingResult):
    fprb_of = {mb.mb_id: mb.fprb_index for mb in batching.manufacturing_batches}
    thickness_of = {mb.mb_id: mb.thickness for mb in batching.manufacturing_batches}
    return fprb_of, thickness_of


def f1(schedule: Schedule, batching: BatchingResult) -> int:
    """Total positional gap summed over same-group batch pairs; 0 iff every group is contiguous."""
    _check_schedule(schedule, batching)
    fprb_of, _ = _indexes(batching)
    return _f1_core(schedule.sequence, fprb_of)


def f2(schedule: Schedule, batching: BatchingResult) -> int:
    """Number of thickness changeovers between adjacent batches."""
    _check_schedule(schedule, batching)
    _, thickness_of = _indexes(batching)
    return _f2_core(schedule.sequence, thickness_of)


def fitness(schedule: Schedule, batching: BatchingResult, weights: ObjectiveWeights) -> FitnessValue:
    """Weighted combination alpha*f1 + beta*f2; lower is better."""
    _check_schedule(schedule, batching)
    fprb_of, thickness_of = _indexes(batching)
    v1 = _f1_core(schedule.sequence, fprb_of)
    v2 = _f2_core(schedule.sequence, thickness_of)
    return FitnessValue(combined=weights.alpha * v1 + weights.beta * v2, f2=v2, f1=v1)


def check_constraints(schedule: Schedule, batching: BatchingResult) -> ConstraintReport:
    """Report every structural violation of a schedule; never raises.

    Checks that positions form 0..F-1 exactly once and that each group owns as
    many scheduled batches as its declared decomposition count. Whether the
    setup count reaches the group count is surfaced as information only: valid
    schedules can fall below it (all batches one thickness means zero setups).
    """
    violations: list[Violation] = []
    expected = set(batching.mb_ids)
    total = len(expected)
    seq = schedule.sequence

    seen: set[str] = set()
    for mb_id in seq:
        if mb_id in seen:
            violations.append(Violation("duplicate", f"batch '{mb_id}' appears more than once"))
        seen.add(mb_id)
        if mb_id not in expected:
            violations.append(Violation("unknown-batch", f"batch '{mb_id}' is not part of this batching"))
    for mb_id in sorted(expected - seen):
        violations.append(Violation("missing", f"batch '{mb_id}' is absent from the sequence"))

    position_values = sorted(schedule.positions.values())
    if position_values != list(range(total)):
        violations.append(Violation("position-gap", f"positions {position_values} are not exactly 0..{total - 1}"))
    for mb_id, pos in sorted(schedule.positions.items()):
        if not (0 <= pos < len(seq)) or seq[pos] != mb_id:
            violations.append(Violation("position-mismatch", f"position map places '{mb_id}' at {pos}, sequence disagrees"))
    for i, mb_id in enumerate(seq):
        if mb_id not in schedule.positions:
            violations.append(Violation("position-mismatch", f"batch '{mb_id}' at {i} is missing from the position map"))

    per_group: dict[int, int] = {}
    for mb in batching.manufacturing_batches:
        per_group[mb.fprb_index] = per_group.get(mb.fprb_index, 0) + 1
    for index, fb in enumerate(batching.fpr_batches):
        if per_group.get(index, 0) != fb.p_m:
            violations.append(Violation(
                "mb-count-mismatch",
                f"group '{fb.label}' declares {fb.p_m} batches but {per_group.get(index, 0)} carry its index",
            ))

    value1 = value2 = None
    setups_cover_groups = None
    if not violations:
        fprb_of, thickness_of = _indexes(batching)
        value1 = _f1_core(seq, fprb_of)
        value2 = _f2_core(seq, thickness_of)
        setups_cover_groups = value2 >= len(batching.fpr_batches)

    return ConstraintReport(
        violations=tuple(violations),
        f1=value1,
        f2=value2,
        setups_at_least_group_count=setups_cover_groups,
    )

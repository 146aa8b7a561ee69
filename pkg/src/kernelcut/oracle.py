"""Exhaustive reference search for small instances.

The evaluators here are deliberately written straight from the objective
definitions as O(F^2) double sums over batch pairs, independent of the
optimised single-pass code in `objective`. The search is ground truth for the
genetic algorithm, and the evaluators are ground truth for the objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

from .batching import BatchingResult
from .errors import InstanceTooLargeError
from .model import Schedule
from .objective import FitnessValue, ObjectiveWeights


@dataclass(frozen=True)
class OracleResult:
    best_sequence: Schedule
    best_value: FitnessValue
    optima_count: int
    enumerated: int


def reference_f1(sequence, batching: BatchingResult) -> int:
    """Dispersion from the raw pair definition: every ordered same-group pair contributes
    max(x_j - x_i - 1, 0), which is zero whenever j does not come after i."""
    group = {mb.mb_id: mb.fprb_index for mb in batching.manufacturing_batches}
    position = {mb_id: i for i, mb_id in enumerate(sequence)}
    total = 0
    for i in sequence:
        for j in sequence:
            if i != j and group[i] == group[j]:
                total += max(position[j] - position[i] - 1, 0)
    return total


def reference_f2(sequence, batching: BatchingResult) -> int:
    """Setups from the raw pair definition: count ordered pairs where j sits right
    after i at a different thickness."""
    thickness = {mb.mb_id: mb.thickness for mb in batching.manufacturing_batches}
    position = {mb_id: i for i, mb_id in enumerate(sequence)}
    total = 0
    for i in sequence:
        for j in sequence:
            if i != j and thickness[i] != thickness[j] and position[j] == position[i] + 1:
                total += 1
    return total


def reference_fitness(sequence, batching: BatchingResult, weights: ObjectiveWeights) -> FitnessValue:
    v1 = reference_f1(sequence, batching)
    v2 = reference_f2(sequence, batching)
    return FitnessValue(combined=weights.alpha * v1 + weights.beta * v2, f2=v2, f1=v1)


def exhaustive_best(batching: BatchingResult, weights: ObjectiveWeights, cap: int = 10) -> OracleResult:
    """Enumerate all F! schedules and return the optimum.

    Enumeration runs in lexicographic order of batch ids, so the returned
    optimum is always the lexicographically smallest one and golden files stay
    stable. Refuses instances beyond `cap` batches.
    """
    mb_ids = sorted(batching.mb_ids)
    count = len(mb_ids)
    if count > cap:
        raise InstanceTooLargeError(
            f"{count} batches means {math.factorial(count)} permutations; cap is {cap}"
        )

    best_seq = None
    best_value = None
    optima = 0
    enumerated = 0
    for perm in permutations(mb_ids):
        enumerated += 1
        value = reference_fitness(perm, batching, weights)
        if best_value is None or value.combined < best_value.combined:
            best_seq, best_value, optima = perm, value, 1
        elif value.combined == best_value.combined:
            optima += 1

    return OracleResult(
        best_sequence=Schedule.from_sequence(best_seq),
        best_value=best_value,
        optima_count=optima,
        enumerated=enumerated,
    )

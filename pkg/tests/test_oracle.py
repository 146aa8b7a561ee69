import itertools
import random

import pytest

from kernelcut.errors import InstanceTooLargeError
from kernelcut.model import Schedule
from kernelcut.objective import ObjectiveWeights, f1, f2
from kernelcut.oracle import exhaustive_best, reference_f1, reference_f2

from instances import random_instance, simple_batching


def test_single_batch_oracle():
    batching = simple_batching({"A": [180]})
    result = exhaustive_best(batching, ObjectiveWeights(1, 1))
    assert result.enumerated == 1
    assert result.optima_count == 1
    assert (result.best_value.f1, result.best_value.f2) == (0, 0)
    assert result.best_sequence.sequence == ("A1",)


def test_hand_enumerated_three_batch_instance():
    # A1, A2 share a group and thickness; B1 is another group at another thickness.
    # Keeping the pair adjacent costs one setup; splitting it costs f1=1 plus two setups.
    batching = simple_batching({"A": [180, 180], "B": [220]})
    result = exhaustive_best(batching, ObjectiveWeights(1, 1))
    assert result.enumerated == 6
    assert result.best_value.combined == 1
    assert result.optima_count == 4
    assert result.best_sequence.sequence == ("A1", "A2", "B1")  # lexicographically smallest optimum


def test_oracle_not_beaten_by_random_sampling():
    rng = random.Random(4)
    _, batching = random_instance(rng, total_mbs=6)
    weights = ObjectiveWeights(1.0, 6.0)
    optimum = exhaustive_best(batching, weights).best_value.combined
    ids = list(batching.mb_ids)
    for _ in range(1000):
        rng.shuffle(ids)
        s = Schedule.from_sequence(ids)
        value = weights.alpha * f1(s, batching) + weights.beta * f2(s, batching)
        assert value >= optimum


def test_cap_refuses_large_instances():
    batching = simple_batching({
        "A": [150, 180, 190, 220], "B": [150, 180, 190, 220], "C": [150, 180, 190],
    })
    with pytest.raises(InstanceTooLargeError, match="39916800"):
        exhaustive_best(batching, ObjectiveWeights(1, 1), cap=10)


def test_reference_objectives_agree_with_fast_path():
    rng = random.Random(6)
    for _ in range(100):
        _, batching = random_instance(rng)
        ids = list(batching.mb_ids)
        rng.shuffle(ids)
        s = Schedule.from_sequence(ids)
        assert reference_f1(s.sequence, batching) == f1(s, batching)
        assert reference_f2(s.sequence, batching) == f2(s, batching)


def test_oracle_returns_lexicographically_smallest_optimum():
    batching = simple_batching({"A": [180, 180]})
    result = exhaustive_best(batching, ObjectiveWeights(1, 1))
    # both orders are optimal; the smaller one must be reported
    assert result.optima_count == 2
    assert result.best_sequence.sequence == ("A1", "A2")

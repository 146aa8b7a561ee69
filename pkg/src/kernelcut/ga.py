"""Seedable elitist genetic algorithm over manufacturing-batch permutations.

Every stochastic choice flows from one seeded generator owned by the
coordinating loop, so a run is fully reproducible from its seed no matter how
fitness evaluation is parallelised (evaluation itself is pure).
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .batching import BatchingResult
from .errors import (
    EmptyInputError,
    IncompatibleParentsError,
    InsufficientSurvivorsError,
    NotEvaluatedError,
)
from .model import Schedule
from .objective import FitnessValue, ObjectiveWeights, _f1_core, _f2_core, _indexes


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 1000
    elite_fraction: float = 0.10
    generations: int = 200
    neighbour_mutation_rate: float = 0.05
    foreign_mutation_rate: float = 0.05
    seed: int = 42
    stagnation_patience: int | None = 50


class Termination(Enum):
    MAX_GENERATIONS = "max_generations"
    STAGNATION = "stagnation"


@dataclass
class Individual:
    sequence: tuple[str, ...]
    fitness: FitnessValue | None = None


@dataclass(frozen=True)
class GaRunResult:
    best: Individual
    history: tuple[tuple[float, float], ...]  # (best combined, mean combined) per generation
    generations_run: int
    termination_reason: Termination

    @property
    def best_schedule(self) -> Schedule:
        return Schedule.from_sequence(self.best.sequence)


def init_population(mbs, config: GaConfig, rng: random.Random) -> list[Individual]:
    """population_size independent uniform random permutations of the batch ids."""
    mb_ids = [mb.mb_id for mb in mbs]
    if not mb_ids:
        raise EmptyInputError("cannot initialise a population without manufacturing batches")
    population = []
    for _ in range(config.population_size):
        population.append(Individual(sequence=tuple(rng.sample(mb_ids, len(mb_ids)))))
    return population


def select(population, config: GaConfig) -> list[Individual]:
    """Elitist selection: keep the ceil(elite_fraction * population_size) best.

    Ties fall to lower setup count, then lower dispersion, then the
    lexicographically smaller sequence, so survivor order is deterministic.
    """
    for ind in population:
        if ind.fitness is None:
            raise NotEvaluatedError(f"individual {ind.sequence} has no fitness value")
    keep = math.ceil(config.elite_fraction * config.population_size)
    ranked = sorted(population, key=lambda ind: (ind.fitness, ind.sequence))
    return ranked[:keep]


def one_point_merge(seq_a, seq_b, cut: int) -> tuple[str, ...]:
    """Copy seq_a's first `cut` genes, then append seq_b's genes in order, skipping duplicates."""
    prefix = list(seq_a[:cut])
    taken = set(prefix)
    prefix.extend(g for g in seq_b if g not in taken)
    return tuple(prefix)


def crossover(parent_a: Individual, parent_b: Individual, rng: random.Random) -> Individual:
    """One-point order-preserving recombination; the duplicate skip keeps the child a permutation."""
    if set(parent_a.sequence) != set(parent_b.sequence):
        raise IncompatibleParentsError("parents are permutations of different batch sets")
    n = len(parent_a.sequence)
    if n < 2:
        return Individual(sequence=parent_a.sequence)
    cut = rng.randint(1, n - 1)
    return Individual(sequence=one_point_merge(parent_a.sequence, parent_b.sequence, cut))


def breed(survivors, config: GaConfig, rng: random.Random) -> list[Individual]:
    """Refill the population: survivors carry over first, children fill the rest.

    The parent pool widens as breeding progresses: child c draws its two
    distinct parents uniformly from the best min(2 + c, len(survivors))
    survivors, so the very first child always crosses the two best sequences.
    The better-ranked parent contributes the prefix.
    """
    if len(survivors) < 2:
        raise InsufficientSurvivorsError(f"need at least 2 survivors, got {len(survivors)}")
    next_generation = [Individual(sequence=s.sequence, fitness=s.fitness) for s in survivors]
    child_count = config.population_size - len(next_generation)
    for c in range(child_count):
        window = min(2 + c, len(survivors))
        i, j = sorted(rng.sample(range(window), 2))
        next_generation.append(crossover(survivors[i], survivors[j], rng))
    return next_generation


def mutate_neighbour(ind: Individual, rng: random.Random) -> Individual:
    """Swap one uniformly chosen adjacent pair."""
    n = len(ind.sequence)
    if n < 2:
        return ind
    p = rng.randrange(n - 1)
    seq = list(ind.sequence)
    seq[p], seq[p + 1] = seq[p + 1], seq[p]
    return Individual(sequence=tuple(seq))


def mutate_foreign(ind: Individual, rng: random.Random) -> Individual:
    """Swap two uniformly chosen non-adjacent positions (any distinct pair when length < 3)."""
    n = len(ind.sequence)
    if n < 2:
        return ind
    if n < 3:
        i, j = 0, 1
    else:
        while True:
            i, j = rng.sample(range(n), 2)
            if abs(i - j) > 1:
                break
    seq = list(ind.sequence)
    seq[i], seq[j] = seq[j], seq[i]
    return Individual(sequence=tuple(seq))


def _evaluate(population, memo, evaluate_one, executor) -> None:
    pending = {}
    for ind in population:
        if ind.fitness is None and ind.sequence not in memo:
            pending.setdefault(ind.sequence, None)
    sequences = list(pending)
    if sequences:
        if executor is not None:
            values = list(executor.map(evaluate_one, sequences))
        else:
            values = [evaluate_one(seq) for seq in sequences]
        memo.update(zip(sequences, values))
    for ind in population:
        if ind.fitness is None:
            ind.fitness = memo[ind.sequence]


def evolve(
    batching: BatchingResult,
    weights: ObjectiveWeights,
    config: GaConfig,
    eval_workers: int = 1,
) -> GaRunResult:
    """Run the full loop: init, evaluate, select, breed, mutate, until done.

    Survivors are carried unchanged and never mutated, so the best combined
    fitness per generation is non-increasing. Terminates after
    config.generations evaluated generations (the random initial one counts)
    or once stagnation_patience generations pass without improvement.

    eval_workers is an execution knob, not part of the configuration echo:
    results are identical for any worker count.
    """
    mbs = batching.manufacturing_batches
    if not mbs:
        raise EmptyInputError("batching holds no manufacturing batches")

    rng = random.Random(config.seed)
    fprb_of, thickness_of = _indexes(batching)
    alpha, beta = weights.alpha, weights.beta

    def evaluate_one(sequence) -> FitnessValue:
        v1 = _f1_core(sequence, fprb_of)
        v2 = _f2_core(sequence, thickness_of)
        return FitnessValue(combined=alpha * v1 + beta * v2, f2=v2, f1=v1)

    executor = ThreadPoolExecutor(max_workers=eval_workers) if eval_workers > 1 else None
    memo: dict[tuple[str, ...], FitnessValue] = {}
    try:
        population = init_population(mbs, config, rng)
        _evaluate(population, memo, evaluate_one, executor)

        def generation_stats():
            best = min(population, key=lambda ind: (ind.fitness, ind.sequence))
            mean = sum(ind.fitness.combined for ind in population) / len(population)
            return best, mean

        best, mean = generation_stats()
        history = [(best.fitness.combined, mean)]
        best_ever = Individual(sequence=best.sequence, fitness=best.fitness)
        generations_run = 1

        if len(mbs) == 1:
            # Single possible sequence: the search space is already exhausted.
            return GaRunResult(best_ever, tuple(history), generations_run, Termination.STAGNATION)

        stagnant = 0
        reason = Termination.MAX_GENERATIONS
        while generations_run < config.generations:
            survivors = select(population, config)
            population = breed(survivors, config, rng)
            for idx in range(len(survivors), len(population)):
                if rng.random() < config.neighbour_mutation_rate:
                    population[idx] = mutate_neighbour(population[idx], rng)
                if rng.random() < config.foreign_mutation_rate:
                    population[idx] = mutate_foreign(population[idx], rng)
            _evaluate(population, memo, evaluate_one, executor)
            generations_run += 1

            best, mean = generation_stats()
            history.append((best.fitness.combined, mean))
            improved = best.fitness.combined < best_ever.fitness.combined
            if (best.fitness, best.sequence) < (best_ever.fitness, best_ever.sequence):
                best_ever = Individual(sequence=best.sequence, fitness=best.fitness)
            stagnant = 0 if improved else stagnant + 1
            if config.stagnation_patience is not None and stagnant >= config.stagnation_patience:
                reason = Termination.STAGNATION
                break
        return GaRunResult(best_ever, tuple(history), generations_run, reason)
    finally:
        if executor is not None:
            executor.shutdown()

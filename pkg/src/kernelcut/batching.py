"""Two-level batching: group product references by shared thicknesses, then
split each group into thickness-homogeneous manufacturing batches.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyInputError, UnassignedFprError
from .model import FPRBatch, ManufacturingBatch, OrderBook, batch_label


@dataclass(frozen=True)
class BatchingConfig:
    max_fprs: int = 5
    size_balance_weight: float = 1.0


@dataclass(frozen=True)
class BatchingResult:
    """Both clustering levels plus lookup indexes used by scheduling and metrics.

    kernel_fprs maps every batched kernel back to its finished product
    reference; metrics need it because manufacturing batches only carry
    kernel ids.
    """

    fpr_batches: tuple[FPRBatch, ...]
    manufacturing_batches: tuple[ManufacturingBatch, ...]
    assignment: dict[str, str]
    kernel_fprs: dict[str, str]

    @property
    def mb_ids(self) -> tuple[str, ...]:
        return tuple(mb.mb_id for mb in self.manufacturing_batches)


def _eligible_kernels(order_book: OrderBook):
    return [k for k in order_book.kernels if not k.oversize]


def build_fpr_batches(order_book: OrderBook, config: BatchingConfig) -> list[FPRBatch]:
    """Greedy level-1 clustering of product references into letter-labelled groups.

    Each group is seeded with the unassigned reference spanning the most
    thicknesses, then grows by repeatedly adding the reference that shares the
    most thicknesses with the group so far. Ties fall to the candidate keeping
    the group's piece count smallest (load balancing), then to the smaller
    fpr_id. A group stops growing at max_fprs references or when no candidate
    shares a thickness with it.
    """
    kernels = _eligible_kernels(order_book)
    if not kernels:
        raise EmptyInputError("order book has no kernels the cutting machine can process")

    thickness_of: dict[str, set[int]] = {}
    pieces_of: dict[str, int] = {}
    for k in kernels:
        thickness_of.setdefault(k.fpr_id, set()).add(k.thickness)
        pieces_of[k.fpr_id] = pieces_of.get(k.fpr_id, 0) + k.piece_count

    unassigned = set(thickness_of)
    batches: list[FPRBatch] = []
    while unassigned:
        seed = min(unassigned, key=lambda f: (-len(thickness_of[f]), f))
        unassigned.remove(seed)
        group = [seed]
        group_thicknesses = set(thickness_of[seed])
        group_pieces = pieces_of[seed]

        while len(group) < config.max_fprs:
            best = None
            best_key = None
            for f in unassigned:
                overlap = len(thickness_of[f] & group_thicknesses)
                if overlap == 0:
                    continue
                key = (-overlap, config.size_balance_weight * (group_pieces + pieces_of[f]), f)
                if best_key is None or key < best_key:
                    best, best_key = f, key
            if best is None:
                break
            unassigned.remove(best)
            group.append(best)
            group_thicknesses |= thickness_of[best]
            group_pieces += pieces_of[best]

        batches.append(FPRBatch(
            label=batch_label(len(batches)),
            fpr_ids=frozenset(group),
            p_m=len(group_thicknesses),
        ))
    return batches


def build_manufacturing_batches(order_book: OrderBook, fpr_batches) -> BatchingResult:
    """Level-2 split: one manufacturing batch per distinct thickness inside each group.

    Sub-labels run 1-based in ascending thickness order (A1, A2, ...), so
    identical inputs always produce identical batch identities.
    """
    fpr_batches = tuple(fpr_batches)
    assignment: dict[str, str] = {}
    batch_of_fpr: dict[str, int] = {}
    for index, fb in enumerate(fpr_batches):
        for fpr_id in fb.fpr_ids:
            assignment[fpr_id] = fb.label
            batch_of_fpr[fpr_id] = index

    kernels = _eligible_kernels(order_book)
    kernel_fprs: dict[str, str] = {}
    by_batch_thickness: dict[int, dict[int, list[str]]] = {i: {} for i in range(len(fpr_batches))}
    for k in kernels:
        if k.fpr_id not in batch_of_fpr:
            raise UnassignedFprError(f"kernel '{k.kernel_id}' belongs to reference '{k.fpr_id}' outside every FPR batch")
        kernel_fprs[k.kernel_id] = k.fpr_id
        index = batch_of_fpr[k.fpr_id]
        by_batch_thickness[index].setdefault(k.thickness, []).append(k.kernel_id)

    mbs: list[ManufacturingBatch] = []
    for index, fb in enumerate(fpr_batches):
        for sub, thickness in enumerate(sorted(by_batch_thickness[index]), start=1):
            mbs.append(ManufacturingBatch(
                mb_id=f"{fb.label}{sub}",
                fprb_index=index,
                thickness=thickness,
                kernel_ids=frozenset(by_batch_thickness[index][thickness]),
            ))

    return BatchingResult(
        fpr_batches=fpr_batches,
        manufacturing_batches=tuple(mbs),
        assignment=assignment,
        kernel_fprs=kernel_fprs,
    )


def batch_kernels(order_book: OrderBook, config: BatchingConfig | None = None) -> BatchingResult:
    """Run both clustering levels with one call."""
    config = config or BatchingConfig()
    return build_manufacturing_batches(order_book, build_fpr_batches(order_book, config))


def piece_count_spread(order_book: OrderBook, result: BatchingResult) -> tuple[dict[str, int], float]:
    """Per-group piece counts and their population standard deviation.

    Reported so operators can see how evenly the load is spread; balance is a
    tie-break in construction, never a hard constraint.
    """
    pieces_of_fpr: dict[str, int] = {}
    for k in _eligible_kernels(order_book):
        pieces_of_fpr[k.fpr_id] = pieces_of_fpr.get(k.fpr_id, 0) + k.piece_count
    totals = {
        fb.label: sum(pieces_of_fpr.get(f, 0) for f in fb.fpr_ids)
        for fb in result.fpr_batches
    }
    values = list(totals.values())
    mean = sum(values) / len(values)
    stddev = (sum((v - mean) ** 2 for v in values) / len(values)) ** 0.5
    return totals, stddev

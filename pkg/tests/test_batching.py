import itertools

import pytest

from kernelcut.batching import BatchingConfig, batch_kernels, build_fpr_batches, build_manufacturing_batches
from kernelcut.errors import EmptyInputError, UnassignedFprError
from kernelcut.model import FPRBatch, OrderBook

from instances import book_from_rows


def _labels_of(batches):
    return {fb.label: set(fb.fpr_ids) for fb in batches}


def test_single_fpr_forms_batch_a():
    book = book_from_rows([("K1", "P1", 180, 4)])
    batches = build_fpr_batches(book, BatchingConfig())
    assert _labels_of(batches) == {"A": {"P1"}}


def test_cap_forces_split_of_identical_references():
    rows = []
    for i in range(1, 7):
        rows.append((f"K{i}a", f"P{i}", 180, 2))
        rows.append((f"K{i}b", f"P{i}", 220, 2))
    book = book_from_rows(rows)
    batches = build_fpr_batches(book, BatchingConfig(max_fprs=5))
    sizes = sorted(len(fb.fpr_ids) for fb in batches)
    assert sizes == [1, 5]


def _pairwise_overlap(groups, thickness_of):
    total = 0
    for group in groups:
        for a, b in itertools.combinations(sorted(group), 2):
            total += len(thickness_of[a] & thickness_of[b])
    return total


def _all_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _all_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [partition[i] | {first}] + partition[i + 1:]
        yield partition + [{first}]


def test_grouping_maximises_pairwise_thickness_overlap():
    # exhaustive oracle over every partition of the three references
    book = book_from_rows([
        ("K1", "P1", 180, 3),
        ("K2", "P1", 220, 3),
        ("K3", "P2", 180, 3),
        ("K4", "P2", 220, 3),
        ("K5", "P3", 300, 3),
    ])
    thickness_of = {f.fpr_id: set(f.thickness_set) for f in book.fprs}
    best = max(
        _pairwise_overlap(partition, thickness_of)
        for partition in _all_partitions(["P1", "P2", "P3"])
        if all(len(g) <= 5 for g in partition)
    )
    batches = build_fpr_batches(book, BatchingConfig(max_fprs=5))
    groups = [set(fb.fpr_ids) for fb in batches]
    assert _pairwise_overlap(groups, thickness_of) == best == 2
    assert {"P1", "P2"} in groups
    assert {"P3"} in groups


def test_empty_book_raises():
    with pytest.raises(EmptyInputError):
        build_fpr_batches(OrderBook(kernels=(), fprs=(), n_fprs=0), BatchingConfig())


def test_all_oversize_book_raises():
    book = book_from_rows([("K1", "P1", 180, 4, True)])
    with pytest.raises(EmptyInputError):
        build_fpr_batches(book, BatchingConfig())


def test_level_two_splits_by_thickness():
    book = book_from_rows([
        ("K1", "P1", 180, 2),
        ("K2", "P2", 180, 2),
        ("K3", "P1", 220, 2),
    ])
    result = batch_kernels(book)
    by_id = {mb.mb_id: mb for mb in result.manufacturing_batches}
    assert set(by_id) == {"A1", "A2"}
    assert by_id["A1"].thickness == 180 and by_id["A1"].kernel_ids == {"K1", "K2"}
    assert by_id["A2"].thickness == 220 and by_id["A2"].kernel_ids == {"K3"}


def test_no_cross_group_merging_at_equal_thickness():
    book = book_from_rows([
        ("K1", "P1", 180, 2),
        ("K2", "P2", 180, 2),
    ])
    # cap of one forces two groups that happen to share a thickness
    result = batch_kernels(book, BatchingConfig(max_fprs=1))
    assert [(mb.mb_id, mb.thickness) for mb in result.manufacturing_batches] == [
        ("A1", 180), ("B1", 180),
    ]
    mb_180 = [mb for mb in result.manufacturing_batches if mb.thickness == 180]
    assert {frozenset(mb.kernel_ids) for mb in mb_180} == {frozenset({"K1"}), frozenset({"K2"})}


def test_five_references_three_thicknesses_one_group():
    rows = []
    thicknesses = [180, 220, 250]
    for i in range(1, 6):
        for j, t in enumerate(thicknesses):
            rows.append((f"K{i}-{j}", f"P{i}", t, 1))
    book = book_from_rows(rows)
    result = batch_kernels(book, BatchingConfig(max_fprs=5))
    assert len(result.fpr_batches) == 1
    assert result.fpr_batches[0].p_m == 3
    assert [mb.mb_id for mb in result.manufacturing_batches] == ["A1", "A2", "A3"]
    assert [mb.thickness for mb in result.manufacturing_batches] == thicknesses


def test_mb_labels_ascend_with_thickness():
    book = book_from_rows([
        ("K1", "P1", 250, 1),
        ("K2", "P1", 180, 1),
        ("K3", "P1", 220, 1),
    ])
    result = batch_kernels(book)
    assert [(mb.mb_id, mb.thickness) for mb in result.manufacturing_batches] == [
        ("A1", 180), ("A2", 220), ("A3", 250),
    ]


def test_unassigned_reference_raises():
    book = book_from_rows([("K1", "P1", 180, 2), ("K2", "P2", 180, 2)])
    partial = [FPRBatch(label="A", fpr_ids=frozenset({"P1"}), p_m=1)]
    with pytest.raises(UnassignedFprError):
        build_manufacturing_batches(book, partial)


def test_partition_and_count_invariants_on_random_books():
    import random

    rng = random.Random(11)
    for _ in range(30):
        rows = []
        n_fprs = rng.randint(1, 12)
        for i in range(1, n_fprs + 1):
            for j in range(rng.randint(1, 4)):
                rows.append((
                    f"K{i}-{j}",
                    f"P{i:02d}",
                    rng.choice([150, 180, 220, 250]),
                    rng.randint(1, 9),
                    rng.random() < 0.1,
                ))
        book = book_from_rows(rows)
        eligible = {k.kernel_id for k in book.kernels if not k.oversize}
        if not eligible:
            continue
        result = batch_kernels(book, BatchingConfig(max_fprs=rng.choice([2, 3, 5])))

        seen: list[str] = []
        for mb in result.manufacturing_batches:
            assert len({result.kernel_fprs[kid] for kid in mb.kernel_ids} - set(result.assignment)) == 0
            seen.extend(mb.kernel_ids)
        assert sorted(seen) == sorted(eligible)  # each kernel exactly once

        for index, fb in enumerate(result.fpr_batches):
            group = [mb for mb in result.manufacturing_batches if mb.fprb_index == index]
            assert len(group) == fb.p_m
            for mb in group:
                owners = {result.kernel_fprs[kid] for kid in mb.kernel_ids}
                assert owners <= set(fb.fpr_ids)


def test_batching_is_deterministic():
    rows = [(f"K{i}", f"P{i % 7}", [180, 220, 250][i % 3], 1 + i % 5) for i in range(20)]
    book = book_from_rows(rows)
    first = batch_kernels(book)
    second = batch_kernels(book)
    assert first == second


def test_cap_respected_for_every_group():
    rows = [(f"K{i}", f"P{i % 9}", 180, 1) for i in range(27)]
    book = book_from_rows(rows)
    for cap in (1, 2, 3, 5):
        batches = build_fpr_batches(book, BatchingConfig(max_fprs=cap))
        assert all(len(fb.fpr_ids) <= cap for fb in batches)
        assert sorted(f for fb in batches for f in fb.fpr_ids) == sorted({f"P{i}" for i in range(9)})

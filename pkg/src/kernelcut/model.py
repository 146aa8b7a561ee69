"""Domain types and order-book validation for the cutting work-center.

All types here are immutable values: they can be shared freely between
concurrent workers once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Kernel:
    """Indivisible customer lot; all of its fronts traverse the line together.

    Thickness is stored in tenths of a millimetre so that grouping and setup
    counting rely on exact integer equality, never float comparison.
    """

    kernel_id: str
    fpr_id: str
    thickness: int
    piece_count: int
    oversize: bool = False


@dataclass(frozen=True)
class FinishedProductReference:
    """One deliverable product (e.g. a complete kitchen's worth of fronts)."""

    fpr_id: str
    kernel_ids: frozenset[str]
    thickness_set: frozenset[int]


@dataclass(frozen=True)
class OrderBook:
    """The full demand snapshot: kernels plus their finished product references."""

    kernels: tuple[Kernel, ...]
    fprs: tuple[FinishedProductReference, ...]
    n_fprs: int

    @classmethod
    def from_kernels(cls, kernels) -> "OrderBook":
        """Derive the reference records by grouping kernels on fpr_id."""
        kernels = tuple(kernels)
        grouped: dict[str, list[Kernel]] = {}
        for k in kernels:
            grouped.setdefault(k.fpr_id, []).append(k)
        fprs = tuple(
            FinishedProductReference(
                fpr_id=fpr_id,
                kernel_ids=frozenset(k.kernel_id for k in members),
                thickness_set=frozenset(k.thickness for k in members),
            )
            for fpr_id, members in sorted(grouped.items())
        )
        return cls(kernels=kernels, fprs=fprs, n_fprs=len(fprs))


@dataclass(frozen=True)
class FPRBatch:
    """Level-1 cluster: a letter-labelled group of product references."""

    label: str
    fpr_ids: frozenset[str]
    p_m: int  # number of manufacturing batches this group decomposes into


@dataclass(frozen=True)
class ManufacturingBatch:
    """Level-2 cluster: all kernels of one FPR batch at one thickness; the unit scheduled."""

    mb_id: str
    fprb_index: int
    thickness: int
    kernel_ids: frozenset[str]


@dataclass(frozen=True)
class Schedule:
    """A permutation of manufacturing batches with an explicit position map."""

    sequence: tuple[str, ...]
    positions: dict[str, int] = field(compare=False)

    @classmethod
    def from_sequence(cls, sequence) -> "Schedule":
        seq = tuple(sequence)
        return cls(sequence=seq, positions={mb_id: i for i, mb_id in enumerate(seq)})


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of order-book validation: violations fail it, warnings do not."""

    violations: tuple[Violation, ...]
    warnings: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


def batch_label(index: int) -> str:
    """Letter label for the index-th batch: A..Z, then AA, AB, ... spreadsheet style."""
    label = ""
    n = index + 1
    while n:
        n, r = divmod(n - 1, 26)
        label = chr(ord("A") + r) + label
    return label


def validate_order_book(book: OrderBook) -> ValidationReport:
    """Check every order-book invariant and report all violations at once.

    Oversize kernels are reported as warnings only: they are excluded from
    batching and scheduling (a separate machine handles them) but do not make
    the book invalid.
    """
    violations: list[Violation] = []
    warnings: list[Violation] = []

    seen_kernels: set[str] = set()
    for k in book.kernels:
        if k.kernel_id in seen_kernels:
            violations.append(Violation("duplicate-kernel-id", f"kernel_id '{k.kernel_id}' appears more than once"))
        seen_kernels.add(k.kernel_id)
        if k.piece_count < 1:
            violations.append(Violation("bad-piece-count", f"kernel '{k.kernel_id}' has piece_count {k.piece_count} (must be >= 1)"))
        if k.thickness < 1:
            violations.append(Violation("bad-thickness", f"kernel '{k.kernel_id}' has thickness {k.thickness} (must be >= 1)"))
        if k.oversize:
            warnings.append(Violation("oversize", f"kernel '{k.kernel_id}' exceeds cutting-machine limits; excluded from scheduling"))

    fpr_index: dict[str, FinishedProductReference] = {}
    for fpr in book.fprs:
        if fpr.fpr_id in fpr_index:
            violations.append(Violation("duplicate-fpr-id", f"fpr_id '{fpr.fpr_id}' appears more than once"))
        fpr_index[fpr.fpr_id] = fpr

    kernel_index = {k.kernel_id: k for k in book.kernels}
    membership: dict[str, int] = {k.kernel_id: 0 for k in book.kernels}

    for fpr in book.fprs:
        if not fpr.kernel_ids:
            violations.append(Violation("empty-fpr", f"reference '{fpr.fpr_id}' lists no kernels"))
        member_thicknesses: set[int] = set()
        for kid in sorted(fpr.kernel_ids):
            kernel = kernel_index.get(kid)
            if kernel is None:
                violations.append(Violation("unknown-kernel", f"reference '{fpr.fpr_id}' lists unknown kernel '{kid}'"))
                continue
            membership[kid] += 1
            member_thicknesses.add(kernel.thickness)
            if kernel.fpr_id != fpr.fpr_id:
                violations.append(Violation(
                    "fpr-mismatch",
                    f"kernel '{kid}' carries fpr_id '{kernel.fpr_id}' but is listed under '{fpr.fpr_id}'",
                ))
        if set(fpr.thickness_set) != member_thicknesses:
            violations.append(Violation(
                "thickness-set-mismatch",
                f"reference '{fpr.fpr_id}' thickness_set {sorted(fpr.thickness_set)} != member thicknesses {sorted(member_thicknesses)}",
            ))

    for k in book.kernels:
        if k.fpr_id not in fpr_index:
            violations.append(Violation("dangling-fpr", f"kernel '{k.kernel_id}' references missing fpr_id '{k.fpr_id}'"))
        count = membership.get(k.kernel_id, 0)
        if count == 0 and k.fpr_id in fpr_index:
            violations.append(Violation("orphan-kernel", f"kernel '{k.kernel_id}' is not listed by its reference '{k.fpr_id}'"))
        elif count > 1:
            violations.append(Violation("multiple-membership", f"kernel '{k.kernel_id}' is listed by {count} references"))

    if book.n_fprs != len(book.fprs):
        violations.append(Violation("fpr-count-mismatch", f"n_fprs is {book.n_fprs} but the book holds {len(book.fprs)} references"))

    return ValidationReport(violations=tuple(violations), warnings=tuple(warnings))

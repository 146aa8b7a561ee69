"""Batching and setup-aware sequencing for a cutting work-center.

Customer kernels are clustered twice (product references sharing thicknesses,
then thickness-homogeneous manufacturing batches) and the batches are
sequenced on the single cutting machine by a seeded genetic algorithm that
trades off same-group dispersion against thickness setups. Exhaustive search,
legacy baseline rules and a control-step pallet simulation round out the
toolkit; a FastAPI service exposes runs to the operator control station.
"""

from .batching import BatchingConfig, BatchingResult, batch_kernels, build_fpr_batches, build_manufacturing_batches
from .config import RunConfig, load_config
from .ga import GaConfig, GaRunResult, Individual, Termination, evolve
from .metrics import (
    ComparisonReport,
    PalletTimeline,
    baseline_group_by_fpr,
    baseline_group_by_thickness,
    compare,
    max_wip_same_fpr,
    simulate_control_step,
)
from .model import (
    FPRBatch,
    FinishedProductReference,
    Kernel,
    ManufacturingBatch,
    OrderBook,
    Schedule,
    ValidationReport,
    validate_order_book,
)
from .objective import ConstraintReport, FitnessValue, ObjectiveWeights, check_constraints, f1, f2, fitness
from .oracle import OracleResult, exhaustive_best
from .orders import order_book_digest, parse_orders
from .pipeline import RunArtifacts, render_report, run_pipeline, save_artifacts, load_artifacts

__version__ = "0.1.0"

__all__ = [
    "BatchingConfig",
    "BatchingResult",
    "ComparisonReport",
    "ConstraintReport",
    "FPRBatch",
    "FinishedProductReference",
    "FitnessValue",
    "GaConfig",
    "GaRunResult",
    "Individual",
    "Kernel",
    "ManufacturingBatch",
    "ObjectiveWeights",
    "OracleResult",
    "OrderBook",
    "PalletTimeline",
    "RunArtifacts",
    "RunConfig",
    "Schedule",
    "Termination",
    "ValidationReport",
    "batch_kernels",
    "baseline_group_by_fpr",
    "baseline_group_by_thickness",
    "build_fpr_batches",
    "build_manufacturing_batches",
    "check_constraints",
    "compare",
    "evolve",
    "exhaustive_best",
    "f1",
    "f2",
    "fitness",
    "load_artifacts",
    "load_config",
    "max_wip_same_fpr",
    "order_book_digest",
    "parse_orders",
    "render_report",
    "run_pipeline",
    "save_artifacts",
    "simulate_control_step",
    "validate_order_book",
]

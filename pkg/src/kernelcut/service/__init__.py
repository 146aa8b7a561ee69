"""HTTP service backing the operator control-station."""

from .app import create_app
from .state import RunStore, IllegalTransitionError, UnknownBatchError, UnknownRunError

__all__ = ["create_app", "RunStore", "IllegalTransitionError", "UnknownBatchError", "UnknownRunError"]

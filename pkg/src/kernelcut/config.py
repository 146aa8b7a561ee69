"""Layered run configuration: built-in defaults, then the KERNELCUT_SEED
environment variable, then a config file (key=value lines or a JSON object),
then command-line flags. Later layers win.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .batching import BatchingConfig
from .errors import ConfigError
from .ga import GaConfig
from .objective import ObjectiveWeights

DEFAULTS: dict = {
    "max_fprs": 5,
    "size_balance_weight": 1.0,
    "alpha": 1.0,
    "beta": None,  # None: use the manufacturing-batch count of the instance
    "population_size": 1000,
    "elite_fraction": 0.10,
    "generations": 200,
    "neighbour_mutation_rate": 0.05,
    "foreign_mutation_rate": 0.05,
    "seed": 42,
    "stagnation_patience": 50,
    "pallet_limit": 7,
}

_INT_KEYS = {"max_fprs", "population_size", "generations", "seed", "pallet_limit"}
_FLOAT_KEYS = {"size_balance_weight", "alpha", "elite_fraction", "neighbour_mutation_rate", "foreign_mutation_rate"}
_OPTIONAL_KEYS = {"beta", "stagnation_patience"}  # accept "auto"/"none" for unset


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline run needs, fully resolved except the auto beta weight."""

    batching: BatchingConfig
    alpha: float
    beta: float | None
    ga: GaConfig
    pallet_limit: int

    def weights_for(self, batch_count: int) -> ObjectiveWeights:
        """Concrete weights: an unset beta defaults to the batch count, so one
        setup always outweighs any single positional gap."""
        beta = self.beta if self.beta is not None else float(batch_count)
        return ObjectiveWeights(alpha=self.alpha, beta=beta)

    def echo(self, batch_count: int | None = None) -> dict:
        """The effective configuration as recorded in run artifacts."""
        resolved_beta = self.beta
        if resolved_beta is None and batch_count is not None:
            resolved_beta = float(batch_count)
        return {
            "max_fprs": self.batching.max_fprs,
            "size_balance_weight": self.batching.size_balance_weight,
            "alpha": self.alpha,
            "beta": resolved_beta,
            "population_size": self.ga.population_size,
            "elite_fraction": self.ga.elite_fraction,
            "generations": self.ga.generations,
            "neighbour_mutation_rate": self.ga.neighbour_mutation_rate,
            "foreign_mutation_rate": self.ga.foreign_mutation_rate,
            "seed": self.ga.seed,
            "stagnation_patience": self.ga.stagnation_patience,
            "pallet_limit": self.pallet_limit,
        }


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _OPTIONAL_KEYS:
        if isinstance(value, str) and value.strip().lower() in {"auto", "none", ""}:
            return None
        try:
            return int(value) if key == "stagnation_patience" else float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"value {value!r} for '{key}' is not a number") from None
    if key in _INT_KEYS:
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"value {value!r} for '{key}' is not an integer") from None
    if key in _FLOAT_KEYS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"value {value!r} for '{key}' is not a number") from None
    raise ConfigError(f"unknown configuration key '{key}'")


def _read_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    values: dict = {}
    if stripped.startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file {path}: invalid JSON: {err.msg}") from None
        if not isinstance(payload, dict):
            raise ConfigError(f"config file {path}: JSON must be an object")
        values.update(payload)
    else:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config file {path}, line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _validate(values: dict) -> None:
    def require(condition: bool, constraint: str):
        if not condition:
            raise ConfigError(f"constraint violated: {constraint}")

    require(values["max_fprs"] >= 1, "max_fprs >= 1")
    require(values["size_balance_weight"] >= 0, "size_balance_weight >= 0")
    require(values["alpha"] >= 0, "alpha >= 0")
    if values["beta"] is not None:
        require(values["beta"] >= 0, "beta >= 0")
        require(values["alpha"] + values["beta"] > 0, "alpha + beta > 0")
    require(values["population_size"] >= 2, "population_size >= 2")
    require(0 < values["elite_fraction"] <= 1, "elite_fraction in (0, 1]")
    require(values["generations"] >= 1, "generations >= 1")
    for key in ("neighbour_mutation_rate", "foreign_mutation_rate"):
        require(0 <= values[key] <= 1, f"{key} in [0, 1]")
    require(0 <= values["seed"] < 2**64, "seed is a 64-bit unsigned integer")
    if values["stagnation_patience"] is not None:
        require(values["stagnation_patience"] >= 1, "stagnation_patience >= 1 (or unset)")
    require(values["pallet_limit"] >= 1, "pallet_limit >= 1")


def load_config(path: str | None = None, overrides: dict | None = None, env: dict | None = None) -> RunConfig:
    """Resolve the effective configuration from all layers and validate it."""
    env = os.environ if env is None else env
    values = dict(DEFAULTS)

    if "KERNELCUT_SEED" in env:
        values["seed"] = _coerce("seed", env["KERNELCUT_SEED"])
    if path is not None:
        for key, value in _read_file(path).items():
            values[key] = _coerce(key, value)
    for key, value in (overrides or {}).items():
        if value is None:
            continue  # unset flag
        values[key] = _coerce(key, value)

    _validate(values)
    return RunConfig(
        batching=BatchingConfig(max_fprs=values["max_fprs"], size_balance_weight=values["size_balance_weight"]),
        alpha=values["alpha"],
        beta=values["beta"],
        ga=GaConfig(
            population_size=values["population_size"],
            elite_fraction=values["elite_fraction"],
            generations=values["generations"],
            neighbour_mutation_rate=values["neighbour_mutation_rate"],
            foreign_mutation_rate=values["foreign_mutation_rate"],
            seed=values["seed"],
            stagnation_patience=values["stagnation_patience"],
        ),
        pallet_limit=values["pallet_limit"],
    )

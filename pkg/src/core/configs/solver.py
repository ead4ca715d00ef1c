from __future__ import annotations

import logging
from typing import Any

from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator

from core.configs import cfg
from core.utils.helpers import load_yaml

log = logging.getLogger(__name__)

_SEED_MASK = (1 << 64) - 1


class SolverConfig(BaseModel):
    """Knobs of the graph decomposition engines.

    Attributes:
        seed (int): 64-bit seed; identical seeds give identical output.
        max_restarts (int): Restarts of the heuristic engine before SearchExhausted.
        exact_threshold (int): Largest n solved by the exact backtracking engine.
        switch_budget (int): Ruin & recreate moves per heuristic restart.
        node_budget (int): Search-node cap of one exact engine call.
        tail_edges (int): Remaining-edge count under which the heuristic engine hands
            the rest of the instance to the exact engine.
        workers (int): Parallel restart workers (1 = sequential).
    """

    model_config = ConfigDict(frozen=True)

    seed: int = cfg.DEFAULT_SEED
    max_restarts: PositiveInt = 8
    exact_threshold: PositiveInt = 12
    switch_budget: PositiveInt = 400
    node_budget: PositiveInt = 200_000
    tail_edges: PositiveInt = 36
    workers: PositiveInt = 1

    @field_validator("seed")
    @classmethod
    def _fit_seed(cls, value: int) -> int:
        return value & _SEED_MASK

    @classmethod
    def from_defaults(cls, **overrides: Any) -> "SolverConfig":
        """Builds a config from solver.yaml, the environment and explicit overrides.

        Args:
            **overrides: Field values taking precedence over every default. None values
                are ignored so CLI flags can be passed through unconditionally.

        Returns:
            SolverConfig: The merged, validated config.
        """
        values = dict(load_yaml(cfg.SOLVER_CONFIG_FILE, key="solver") or {})
        values.setdefault("seed", cfg.DEFAULT_SEED)
        values.setdefault("workers", cfg.WORKERS)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def derive(self, restart: int) -> int:
        """Seed of a restart, mixed so neighbouring restarts are unrelated."""
        mixed = (self.seed * 0x9E3779B97F4A7C15 + (restart + 1) * 0xBF58476D1CE4E5B9) & _SEED_MASK
        return mixed ^ (mixed >> 31)

"""Pick a reduction strategy from the workload footprint.

Privatization wins while every worker's private copy fits in cache;
beyond that, atomics avoid the merge traffic. One thread needs neither.
"""

from __future__ import annotations

from dataclasses import dataclass

from .runtime import ExecConfig, Strategy

DEFAULT_CACHE_BUDGET = 8 * 1024 * 1024


@dataclass(frozen=True)
class WorkloadFeatures:
    reduction_slot_bytes: int
    threads: int
    cache_budget_bytes: int = DEFAULT_CACHE_BUDGET

    def __post_init__(self):
        if self.reduction_slot_bytes < 0 or self.cache_budget_bytes < 0:
            raise ValueError("byte counts must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def choose_strategy(f: WorkloadFeatures) -> Strategy:
    # Locked is a baseline only and never chosen here.
    if f.threads == 1:
        return Strategy.SERIAL
    if f.threads * f.reduction_slot_bytes <= f.cache_budget_bytes:
        return Strategy.PRIVATIZED
    return Strategy.ATOMIC


def measure_features(inp, cfg: ExecConfig, budget: int = DEFAULT_CACHE_BUDGET) -> WorkloadFeatures:
    m = inp.matrix
    return WorkloadFeatures(m.n * m.block * 8, cfg.threads, budget)

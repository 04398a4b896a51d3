"""Approximate spherical range counting."""

from ._core import (
    ContractViolation,
    CountAnswer,
    CountingIndex,
    FormatError,
    InfeasibleError,
    build_index,
    collision_prob,
    default_dprime,
    default_sample_size,
    exact_range_weight,
    exact_tq,
    learned_spanning_tree,
    rebuild_index,
    run_cli,
)

__all__ = [
    "ContractViolation",
    "CountAnswer",
    "CountingIndex",
    "FormatError",
    "InfeasibleError",
    "build_index",
    "collision_prob",
    "default_dprime",
    "default_sample_size",
    "exact_range_weight",
    "exact_tq",
    "learned_spanning_tree",
    "rebuild_index",
    "run_cli",
]

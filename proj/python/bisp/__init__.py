"""Edge partitioning with bounded per-vertex replication."""

from bisp._core import (
    BispError,
    complete_graph,
    erdos_renyi,
    extend,
    extract,
    materialize,
    metrics,
    partition,
    plan,
    power_law,
    star,
    verify,
)

__all__ = [
    "BispError",
    "complete_graph",
    "erdos_renyi",
    "extend",
    "extract",
    "materialize",
    "metrics",
    "partition",
    "plan",
    "power_law",
    "star",
    "verify",
]

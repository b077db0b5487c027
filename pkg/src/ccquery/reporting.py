"""Result record shared by every reconstruction algorithm and the lab harness."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import Edge


@dataclass
class ReconstructionReport:
    """Outcome of one reconstruction run.

    Algorithms fill the core fields; the experiment harness completes the
    instance metadata before rows are written out. ``success`` is only ever
    set when the recovered edges match the hidden graph exactly.
    """

    algorithm: str
    success: bool
    edges: frozenset[Edge] = field(default_factory=frozenset)
    total_queries: int = 0
    rounds: int = 0
    restarts: int = 0
    family: str = ""
    n: int = 0
    m: int = 0
    trial: int = 0
    seed: int = 0
    wall_ms: float = 0.0

    @property
    def edge_count(self) -> int:
        return len(self.edges)

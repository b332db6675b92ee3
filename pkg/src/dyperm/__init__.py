"""Incremental community detection on dynamic graphs by permanence maximization."""

__version__ = "0.1.0"
FORMAT_VERSION = "1"

from .engine import ChangeSummary, DyPermEngine, MoveProposal  # noqa: E402
from .errors import *  # noqa: E402,F401,F403
from .evaluation import ari, nmi, score_against_truth  # noqa: E402
from .graph import AtomicEvent, Graph, Partition  # noqa: E402
from .permanence import (  # noqa: E402
    PermanenceReport,
    VertexPermanenceBreakdown,
    community_perm_sum,
    e_max,
    graph_perm,
    vertex_breakdown,
)
from .static import InitConfig, static_maximize  # noqa: E402
from .workload import GenConfig, gen_dynamic, snapshot_diff  # noqa: E402

__all__ = [
    "AtomicEvent",
    "ChangeSummary",
    "DyPermEngine",
    "GenConfig",
    "Graph",
    "InitConfig",
    "MoveProposal",
    "Partition",
    "PermanenceReport",
    "VertexPermanenceBreakdown",
    "ari",
    "community_perm_sum",
    "e_max",
    "gen_dynamic",
    "graph_perm",
    "nmi",
    "score_against_truth",
    "snapshot_diff",
    "static_maximize",
    "vertex_breakdown",
]

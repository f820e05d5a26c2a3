"""Sociogram analytics for directed communication graphs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    ContractError,
    FormatError,
    SingularFitError,
    SociogramError,
    Undefined,
    UndefinedMetricError,
    UnknownVertexError,
)
from .graphcore import Dedup, Edge, EdgeKind, Sociogram, build_graph, parse_edge_csv, read_edge_csv  # noqa: E402

__all__ = [
    "ConfigurationError",
    "ContractError",
    "Dedup",
    "Edge",
    "EdgeKind",
    "FormatError",
    "SingularFitError",
    "Sociogram",
    "SociogramError",
    "Undefined",
    "UndefinedMetricError",
    "UnknownVertexError",
    "__version__",
    "build_graph",
    "parse_edge_csv",
    "read_edge_csv",
]

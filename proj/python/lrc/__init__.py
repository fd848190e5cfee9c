"""Local rank correlation scores for dimensionality reduction."""

from ._core import (
    DisconnectedGraphError,
    Error,
    FormatError,
    NumericalError,
    ParameterError,
    ShapeError,
    ValidationError,
    evaluate,
    fit_affine_adjustment,
    generate,
    local_scores,
    neighborhoods,
    read_matrix,
    reduce,
    select_dim,
    select_j,
    select_k,
    set_thread_count,
    sweep_dim,
    sweep_j,
    sweep_k,
    thread_count,
    write_matrix,
)

__all__ = [
    "DisconnectedGraphError",
    "Error",
    "FormatError",
    "NumericalError",
    "ParameterError",
    "ShapeError",
    "ValidationError",
    "evaluate",
    "fit_affine_adjustment",
    "generate",
    "local_scores",
    "neighborhoods",
    "read_matrix",
    "reduce",
    "select_dim",
    "select_j",
    "select_k",
    "set_thread_count",
    "sweep_dim",
    "sweep_j",
    "sweep_k",
    "thread_count",
    "write_matrix",
]

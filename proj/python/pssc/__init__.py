"""Probabilistic sparse subspace clustering."""

from ._pssc import (
    ClusteringResult,
    Error,
    HyperParams,
    IterationRecord,
    SpectralMode,
    __version__,
    generate,
    lambda0,
    misclassification,
    run,
    run_ssc_baseline,
    similarity,
    ssr_error,
)

__all__ = [
    "ClusteringResult",
    "Error",
    "HyperParams",
    "IterationRecord",
    "SpectralMode",
    "generate",
    "lambda0",
    "misclassification",
    "run",
    "run_ssc_baseline",
    "similarity",
    "ssr_error",
]

"""Gradient-free neural network training with random weight change.

The heavy lifting lives in the compiled extension; this package re-exports
its surface as-is.
"""

from ._core import (
    Dataset,
    GrwcConfig,
    GrwcResult,
    NetworkTopology,
    RwcConfig,
    RwcResult,
    cost,
    dataset_cost,
    forward,
    grwc_train,
    load_mnist,
    make_synthetic,
    normalize_output,
    rwc_train,
    sigmoid,
)

__all__ = [
    "Dataset",
    "GrwcConfig",
    "GrwcResult",
    "NetworkTopology",
    "RwcConfig",
    "RwcResult",
    "cost",
    "dataset_cost",
    "forward",
    "grwc_train",
    "load_mnist",
    "make_synthetic",
    "normalize_output",
    "rwc_train",
    "sigmoid",
]

"""Sums of distinct positive n-th powers: explicit completeness bound,
constructive certificates, and exact threshold-of-completeness search."""

from .params import Params, derive_params, theorem_bound

__version__ = "0.1.0"

__all__ = ["Params", "derive_params", "theorem_bound", "__version__"]

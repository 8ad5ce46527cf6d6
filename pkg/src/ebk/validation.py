"""Argument checks shared by the estimator front end."""
from __future__ import annotations

from math import prod

import numpy as np

from .exceptions import InvalidInputError


def check_dims(dims) -> tuple:
    try:
        out = tuple(int(d) for d in dims)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"dims must be a sequence of integers, got {dims!r}") from exc
    if len(out) < 2:
        raise InvalidInputError("need at least two parties")
    if any(d < 1 or d != x for d, x in zip(out, dims)):
        raise InvalidInputError(f"dims must be positive integers, got {dims!r}")
    return out


def check_k(k, dims) -> int:
    if isinstance(k, bool) or int(k) != k:
        raise InvalidInputError(f"k must be an integer, got {k!r}")
    k = int(k)
    if not 1 <= k <= min(dims):
        raise InvalidInputError(f"k={k} must lie in [1, min(dims)={min(dims)}]")
    return k


def check_state_matrix(X, n_features: int | None = None) -> np.ndarray:
    """Coerce to a finite complex 2-D array, one state per row.

    A 1-D input is read as a single state.
    """
    a = np.asarray(X)
    if a.dtype == object or not (np.issubdtype(a.dtype, np.number) or a.dtype == bool):
        raise InvalidInputError(f"expected numeric data, got dtype {a.dtype}")
    a = a.astype(np.complex128)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2-D array, got {a.ndim} dimensions")
    if a.shape[0] == 0:
        raise InvalidInputError("expected at least one row")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("input contains NaN or infinity")
    if n_features is not None and a.shape[1] != n_features:
        raise InvalidInputError(f"expected {n_features} amplitudes per row, got {a.shape[1]}")
    return a


def n_amplitudes(dims) -> int:
    return prod(dims)

"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Sizes handled here
are tiny (a few hundred at most), so clarity wins over speed everywhere except
:func:`gram`, which is called on every verification.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``a = left @ diag(singular_values) @ right.conj().T``."""

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def svd(a) -> SvdResult:
    a = as_cmatrix(a)
    # LAPACK gesdd returns sigma sorted descending and non-negative.
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SvdResult(singular_values=s, left_vectors=u, right_vectors=vh.conj().T)


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(as_cmatrix(a), compute_uv=False)


def gram(vectors) -> np.ndarray:
    """Gram matrix ``G[i, j] = <v_i|v_j>`` of the rows of ``vectors``.

    The inner products are accumulated in ascending component order, one
    component at a time, rather than through a BLAS call whose summation
    order depends on the build.
    """
    try:
        rows = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"cannot read vectors: {exc}") from exc
    if not rows:
        return np.zeros((0, 0), dtype=np.complex128)
    n = rows[0].size
    if any(r.size != n for r in rows):
        raise InvalidInputError("all vectors must have the same length")
    v = np.stack(rows)
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vectors have non-finite entries")
    vc = v.conj()
    g = np.zeros((len(rows), len(rows)), dtype=np.complex128)
    for t in range(n):
        g += np.multiply.outer(vc[:, t], v[:, t])
    return g


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return np.kron(a, b)


def root_of_unity(n: int, power: int = 1) -> complex:
    """``exp(2 pi i power / n)``, exact when the angle is a multiple of pi/2."""
    p = power % n
    if (4 * p) % n == 0:
        return (1.0 + 0j, 1j, -1.0 + 0j, -1j)[(4 * p) // n]
    return complex(np.exp(2j * np.pi * p / n))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def identity_deviation(a) -> float:
    """``max |a - I|`` for a square matrix."""
    a = np.asarray(a)
    return max_abs(a - np.eye(a.shape[0]))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n x n`` unitary (QR of a complex Ginibre matrix, phase-fixed)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))

"""States, bases and the state <-> coefficient-matrix correspondence.

A pure state ``sum_kl a_kl |k>|l'>`` of ``C^d (x) C^d'`` is identified with the
``d x d'`` matrix ``A = [a_kl]``. Its Schmidt number is ``rank(A)``, its
Schmidt coefficients are the singular values of ``A``, and
``<psi_A|psi_B> = Tr(A^dagger B)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import numerics
from .exceptions import InvalidInputError, NormalizationError

DEFAULT_RANK_TOL = 1e-8
ZERO_TOL = 1e-10
STATE_NORM_TOL = 1e-12

FAMILIES = ("pb", "ebk", "sebk", "meb", "custom")


@dataclass(frozen=True)
class BipartiteState:
    """Sparse pure state on a ``d x d'`` computational grid.

    ``amplitudes`` holds ``(row, col, value)`` triples. On construction they
    are sorted row-major and exact zeros are dropped, so two states with the
    same nonzero amplitudes compare equal.
    """

    d: int
    dprime: int
    amplitudes: tuple
    norm_tol: float = field(default=STATE_NORM_TOL, compare=False, repr=False)

    def __post_init__(self):
        if int(self.d) < 1 or int(self.dprime) < 1:
            raise InvalidInputError(f"dimensions must be >= 1, got {self.d}x{self.dprime}")
        entries = []
        seen = set()
        for row, col, value in self.amplitudes:
            row, col, value = int(row), int(col), complex(value)
            if not (0 <= row < self.d and 0 <= col < self.dprime):
                raise InvalidInputError(
                    f"position ({row}, {col}) outside the {self.d}x{self.dprime} grid"
                )
            if (row, col) in seen:
                raise InvalidInputError(f"duplicate position ({row}, {col})")
            if not (np.isfinite(value.real) and np.isfinite(value.imag)):
                raise InvalidInputError(f"non-finite amplitude at ({row}, {col})")
            seen.add((row, col))
            if value != 0:
                entries.append((row, col, value))
        entries.sort(key=lambda e: (e[0], e[1]))
        norm2 = sum(abs(v) ** 2 for _, _, v in entries)
        if abs(norm2 - 1.0) > self.norm_tol:
            raise NormalizationError(f"squared norm {norm2!r} differs from 1 by more than {self.norm_tol}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "dprime", int(self.dprime))
        object.__setattr__(self, "amplitudes", tuple(entries))

    @property
    def dims(self) -> tuple:
        return (self.d, self.dprime)

    def to_vector(self) -> np.ndarray:
        """Dense amplitude vector, index ``row * d' + col``."""
        v = np.zeros(self.d * self.dprime, dtype=np.complex128)
        for row, col, value in self.amplitudes:
            v[row * self.dprime + col] = value
        return v

    @classmethod
    def from_vector(cls, vector, d: int, dprime: int, norm_tol: float = STATE_NORM_TOL):
        v = np.asarray(vector, dtype=np.complex128).ravel()
        if v.size != d * dprime:
            raise InvalidInputError(f"vector of length {v.size} does not fit a {d}x{dprime} grid")
        return cls(d, dprime, tuple((i // dprime, i % dprime, v[i]) for i in np.flatnonzero(v)), norm_tol)

    def support(self) -> list:
        return [(row, col) for row, col, _ in self.amplitudes]


@dataclass(frozen=True)
class SchmidtData:
    schmidt_number: int
    coefficients: np.ndarray
    tol_used: float


@dataclass(frozen=True)
class PositionSequence:
    """An ordering of every cell of a ``d x d'`` grid."""

    d: int
    dprime: int
    positions: tuple

    def __post_init__(self):
        cells = [(int(r), int(c)) for r, c in self.positions]
        expected = {(r, c) for r in range(self.d) for c in range(self.dprime)}
        if len(cells) != len(expected) or set(cells) != expected:
            raise InvalidInputError("positions must enumerate every grid cell exactly once")
        object.__setattr__(self, "positions", tuple(cells))

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, i):
        return self.positions[i]

    def __iter__(self) -> Iterator:
        return iter(self.positions)


@dataclass(frozen=True)
class EntangledBasis:
    """An ordered orthonormal basis of ``C^d (x) C^d'`` with a target Schmidt number."""

    dims: tuple
    k: int
    states: tuple
    family: str = "custom"
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d, dprime = (int(x) for x in self.dims)
        object.__setattr__(self, "dims", (d, dprime))
        object.__setattr__(self, "states", tuple(self.states))
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}")
        if len(self.states) != d * dprime:
            raise InvalidInputError(f"a basis of {d}x{dprime} needs {d * dprime} states, got {len(self.states)}")
        for s in self.states:
            if not isinstance(s, BipartiteState) or s.dims != (d, dprime):
                raise InvalidInputError("every state must be a BipartiteState on the basis grid")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[BipartiteState]:
        return iter(self.states)

    def __getitem__(self, i) -> BipartiteState:
        return self.states[i]

    def vectors(self) -> np.ndarray:
        """Dense ``(n_states, d * d')`` array, one state per row."""
        return np.stack([s.to_vector() for s in self.states])

    def matrices(self) -> list:
        return [state_to_matrix(s) for s in self.states]


def state_to_matrix(s: BipartiteState) -> np.ndarray:
    a = np.zeros((s.d, s.dprime), dtype=np.complex128)
    for row, col, value in s.amplitudes:
        a[row, col] = value
    return a


def matrix_to_state(a, tol: float = ZERO_TOL) -> BipartiteState:
    a = numerics.as_cmatrix(a, "coefficient matrix")
    norm2 = float(np.sum(np.abs(a) ** 2))
    if abs(np.sqrt(norm2) - 1.0) > tol:
        raise NormalizationError(f"Frobenius norm {np.sqrt(norm2)!r} is not 1 within {tol}")
    rows, cols = np.nonzero(a)
    return BipartiteState(a.shape[0], a.shape[1], tuple((r, c, a[r, c]) for r, c in zip(rows, cols)), norm_tol=2.5 * tol)


def schmidt(s: BipartiteState, rank_tol: float = DEFAULT_RANK_TOL) -> SchmidtData:
    sigma = numerics.singular_values(state_to_matrix(s))
    kept = sigma[sigma > rank_tol]
    return SchmidtData(schmidt_number=int(kept.size), coefficients=kept, tol_used=rank_tol)


def states_from_vectors(vectors: Sequence, d: int, dprime: int, norm_tol: float = 1e-10) -> list:
    return [BipartiteState.from_vector(v, d, dprime, norm_tol) for v in vectors]

"""Coefficient matrices for the constructions, and the predicates they must satisfy.

Each construction takes the coefficients of its basis states from the
columns of an isometry ``X`` (``X^dagger X = I``). Different isometries give
different bases, which is how the constructions produce infinitely many.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from dataclasses import field as dc_field
from pathlib import Path

import numpy as np

from . import numerics
from .exceptions import DegenerateCoefficientError, InvalidInputError

ISOMETRY_TOL = 1e-10
SOURCES = ("dft", "od", "ud", "file", "real")


@dataclass(frozen=True)
class Isometry:
    entries: np.ndarray
    source: str = "file"
    field: str = "complex"
    tol: float = dc_field(default=ISOMETRY_TOL, repr=False, compare=False)

    def __post_init__(self):
        x = numerics.as_cmatrix(self.entries, "isometry")
        if x.shape[0] < x.shape[1]:
            raise InvalidInputError(f"an isometry needs rows >= cols, got shape {x.shape}")
        dev = numerics.identity_deviation(x.conj().T @ x)
        if dev > self.tol:
            raise InvalidInputError(f"columns are not orthonormal: max |X^dagger X - I| = {dev:.3e}")
        if self.field not in ("complex", "real"):
            raise InvalidInputError(f"unknown field {self.field!r}")
        if self.field == "real" and np.any(x.imag != 0):
            raise InvalidInputError("a real isometry must have zero imaginary parts")
        x = x.copy()
        x.setflags(write=False)
        object.__setattr__(self, "entries", x)

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]


def dft(n: int) -> Isometry:
    """Unitary DFT matrix ``exp(2 pi i p q / n) / sqrt(n)``."""
    if n < 1:
        raise InvalidInputError("dft size must be >= 1")
    phases = np.array(
        [[numerics.root_of_unity(n, p * q) for q in range(n)] for p in range(n)],
        dtype=np.complex128,
    )
    return Isometry(phases / np.sqrt(n), "dft", "real" if n <= 2 else "complex")


def od(d: int) -> Isometry:
    """Real orthogonal ``(2 J - d I) / d`` (``J`` all-ones); zero-free for ``d >= 3``."""
    if d <= 2:
        raise DegenerateCoefficientError(f"od({d}) has zero entries; need d >= 3")
    o = (2.0 * np.ones((d, d)) - d * np.eye(d)) / d
    return Isometry(o.astype(np.complex128), "od", "real")


def ud(d: int) -> Isometry:
    """``i * od(d)``: a unitary version of :func:`od`."""
    return Isometry(1j * od(d).entries, "ud", "complex")


def real_rotation2() -> Isometry:
    """Zero-free real 2x2 orthogonal matrix with unequal moduli."""
    c, s = 0.5, np.sqrt(3.0) / 2.0
    return Isometry(np.array([[c, s], [s, -c]], dtype=np.complex128), "real", "real")


def real_default(n: int) -> Isometry:
    """Zero-free real orthogonal matrix of size ``n`` for real-field generation."""
    if n == 1:
        return Isometry(np.ones((1, 1), dtype=np.complex128), "real", "real")
    if n == 2:
        return real_rotation2()
    return od(n)


def from_matrix(a, source: str = "file", tol: float = ISOMETRY_TOL) -> Isometry:
    x = numerics.as_cmatrix(a, "isometry")
    fld = "real" if np.all(x.imag == 0) else "complex"
    return Isometry(x, source, fld, tol)


def named(source: str, n: int, field: str = "complex") -> Isometry:
    """Build the ``n x n`` matrix of a named source."""
    if source == "dft":
        x = dft(n)
        if field == "real" and n > 2:
            raise InvalidInputError("dft coefficients are complex for n > 2")
        return x
    if source == "od":
        return od(n)
    if source == "ud":
        if field == "real":
            raise InvalidInputError("ud coefficients are imaginary")
        return ud(n)
    if source == "real":
        return real_default(n)
    raise InvalidInputError(f"unknown isometry source {source!r}")


def no_zero_entries(x, tol: float = ISOMETRY_TOL) -> bool:
    entries = x.entries if isinstance(x, Isometry) else np.asarray(x)
    return bool(np.all(np.abs(entries) > tol))


@dataclass(frozen=True)
class ColumnVerdict:
    column: int
    exactly_k_equal_moduli: bool
    equal_head_and_tail_norm: bool

    @property
    def ok(self) -> bool:
        return self.exactly_k_equal_moduli or self.equal_head_and_tail_norm


@dataclass(frozen=True)
class Theorem3Result:
    k: int
    columns: tuple
    ok: bool


def theorem3_predicate(x, k: int, tol: float = ISOMETRY_TOL) -> Theorem3Result:
    """Check the column conditions that let a ``(k + r) x (k + r)`` isometry seed an SEBk.

    A column passes when either

    1. exactly ``k`` entries are nonzero and each has modulus ``1/sqrt(k)``, or
    2. its first ``k - 1`` entries have modulus ``1/sqrt(k)`` and the entries
       from row ``k - 1`` (0-based) down have squared norm ``1/k``.
    """
    entries = x.entries if isinstance(x, Isometry) else numerics.as_cmatrix(x)
    n, ncols = entries.shape
    if k < 2 or not (k < n < 2 * k) or ncols != n:
        raise InvalidInputError(f"need a square matrix of size in ({k}, {2 * k}), got {entries.shape}")
    target = 1.0 / np.sqrt(k)
    verdicts = []
    for j in range(n):
        mod = np.abs(entries[:, j])
        nonzero = mod > tol
        cond1 = int(nonzero.sum()) == k and bool(np.all(np.abs(mod[nonzero] - target) <= tol))
        head_ok = bool(np.all(np.abs(mod[: k - 1] - target) <= tol))
        tail_ok = abs(float(np.sum(mod[k - 1 :] ** 2)) - 1.0 / k) <= tol
        verdicts.append(ColumnVerdict(j, cond1, head_ok and tail_ok))
    return Theorem3Result(k, tuple(verdicts), all(v.ok for v in verdicts))


MATRIX_SCHEMA = {
    "type": "object",
    "required": ["rows", "cols", "entries"],
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "entries": {
            "type": "array",
            "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}},
        },
    },
}


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    rows, cols = a.shape
    return {
        "rows": int(rows),
        "cols": int(cols),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    import jsonschema

    try:
        jsonschema.validate(doc, MATRIX_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidInputError(f"invalid matrix file: {exc.message}") from exc
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if len(entries) != rows * cols:
        raise InvalidInputError(f"matrix file has {len(entries)} entries, expected {rows * cols}")
    a = np.array([complex(re, im) for re, im in entries], dtype=np.complex128).reshape(rows, cols)
    return numerics.as_cmatrix(a)


def load(path, tol: float = ISOMETRY_TOL) -> Isometry:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InvalidInputError(f"cannot read matrix file {path}: {exc}") from exc
    return from_matrix(matrix_from_json(doc), "file", tol)

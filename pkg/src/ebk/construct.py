"""Bipartite basis generation.

When ``k`` divides ``d d'`` the grid is walked along a fixed position sequence
(``gamma``) and every run of ``k`` consecutive cells carries ``k`` states whose
coefficients are the columns of a ``k x k`` isometry. Runs have pairwise
distinct rows and columns, so every state has Schmidt number ``k``. Other
cases go through :mod:`ebk.tiling`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import isometry as iso
from .exceptions import (
    DegenerateCoefficientError,
    DispatchError,
    InvalidInputError,
    UnsupportedConstructionError,
)
from .model import BipartiteState, EntangledBasis, PositionSequence

SEBK_TOL = 1e-10

NO_SEBK_MESSAGE = (
    "no SEB{k} in {d}x{dprime} by this construction: {k} does not divide {area}. "
    "An SEB{k} would follow from a ({k}+r)x({k}+r) isometry whose columns have "
    "either exactly {k} nonzero entries of modulus 1/sqrt({k}) or equal head moduli "
    "1/sqrt({k}) with tail norm 1/sqrt({k}); whether such matrices exist for k >= 3 is open "
    "(use `ebk` family, or evaluate candidates with theorem3_predicate)"
)


@dataclass(frozen=True)
class ConstructionRequest:
    d: int
    dprime: int
    k: int
    family: str = "ebk"
    coeffs: object = None
    field: str = "complex"

    def __post_init__(self):
        for name in ("d", "dprime", "k"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")
        if self.k > min(self.d, self.dprime):
            raise InvalidInputError(f"k={self.k} exceeds min(d, d')={min(self.d, self.dprime)}")
        if self.family not in ("pb", "ebk", "sebk", "meb"):
            raise InvalidInputError(f"unknown family {self.family!r}")
        if self.field not in ("complex", "real"):
            raise InvalidInputError(f"unknown field {self.field!r}")
        if self.family == "pb" and self.k != 1:
            raise InvalidInputError("family pb means k = 1")
        if self.family == "meb" and self.k != min(self.d, self.dprime):
            raise InvalidInputError("family meb means k = min(d, d')")
        if not (self.coeffs is None or isinstance(self.coeffs, (str, iso.Isometry))):
            raise InvalidInputError("coeffs must be a source name or an Isometry")


def gamma_sequence(d: int, dprime: int) -> PositionSequence:
    """Position ``i = t d + r`` maps to cell ``(r, (t + r) mod d')``."""
    if d > dprime:
        raise InvalidInputError(f"gamma sequence needs d <= d', got {d} > {dprime}")
    cells = []
    for i in range(d * dprime):
        t, r = divmod(i, d)
        cells.append((r, (t + r) % dprime))
    return PositionSequence(d, dprime, tuple(cells))


def coefficient_matrix(coeffs, n: int, field: str = "complex") -> iso.Isometry:
    """Resolve a coefficient source to an ``n x n`` isometry."""
    if isinstance(coeffs, iso.Isometry):
        if coeffs.shape != (n, n):
            raise InvalidInputError(f"need a {n}x{n} coefficient matrix, got {coeffs.shape}")
        if field == "real" and coeffs.field != "real":
            raise InvalidInputError("real-field generation needs a real coefficient matrix")
        return coeffs
    if coeffs is None or coeffs == "file":
        coeffs = "real" if field == "real" else "dft"
    return iso.named(coeffs, n, field)


def has_constant_modulus(x: iso.Isometry, tol: float = SEBK_TOL) -> bool:
    n = x.shape[0]
    return bool(np.all(np.abs(np.abs(x.entries) - 1.0 / np.sqrt(n)) <= tol))


def cyclic_states(d: int, dprime: int, k: int, x: iso.Isometry) -> list:
    """Sparse entries ``[(row, col, value), ...]`` of the cyclic basis on a ``d x d'`` grid.

    State ``(m, n)`` sits at index ``m + k n`` and equals
    ``sum_l x[l, m] |gamma_{n k + l}>``.
    """
    if (d * dprime) % k:
        raise DispatchError(f"{k} does not divide {d}*{dprime}; use the tiling path")
    if k > d or d > dprime:
        raise InvalidInputError(f"cyclic construction needs k <= d <= d', got k={k}, {d}x{dprime}")
    if x.shape != (k, k):
        raise InvalidInputError(f"need a {k}x{k} coefficient matrix, got {x.shape}")
    if not iso.no_zero_entries(x):
        raise DegenerateCoefficientError("coefficient matrix has a zero entry; states would lose rank")
    gamma = gamma_sequence(d, dprime)
    out = []
    for n in range(d * dprime // k):
        block = gamma.positions[n * k : (n + 1) * k]
        for m in range(k):
            out.append([(r, c, x.entries[l, m]) for l, (r, c) in enumerate(block)])
    return out


def _resolve_family(req: ConstructionRequest, x: iso.Isometry) -> str:
    if req.k == 1:
        return "pb"
    if req.family in ("sebk", "meb"):
        if not has_constant_modulus(x):
            raise InvalidInputError("an SEBk needs coefficients of constant modulus 1/sqrt(k)")
        return req.family
    return "ebk"


def ebk_cyclic(req: ConstructionRequest) -> EntangledBasis:
    d, dprime, k = req.d, req.dprime, req.k
    if (d * dprime) % k:
        raise DispatchError(f"{k} does not divide {d}*{dprime}; use the tiling path")
    coeffs = req.coeffs
    if coeffs is None and req.family in ("sebk", "meb"):
        # the real default has unequal moduli; dft(k) is real for k <= 2
        coeffs = "dft"
    x = coefficient_matrix(coeffs, k, req.field)
    family = _resolve_family(req, x)
    states = tuple(BipartiteState(d, dprime, tuple(e)) for e in cyclic_states(d, dprime, k, x))
    provenance = {
        "construction": "cyclic",
        "isometry": x.source,
        "field": req.field,
        "ordering": "index = m + k*n (block n, phase m)",
    }
    return EntangledBasis((d, dprime), k, states, family, provenance)


def product_basis(d: int, dprime: int) -> EntangledBasis:
    states = tuple(BipartiteState(d, dprime, ((r, c, 1.0),)) for r in range(d) for c in range(dprime))
    return EntangledBasis((d, dprime), 1, states, "pb", {"construction": "product", "ordering": "row-major"})


def transpose_basis(basis: EntangledBasis) -> EntangledBasis:
    """Swap the two parties of every state."""
    d, dprime = basis.dims
    states = tuple(BipartiteState(dprime, d, tuple((c, r, v) for r, c, v in s.amplitudes)) for s in basis.states)
    provenance = dict(basis.provenance)
    provenance["transposed"] = not provenance.get("transposed", False)
    return EntangledBasis((dprime, d), basis.k, states, basis.family, provenance)


def generate(req: ConstructionRequest) -> EntangledBasis:
    """Build a basis of ``C^d (x) C^d'`` whose states all have Schmidt number ``k``.

    ``k = 1`` gives the computational product basis; ``k | d d'`` the cyclic
    construction; otherwise the corner-tiling construction (``ebk`` only).
    """
    if req.d > req.dprime:
        flipped = ConstructionRequest(req.dprime, req.d, req.k, req.family, req.coeffs, req.field)
        return transpose_basis(generate(flipped))
    d, dprime, k = req.d, req.dprime, req.k
    if req.family == "meb" and req.coeffs in (None, "dft") and req.field == "complex":
        from .weyl import meb

        return meb(d, dprime)
    if k == 1:
        return product_basis(d, dprime)
    if req.family in ("sebk", "meb") and req.field == "real" and k > 2:
        raise UnsupportedConstructionError(
            f"no real SEB{k} by this construction: constant-modulus real {k}x{k} "
            "coefficient matrices are only used for k <= 2"
        )
    if (d * dprime) % k == 0:
        return ebk_cyclic(req)
    if req.family in ("sebk", "meb"):
        raise UnsupportedConstructionError(NO_SEBK_MESSAGE.format(k=k, d=d, dprime=dprime, area=d * dprime))
    from . import tiling

    return tiling.assemble(d, dprime, k, req.coeffs, req.field)

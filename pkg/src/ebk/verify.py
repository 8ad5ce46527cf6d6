"""Certification of bases from their amplitudes alone.

Nothing about how a basis was built is trusted: orthonormality comes from the
Gram matrix of the amplitude vectors, Schmidt numbers from singular values of
the reshaped amplitudes. A mathematical failure is recorded in the report,
never raised.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import prod

import numpy as np

from . import numerics
from .exceptions import InvalidInputError
from .model import DEFAULT_RANK_TOL, BipartiteState, EntangledBasis
from .multipartite import MultipartiteBasis, MultipartiteState, ghz_check

GRAM_TOL = 1e-10
SEBK_TOL = 1e-10


@dataclass
class StateRecord:
    index: int
    schmidt_number: int
    coefficients: list
    max_sebk_deviation: float
    ambiguous: bool = False
    marginal_ranks: list | None = None
    ghz: str | None = None


@dataclass
class VerificationReport:
    kind: str
    dims: list
    claimed_k: int
    state_count: int
    expected_count: int
    gram_max_deviation: float
    per_state: list
    classification: str
    failures: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.classification != "invalid"

    def to_dict(self) -> dict:
        return asdict(self)


def meets(classification: str, family: str) -> bool:
    """Whether a classification matches or exceeds a claimed family."""
    if classification == "invalid":
        return False
    if family in ("custom", "ebk"):
        return True
    if family == "pb":
        return classification == "pb"
    if family == "sebk":
        # a product basis is an SEB1
        return classification in ("sebk", "meb", "pb")
    return classification == family


def _classify(failures, k, deviations, tol_sebk, dims, allow_meb=True) -> str:
    if failures:
        return "invalid"
    if k == 1:
        return "pb"
    if all(dev <= tol_sebk for dev in deviations):
        return "meb" if allow_meb and k == min(dims) else "sebk"
    return "ebk"


def _gram_failures(vectors, tol_gram, failures) -> float:
    g = numerics.gram(vectors)
    deviation = numerics.identity_deviation(g) if len(vectors) else 0.0
    if deviation > tol_gram:
        i, j = np.unravel_index(int(np.argmax(np.abs(g - np.eye(len(vectors))))), g.shape)
        failures.append({"check": "gram", "deviation": deviation, "worst_pair": [int(i), int(j)]})
    return deviation


def _rank_record(index, sigma, k, tol_rank, zero_tol):
    kept = sigma[sigma > tol_rank]
    ambiguous = bool(np.any((sigma > zero_tol) & (sigma <= tol_rank)))
    target = 1.0 / np.sqrt(k) if k > 0 else 0.0
    head = sigma[:k] if sigma.size >= k else np.concatenate([sigma, np.zeros(k - sigma.size)])
    deviation = float(np.max(np.abs(head - target))) if k > 0 else 0.0
    return StateRecord(index, int(kept.size), [float(x) for x in kept], deviation, ambiguous)


def _as_bipartite_vectors(basis, dims):
    if isinstance(basis, EntangledBasis):
        return basis.dims, basis.vectors()
    items = list(basis)
    if items and isinstance(items[0], BipartiteState):
        dims = items[0].dims
        if any(s.dims != dims for s in items):
            raise InvalidInputError("states live on different grids")
        return dims, np.stack([s.to_vector() for s in items])
    if dims is None:
        raise InvalidInputError("dims are required for raw vectors")
    dims = tuple(int(x) for x in dims)
    vectors = np.asarray(items, dtype=np.complex128)
    if vectors.ndim != 2 or vectors.shape[1] != prod(dims):
        raise InvalidInputError(f"raw vectors must have shape (n, {prod(dims)})")
    return dims, vectors


def verify_basis(basis, k: int | None = None, tol_gram: float = GRAM_TOL, tol_rank: float = DEFAULT_RANK_TOL,
                 zero_tol: float | None = None, tol_sebk: float = SEBK_TOL, dims=None) -> VerificationReport:
    """Certify a bipartite basis as PB / EBk / SEBk / MEB, or report why not.

    ``sigma_k`` must exceed ``tol_rank`` and ``sigma_{k+1}`` must not exceed
    ``zero_tol`` (default ``tol_rank / 100``); values in between are flagged
    as ambiguous.
    """
    zero_tol = tol_rank * 1e-2 if zero_tol is None else zero_tol
    if k is None:
        if not isinstance(basis, EntangledBasis):
            raise InvalidInputError("k is required unless an EntangledBasis is given")
        k = basis.k
    dims, vectors = _as_bipartite_vectors(basis, dims)
    if not np.all(np.isfinite(vectors)):
        raise InvalidInputError("non-finite amplitudes")
    d, dprime = dims
    failures = []
    expected = d * dprime
    if len(vectors) != expected:
        failures.append({"check": "count", "expected": expected, "found": len(vectors)})
    deviation = _gram_failures(vectors, tol_gram, failures)
    records = []
    for i, v in enumerate(vectors):
        rec = _rank_record(i, numerics.singular_values(v.reshape(d, dprime)), k, tol_rank, zero_tol)
        records.append(rec)
        if rec.schmidt_number != k:
            failures.append({"check": "schmidt_number", "index": i, "expected": k, "found": rec.schmidt_number})
        if rec.ambiguous:
            failures.append({"check": "ambiguous_rank", "index": i})
    classification = _classify(failures, k, [r.max_sebk_deviation for r in records], tol_sebk, dims)
    return VerificationReport(
        kind="bipartite",
        dims=[d, dprime],
        claimed_k=int(k),
        state_count=len(vectors),
        expected_count=expected,
        gram_max_deviation=float(deviation),
        per_state=records,
        classification=classification,
        failures=failures,
        tolerances={"gram": tol_gram, "rank": tol_rank, "zero": zero_tol, "sebk": tol_sebk},
    )


def verify_multipartite(basis, k: int | None = None, dims=None, tol_gram: float = GRAM_TOL,
                        tol_rank: float = DEFAULT_RANK_TOL, zero_tol: float | None = None,
                        tol_sebk: float = SEBK_TOL, tol_ghz: float = 1e-8) -> VerificationReport:
    """Certify an N-partite basis of GHZ-like states."""
    zero_tol = tol_rank * 1e-2 if zero_tol is None else zero_tol
    if isinstance(basis, MultipartiteBasis):
        dims = basis.dims
        k = basis.k if k is None else k
        tensors = basis.tensors()
    else:
        items = list(basis)
        if items and isinstance(items[0], MultipartiteState):
            dims = items[0].dims
            tensors = np.stack([s.to_tensor() for s in items])
        else:
            if dims is None:
                raise InvalidInputError("dims are required for raw tensors")
            tensors = np.asarray(items, dtype=np.complex128)
    if k is None:
        raise InvalidInputError("k is required")
    dims = tuple(int(x) for x in dims)
    if tensors.ndim != 2 or tensors.shape[1] != prod(dims):
        raise InvalidInputError(f"tensors must have shape (n, {prod(dims)})")
    if not np.all(np.isfinite(tensors)):
        raise InvalidInputError("non-finite amplitudes")
    failures = []
    expected = prod(dims)
    if len(tensors) != expected:
        failures.append({"check": "count", "expected": expected, "found": len(tensors)})
    deviation = _gram_failures(tensors, tol_gram, failures)
    records = []
    deviations = []
    target = 1.0 / np.sqrt(k)
    for i, psi in enumerate(tensors):
        try:
            check = ghz_check(psi, dims, k, tol_rank, zero_tol, tol_ghz)
        except InvalidInputError as exc:
            failures.append({"check": "ghz", "index": i, "reason": str(exc)})
            records.append(StateRecord(i, 0, [], float("inf"), ghz=str(exc)))
            deviations.append(float("inf"))
            continue
        ranks = []
        cube = psi.reshape(dims)
        for party in range(len(dims)):
            unfolding = np.moveaxis(cube, party, 0).reshape(dims[party], -1)
            ranks.append(int(np.sum(numerics.singular_values(unfolding) > tol_rank)))
        rank1 = int(np.sum(check.first_cut_singular_values > tol_rank))
        if check.ok:
            weights = [float(w) for w in check.state.weights]
            dev = float(np.max(np.abs(np.array(weights) - target)))
        else:
            weights, dev = [], float("inf")
            failures.append({"check": "ghz", "index": i, "reason": check.reason})
        deviations.append(dev)
        records.append(StateRecord(i, rank1, weights, dev, check.ambiguous, ranks, check.reason))
        if any(r != k for r in ranks):
            failures.append({"check": "marginal_rank", "index": i, "expected": k, "found": ranks})
        if check.ambiguous:
            failures.append({"check": "ambiguous_rank", "index": i})
    classification = _classify(failures, k, deviations, tol_sebk, dims, allow_meb=False)
    return VerificationReport(
        kind="multipartite",
        dims=list(dims),
        claimed_k=int(k),
        state_count=len(tensors),
        expected_count=expected,
        gram_max_deviation=float(deviation),
        per_state=records,
        classification=classification,
        failures=failures,
        tolerances={"gram": tol_gram, "rank": tol_rank, "zero": zero_tol, "sebk": tol_sebk, "ghz": tol_ghz},
    )

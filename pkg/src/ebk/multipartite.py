"""N-partite bases of GHZ-like states ``sum_j w_j |e_j^(1)> ... |e_j^(N)>``.

Every state keeps its term decomposition (weights plus per-party orthonormal
vectors). Lifting appends a party: term ``l`` of state ``i`` gets
``|(j + l) mod d_next>`` for each ``j``, so one m-partite basis of ``k``-term
states yields ``d_next`` times as many (m+1)-partite ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import construct, numerics
from .exceptions import InvalidDimensionError, InvalidInputError, UnsupportedConstructionError
from .model import DEFAULT_RANK_TOL, ZERO_TOL, BipartiteState, EntangledBasis

WEIGHT_TOL = 1e-12
ORTHO_TOL = 1e-10
GHZ_SEED = 20140805


@dataclass(frozen=True)
class Term:
    weight: float
    factors: tuple

    def tensor(self) -> np.ndarray:
        out = np.ones(1, dtype=np.complex128)
        for f in self.factors:
            out = np.kron(out, f)
        return self.weight * out


@dataclass(frozen=True)
class MultipartiteState:
    dims: tuple
    terms: tuple

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        terms = []
        for t in self.terms:
            factors = tuple(np.asarray(f, dtype=np.complex128).ravel() for f in t.factors)
            if len(factors) != len(dims) or any(f.size != d for f, d in zip(factors, dims)):
                raise InvalidInputError("term factors do not match the party dimensions")
            if not t.weight > 0:
                raise InvalidInputError(f"term weights must be positive, got {t.weight!r}")
            terms.append(Term(float(t.weight), factors))
        if not terms:
            raise InvalidInputError("a state needs at least one term")
        norm2 = sum(t.weight**2 for t in terms)
        if abs(norm2 - 1.0) > WEIGHT_TOL:
            raise InvalidInputError(f"squared weights sum to {norm2!r}, not 1")
        for party in range(len(dims)):
            vecs = np.stack([t.factors[party] for t in terms])
            if numerics.identity_deviation(vecs.conj() @ vecs.T) > ORTHO_TOL:
                raise InvalidInputError(f"party {party} vectors are not orthonormal")
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def weights(self) -> tuple:
        return tuple(t.weight for t in self.terms)

    def to_tensor(self) -> np.ndarray:
        """Dense amplitudes, party 1 most significant."""
        return sum(t.tensor() for t in self.terms)


@dataclass(frozen=True)
class MultipartiteBasis:
    dims: tuple
    k: int
    states: tuple
    family: str = "ebk"
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) != prod(dims):
            raise InvalidInputError(f"a basis of {dims} needs {prod(dims)} states, got {len(self.states)}")
        for s in self.states:
            if s.dims != dims:
                raise InvalidInputError("state dimensions differ from the basis dimensions")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i) -> MultipartiteState:
        return self.states[i]

    def tensors(self) -> np.ndarray:
        return np.stack([s.to_tensor() for s in self.states])


def _unit(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.complex128)
    e[i] = 1.0
    return e


def bipartite_terms(state: BipartiteState, rank_tol: float = DEFAULT_RANK_TOL) -> MultipartiteState:
    """Schmidt terms of a sparse bipartite state, read off its support.

    Cells are grouped into connected row/column components. A component
    confined to one row or one column is a single product term; anything else
    falls back to an SVD of its sub-matrix. Terms are ordered by the first
    cell of their component.
    """
    d, dprime = state.dims
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, c, _ in state.amplitudes:
        parent[find(("r", r))] = find(("c", c))
    groups = {}
    for r, c, v in state.amplitudes:
        groups.setdefault(find(("r", r)), []).append((r, c, v))
    terms = []
    for cells in sorted(groups.values(), key=lambda g: (g[0][0], g[0][1])):
        rows = sorted({r for r, _, _ in cells})
        cols = sorted({c for _, c, _ in cells})
        if len(rows) == 1 or len(cols) == 1:
            left = np.zeros(d, dtype=np.complex128)
            right = np.zeros(dprime, dtype=np.complex128)
            weight = float(np.sqrt(sum(abs(v) ** 2 for _, _, v in cells)))
            if len(cols) == 1:
                for r, _, v in cells:
                    left[r] = v / weight
                right[cols[0]] = 1.0
            else:
                left[rows[0]] = 1.0
                for _, c, v in cells:
                    right[c] = v / weight
            terms.append(Term(weight, (left, right)))
            continue
        sub = np.zeros((len(rows), len(cols)), dtype=np.complex128)
        for r, c, v in cells:
            sub[rows.index(r), cols.index(c)] = v
        res = numerics.svd(sub)
        for j, sigma in enumerate(res.singular_values):
            if sigma <= rank_tol:
                continue
            left = np.zeros(d, dtype=np.complex128)
            right = np.zeros(dprime, dtype=np.complex128)
            left[rows] = res.left_vectors[:, j]
            right[cols] = res.right_vectors[:, j].conj()
            terms.append(Term(float(sigma), (left, right)))
    return MultipartiteState((d, dprime), tuple(terms))


def from_bipartite(basis: EntangledBasis) -> MultipartiteBasis:
    states = tuple(bipartite_terms(s) for s in basis.states)
    family = "sebk" if basis.family == "meb" else basis.family
    provenance = {"seed": dict(basis.provenance), "lifts": []}
    return MultipartiteBasis(basis.dims, basis.k, states, family, provenance)


def lift(basis, d_next: int, check: bool = True) -> MultipartiteBasis:
    """Append a party of dimension ``d_next``; state ``(i, j)`` lands at ``i * d_next + j``.

    Term ``l`` of state ``i`` is tensored with ``|(j + l) mod d_next>``. The
    result is orthonormal only when states sharing support split into terms
    compatibly (true for every basis built here). With ``check`` the output
    Gram matrix is tested and an incompatible input is rejected.
    """
    if isinstance(basis, EntangledBasis):
        basis = from_bipartite(basis)
    k = basis.k
    if k > d_next:
        raise InvalidDimensionError(f"k={k} terms need d_next >= k, got {d_next}")
    for i, s in enumerate(basis.states):
        if s.k != k:
            raise InvalidInputError(f"state {i} has {s.k} terms, expected {k}")
    states = []
    for s in basis.states:
        for j in range(d_next):
            terms = tuple(
                Term(t.weight, t.factors + (_unit(d_next, (j + l) % d_next),)) for l, t in enumerate(s.terms)
            )
            states.append(MultipartiteState(basis.dims + (d_next,), terms))
    if check:
        tensors = np.stack([s.to_tensor() for s in states])
        deviation = numerics.identity_deviation(numerics.gram(tensors))
        if deviation > ORTHO_TOL:
            raise InvalidInputError(
                f"lifted states are not orthonormal (max |G - I| = {deviation:.3e}): the term "
                "decompositions of states sharing support are not compatible"
            )
    provenance = dict(basis.provenance)
    provenance["lifts"] = list(provenance.get("lifts", [])) + [d_next]
    return MultipartiteBasis(basis.dims + (d_next,), k, tuple(states), basis.family, provenance)


def permute_parties(basis: MultipartiteBasis, order) -> MultipartiteBasis:
    """New party ``i`` is old party ``order[i]``."""
    order = list(order)
    if sorted(order) != list(range(len(basis.dims))):
        raise InvalidInputError(f"{order} is not a permutation of the parties")
    dims = tuple(basis.dims[p] for p in order)
    states = tuple(
        MultipartiteState(dims, tuple(Term(t.weight, tuple(t.factors[p] for p in order)) for t in s.terms))
        for s in basis.states
    )
    provenance = dict(basis.provenance)
    provenance["party_order"] = order
    return MultipartiteBasis(dims, basis.k, states, basis.family, provenance)


def seed_pair(dims, k: int, family: str):
    """First party pair ``(p, q)``, ``p < q``, able to carry the bipartite seed."""
    for p in range(len(dims)):
        for q in range(p + 1, len(dims)):
            if k > min(dims[p], dims[q]):
                continue
            if family in ("sebk", "meb") and (dims[p] * dims[q]) % k:
                continue
            return (p, q)
    return None


def generate_npartite(dims, k: int, family: str = "ebk", coeffs=None, field: str = "complex") -> MultipartiteBasis:
    dims = tuple(int(x) for x in dims)
    if len(dims) < 2:
        raise InvalidInputError("need at least two parties")
    if any(d < 1 for d in dims):
        raise InvalidInputError("dimensions must be positive")
    if not 1 <= k <= min(dims):
        raise InvalidInputError(f"k={k} must lie in [1, min(dims)={min(dims)}]")
    if family == "meb":
        family = "sebk"
    if k == 1:
        family = "pb"
    pair = seed_pair(dims, k, family)
    if pair is None:
        raise UnsupportedConstructionError(
            f"no party pair of {dims} has a product divisible by {k}; "
            f"an N-partite SEB{k} is not reachable by lifting a bipartite SEB{k}"
        )
    p, q = pair
    seed = construct.generate(construct.ConstructionRequest(dims[p], dims[q], k, family, coeffs, field))
    basis = from_bipartite(seed)
    order = [p, q]
    for party in range(len(dims)):
        if party not in pair:
            basis = lift(basis, dims[party])
            order.append(party)
    basis = permute_parties(basis, [order.index(i) for i in range(len(dims))])
    provenance = dict(basis.provenance)
    provenance["seed_pair"] = [p, q]
    provenance["lift_order"] = order[2:]
    return MultipartiteBasis(dims, k, basis.states, basis.family, provenance)


@dataclass(frozen=True)
class GhzCheck:
    ok: bool
    state: MultipartiteState | None
    reason: str
    first_cut_singular_values: np.ndarray
    ambiguous: bool = False

    def failure(self) -> str | None:
        return None if self.ok else self.reason


def _factor_product(v: np.ndarray, dims, tol: float):
    """Split a unit vector into one factor per party, or return None."""
    factors = []
    rest = v
    for d in dims[:-1]:
        res = numerics.svd(rest.reshape(d, -1))
        sv = res.singular_values
        if sv.size > 1 and sv[1] > tol:
            return None
        factors.append(res.left_vectors[:, 0])
        rest = sv[0] * res.right_vectors[:, 0].conj()
    factors.append(rest)
    return factors


def ghz_check(state, dims, k: int, rank_tol: float = DEFAULT_RANK_TOL, zero_tol: float = ZERO_TOL,
              tol: float = 1e-8) -> GhzCheck:
    """Recover the GHZ-like term form of a dense N-partite state, if it has one.

    The party-1 cut must have rank ``k``. Candidate party-1 vectors come from
    the left singular vectors of the state with parties 3..N contracted
    against a fixed generic vector; this splits degenerate weights. Each
    projected remainder must then be a product over parties 2..N, and the
    per-party vectors must be orthonormal.
    """
    dims = tuple(int(x) for x in dims)
    psi = np.asarray(state, dtype=np.complex128).ravel()
    if psi.size != prod(dims) or len(dims) < 2:
        raise InvalidInputError(f"state of length {psi.size} does not match dims {dims}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise InvalidInputError("state is not normalized")
    sigma = numerics.singular_values(psi.reshape(dims[0], -1))
    rank = int(np.sum(sigma > rank_tol))
    ambiguous = bool(np.any((sigma > zero_tol) & (sigma <= rank_tol)))
    if rank != k:
        return GhzCheck(False, None, f"party-1 Schmidt rank {rank} != {k}", sigma, ambiguous)
    if len(dims) == 2:
        res = numerics.svd(psi.reshape(dims))
        terms = tuple(
            Term(float(res.singular_values[j]), (res.left_vectors[:, j], res.right_vectors[:, j].conj()))
            for j in range(k)
        )
        return GhzCheck(True, MultipartiteState(dims, terms), "ok", sigma, ambiguous)
    rng = np.random.default_rng(GHZ_SEED)
    tail = prod(dims[2:])
    w = rng.standard_normal(tail) + 1j * rng.standard_normal(tail)
    contracted = psi.reshape(dims[0], dims[1], tail) @ w
    party1 = numerics.svd(contracted).left_vectors[:, :k]
    rest = party1.conj().T @ psi.reshape(dims[0], -1)
    residual = psi.reshape(dims[0], -1) - party1 @ rest
    if numerics.max_abs(residual) > tol:
        return GhzCheck(False, None, "right Schmidt vectors not product (party-1 split failed)", sigma, ambiguous)
    terms = []
    for j in range(k):
        weight = float(np.linalg.norm(rest[j]))
        if weight <= rank_tol:
            return GhzCheck(False, None, "right Schmidt vectors not product (vanishing term)", sigma, ambiguous)
        factors = _factor_product(rest[j] / weight, dims[1:], tol)
        if factors is None:
            return GhzCheck(False, None, f"right Schmidt vector {j} not product", sigma, ambiguous)
        terms.append(Term(weight, (party1[:, j],) + tuple(factors)))
    terms.sort(key=lambda t: -t.weight)
    for party in range(len(dims)):
        vecs = np.stack([t.factors[party] for t in terms])
        if numerics.identity_deviation(vecs.conj() @ vecs.T) > tol:
            return GhzCheck(False, None, f"party {party} vectors not orthonormal", sigma, ambiguous)
    weights = np.array([t.weight for t in terms])
    weights = weights / np.linalg.norm(weights)
    terms = [Term(float(wt), t.factors) for wt, t in zip(weights, terms)]
    try:
        result = MultipartiteState(dims, tuple(terms))
    except InvalidInputError as exc:
        return GhzCheck(False, None, str(exc), sigma, ambiguous)
    return GhzCheck(True, result, "ok", sigma, ambiguous)

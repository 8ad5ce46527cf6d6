import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebk.exceptions import InvalidInputError, NormalizationError
from ebk.model import (
    BipartiteState,
    EntangledBasis,
    PositionSequence,
    matrix_to_state,
    schmidt,
    state_to_matrix,
    states_from_vectors,
)
from oracles import inner, schmidt_coefficients

R2 = 1 / np.sqrt(2)


def test_state_is_canonicalised():
    a = BipartiteState(2, 2, ((1, 1, R2), (0, 0, R2), (0, 1, 0.0)))
    b = BipartiteState(2, 2, ((0, 0, R2), (1, 1, R2)))
    assert a == b
    assert a.support() == [(0, 0), (1, 1)]


@pytest.mark.parametrize(
    "amps, err",
    [
        (((2, 0, 1.0),), InvalidInputError),
        (((0, 0, R2), (0, 0, R2)), InvalidInputError),
        (((0, 0, np.nan),), InvalidInputError),
        (((0, 0, 0.5),), NormalizationError),
    ],
)
def test_state_rejects_bad_input(amps, err):
    with pytest.raises(err):
        BipartiteState(2, 2, amps)


def test_vector_round_trip_uses_row_major_index():
    s = BipartiteState(2, 3, ((1, 2, 1.0),))
    v = s.to_vector()
    assert v[1 * 3 + 2] == 1
    assert BipartiteState.from_vector(v, 2, 3) == s
    with pytest.raises(InvalidInputError):
        BipartiteState.from_vector(v, 3, 3)


unit_vectors = st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=6,
                        max_size=6).filter(lambda v: np.linalg.norm(v) > 1e-3).map(
    lambda v: np.asarray(v) / np.linalg.norm(v))


@settings(max_examples=50, deadline=None)
@given(unit_vectors, unit_vectors)
def test_inner_product_is_hilbert_schmidt(u, v):
    a = state_to_matrix(BipartiteState.from_vector(u, 2, 3, norm_tol=1e-10))
    b = state_to_matrix(BipartiteState.from_vector(v, 2, 3, norm_tol=1e-10))
    assert abs(np.trace(a.conj().T @ b) - inner(u, v)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(unit_vectors)
def test_schmidt_coefficients_match_oracle_and_square_to_one(u):
    s = BipartiteState.from_vector(u, 2, 3, norm_tol=1e-10)
    data = schmidt(s)
    assert abs(np.sum(data.coefficients**2) - 1) < 1e-10
    ref = schmidt_coefficients(state_to_matrix(s))
    assert np.allclose(data.coefficients, ref[: data.schmidt_number], atol=1e-9)


def test_schmidt_number_of_product_and_bell():
    assert schmidt(BipartiteState(2, 2, ((0, 1, 1.0),))).schmidt_number == 1
    assert schmidt(BipartiteState(2, 2, ((0, 0, R2), (1, 1, R2)))).schmidt_number == 2


def test_matrix_to_state():
    a = np.array([[R2, 0], [0, R2]])
    s = matrix_to_state(a)
    assert np.allclose(state_to_matrix(s), a)
    with pytest.raises(NormalizationError):
        matrix_to_state(2 * a)


def test_position_sequence_must_be_a_permutation():
    PositionSequence(1, 2, ((0, 1), (0, 0)))
    with pytest.raises(InvalidInputError):
        PositionSequence(1, 2, ((0, 0), (0, 0)))


def test_basis_requires_full_count():
    states = states_from_vectors(np.eye(4), 2, 2)
    b = EntangledBasis((2, 2), 1, tuple(states), "pb")
    assert len(b) == 4 and b[0] == states[0]
    assert b.vectors().shape == (4, 4)
    assert len(b.matrices()) == 4
    with pytest.raises(InvalidInputError):
        EntangledBasis((2, 2), 1, tuple(states[:3]), "pb")

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from ebk.estimator import EntangledBasisTransformer
from ebk.exceptions import InvalidInputError, UnsupportedConstructionError
from ebk.validation import check_dims, check_k, check_state_matrix


def test_params_and_clone():
    t = EntangledBasisTransformer(dims=(3, 4), k=3, family="sebk")
    assert t.get_params() == {"dims": (3, 4), "k": 3, "family": "sebk", "isometry": None, "field": "complex"}
    c = clone(t.set_params(k=2))
    assert c.k == 2 and not hasattr(c, "basis_")


def test_fit_certifies(rng):
    t = EntangledBasisTransformer(dims=(3, 3), k=2).fit()
    assert t.classification_ == "ebk" and t.certified_
    assert np.all(t.schmidt_numbers() == 2)


def test_transform_is_a_unitary_change_of_basis(rng):
    t = EntangledBasisTransformer(dims=(2, 3), k=2, family="sebk")
    x = rng.normal(size=(5, 6)) + 1j * rng.normal(size=(5, 6))
    c = t.fit(x).transform(x)
    assert np.allclose(np.linalg.norm(c, axis=1), np.linalg.norm(x, axis=1))
    assert np.allclose(t.inverse_transform(c), x)


def test_basis_states_map_to_unit_vectors():
    t = EntangledBasisTransformer(dims=(2, 2, 2), k=2, family="sebk").fit()
    c = t.transform(t.components_)
    assert np.allclose(c, np.eye(8), atol=1e-12)


def test_pipeline_composition():
    pipe = make_pipeline(EntangledBasisTransformer(dims=(2, 2), k=2))
    out = pipe.fit_transform(np.eye(4))
    assert out.shape == (4, 4)


def test_errors(rng):
    with pytest.raises(NotFittedError):
        EntangledBasisTransformer().transform(np.eye(4))
    with pytest.raises(InvalidInputError):
        EntangledBasisTransformer(dims=(2, 2), k=2).fit(np.eye(5))
    with pytest.raises(UnsupportedConstructionError):
        EntangledBasisTransformer(dims=(3, 3), k=2, family="sebk").fit()
    t = EntangledBasisTransformer(dims=(2, 2), k=2).fit()
    with pytest.raises(InvalidInputError):
        t.transform(np.ones((2, 3)))


def test_validation_helpers():
    assert check_dims([2, 3]) == (2, 3)
    for bad in ([2], [2, 0], "ab", [2, 2.5]):
        with pytest.raises(InvalidInputError):
            check_dims(bad)
    assert check_k(2, (2, 3)) == 2
    for bad in (0, 3, True, 1.5):
        with pytest.raises(InvalidInputError):
            check_k(bad, (2, 3))
    assert check_state_matrix([1, 0]).shape == (1, 2)
    for bad in (np.ones((2, 2, 2)), [[np.nan]], [["a"]], np.ones((0, 2))):
        with pytest.raises(InvalidInputError):
            check_state_matrix(bad)

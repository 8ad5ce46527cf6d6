import numpy as np
import pytest

import golden
from ebk.construct import ConstructionRequest, generate, product_basis
from ebk.exceptions import InvalidInputError
from ebk.model import BipartiteState, states_from_vectors
from ebk.multipartite import generate_npartite
from ebk.verify import meets, verify_basis, verify_multipartite
from ebk.weyl import meb


def test_eb2_3x3_is_ebk_not_sebk():
    report = verify_basis(states_from_vectors(golden.eb2_3x3(), 3, 3), k=2)
    assert report.classification == "ebk"
    first = report.per_state[0]
    assert np.allclose(first.coefficients, [np.sqrt(3) / 2, 0.5], atol=1e-12)
    # both coefficients miss 1/sqrt(2): by 0.159 and by 0.207
    assert np.isclose(first.max_sebk_deviation, 1 / np.sqrt(2) - 0.5)
    assert np.isclose(abs(np.sqrt(3) / 2 - 1 / np.sqrt(2)), 0.15892, atol=1e-5)


def test_meb_2x2():
    assert verify_basis(meb(2, 2)).classification == "meb"


def test_computational_basis_with_wrong_k():
    report = verify_basis(product_basis(2, 2), k=2)
    assert report.classification == "invalid"
    found = [f for f in report.failures if f["check"] == "schmidt_number"]
    assert len(found) == 4 and all(f["found"] == 1 for f in found)


def test_count_and_gram_failures():
    vecs = meb(2, 2).vectors()
    report = verify_basis(vecs[:3], k=2, dims=(2, 2))
    assert any(f["check"] == "count" for f in report.failures)
    dup = np.vstack([vecs[:3], vecs[:1]])
    report = verify_basis(dup, k=2, dims=(2, 2))
    assert report.failures[0]["check"] == "gram"
    assert report.classification == "invalid"


def test_ambiguous_band_is_reported():
    eps = 1e-9
    v = np.zeros(4)
    v[0], v[3] = np.sqrt(1 - eps**2), eps
    report = verify_basis([v], k=1, dims=(2, 2))
    assert report.per_state[0].ambiguous
    assert any(f["check"] == "ambiguous_rank" for f in report.failures)


def test_loosening_tolerances_never_breaks_a_pass():
    fixtures = [meb(3, 3), generate(ConstructionRequest(3, 5, 2)), states_from_vectors(golden.eb2_3x3(), 3, 3)]
    for basis in fixtures:
        k = getattr(basis, "k", 2)
        strict = verify_basis(basis, k=k)
        loose = verify_basis(basis, k=k, tol_gram=1e-6, tol_sebk=1e-6)
        assert strict.passed and loose.passed


def test_input_errors():
    a = BipartiteState(2, 2, ((0, 0, 1.0),))
    b = BipartiteState(2, 3, ((0, 0, 1.0),))
    with pytest.raises(InvalidInputError):
        verify_basis([a, b], k=1)
    with pytest.raises(InvalidInputError):
        verify_basis(np.eye(4), k=1)
    with pytest.raises(InvalidInputError):
        verify_basis(np.eye(4), k=1, dims=(2, 3))
    with pytest.raises(InvalidInputError):
        verify_basis(np.full((4, 4), np.nan), k=1, dims=(2, 2))


def test_report_is_plain_data():
    import json

    json.dumps(verify_basis(meb(2, 2)).to_dict())
    json.dumps(verify_multipartite(generate_npartite((2, 2, 2), 2)).to_dict())


def test_multipartite_examples():
    assert verify_multipartite(generate_npartite((2, 2, 2), 2, "sebk")).classification == "sebk"
    eye = np.eye(27)
    report = verify_multipartite(eye, k=2, dims=(3, 3, 3))
    assert report.classification == "invalid"
    assert sum(f["check"] == "ghz" for f in report.failures) == 27


def test_multipartite_marginal_ranks():
    report = verify_multipartite(generate_npartite((2, 3, 4), 2))
    assert all(r.marginal_ranks == [2, 2, 2] for r in report.per_state)


def test_meets():
    assert meets("sebk", "ebk") and meets("meb", "sebk") and meets("pb", "sebk")
    assert not meets("ebk", "sebk") and not meets("invalid", "custom")
    assert meets("meb", "meb") and not meets("sebk", "meb")

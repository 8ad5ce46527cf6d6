import json

import numpy as np
import pytest

import golden
from ebk import isometry as iso
from ebk import numerics
from ebk.exceptions import DegenerateCoefficientError, InvalidInputError


@pytest.mark.parametrize("n", range(1, 8))
def test_dft_is_unitary(n):
    x = iso.dft(n)
    assert numerics.identity_deviation(x.entries.conj().T @ x.entries) < 1e-12
    assert np.allclose(np.abs(x.entries), 1 / np.sqrt(n))


def test_dft_entries_exact_on_quarter_turns():
    x = iso.dft(4).entries * 2
    assert x[1, 1] == 1j and x[2, 1] == -1 and x[3, 1] == -1j


@pytest.mark.parametrize("d", range(3, 8))
def test_od_is_orthogonal_and_zero_free(d):
    o = iso.od(d)
    assert o.field == "real"
    assert numerics.identity_deviation(o.entries.T @ o.entries) < 1e-12
    assert iso.no_zero_entries(o)
    assert np.isclose(o.entries[0, 0].real, (2 - d) / d)
    assert np.isclose(o.entries[0, 1].real, 2 / d)
    u = iso.ud(d)
    assert np.allclose(u.entries, 1j * o.entries)


def test_od_two_has_zeros():
    with pytest.raises(DegenerateCoefficientError):
        iso.od(2)


def test_real_defaults():
    assert iso.real_default(1).entries[0, 0] == 1
    r = iso.real_default(2)
    assert iso.no_zero_entries(r) and r.field == "real"
    assert iso.real_default(4).source == "od"


def test_isometry_rejects_non_isometries():
    with pytest.raises(InvalidInputError):
        iso.Isometry(np.ones((2, 2)))
    with pytest.raises(InvalidInputError):
        iso.Isometry(np.eye(2, 3))
    with pytest.raises(InvalidInputError):
        iso.Isometry(1j * np.eye(2), field="real")
    x = iso.Isometry(np.eye(3)[:, :2])
    with pytest.raises(ValueError):
        x.entries[0, 0] = 5


def test_named_sources():
    assert iso.named("dft", 3).source == "dft"
    with pytest.raises(InvalidInputError):
        iso.named("dft", 3, "real")
    with pytest.raises(InvalidInputError):
        iso.named("ud", 3, "real")
    with pytest.raises(InvalidInputError):
        iso.named("bogus", 3)


def test_sign_matrix_passes_for_k3():
    result = iso.theorem3_predicate(golden.SIGN_MATRIX, 3)
    assert result.ok
    assert all(v.exactly_k_equal_moduli for v in result.columns)


@pytest.mark.parametrize("x", [iso.dft(4).entries, np.eye(4)])
def test_dft4_and_identity_fail_for_k3(x):
    assert not iso.theorem3_predicate(x, 3).ok


def test_condition_two_column():
    # head 1/sqrt(2), tail spread over two rows with squared norm 1/2
    c = 1 / np.sqrt(2)
    x = np.array([[c, c, 0], [0.5, -0.5, c], [0.5, -0.5, -c]])
    assert numerics.identity_deviation(x.T @ x) < 1e-12
    result = iso.theorem3_predicate(x, 2)
    assert result.columns[0].equal_head_and_tail_norm
    assert result.columns[2].exactly_k_equal_moduli
    assert result.ok


def test_predicate_invariant_under_column_permutation_and_phase(rng):
    candidates = [golden.SIGN_MATRIX, iso.dft(4).entries, np.eye(4), iso.od(4).entries]
    for _ in range(100):
        x = candidates[rng.integers(len(candidates))]
        perm = rng.permutation(4)
        phases = np.exp(2j * np.pi * rng.random(4))
        y = x[:, perm] * phases
        assert iso.theorem3_predicate(x, 3).ok == iso.theorem3_predicate(y, 3).ok


def test_predicate_size_check():
    with pytest.raises(InvalidInputError):
        iso.theorem3_predicate(np.eye(3), 3)
    with pytest.raises(InvalidInputError):
        iso.theorem3_predicate(np.eye(6), 3)


def test_matrix_file_round_trip(tmp_path):
    x = iso.dft(3).entries
    path = tmp_path / "x.json"
    path.write_text(json.dumps(iso.matrix_to_json(x)))
    loaded = iso.load(path)
    assert np.array_equal(loaded.entries, x)
    assert loaded.source == "file"


@pytest.mark.parametrize(
    "doc",
    [
        {"rows": 2, "cols": 2, "entries": [[1, 0]]},
        {"rows": 2, "cols": 2},
        {"rows": 1, "cols": 1, "entries": [["a", 0]]},
        {"rows": 1, "cols": 1, "entries": [[2, 0]]},
    ],
)
def test_bad_matrix_files(tmp_path, doc):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidInputError):
        iso.load(path)


def test_missing_matrix_file(tmp_path):
    with pytest.raises(InvalidInputError):
        iso.load(tmp_path / "absent.json")

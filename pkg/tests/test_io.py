import json

import numpy as np
import pytest

from ebk import io
from ebk.construct import ConstructionRequest, generate
from ebk.exceptions import InvalidInputError
from ebk.multipartite import generate_npartite
from ebk.verify import verify_basis, verify_multipartite


def test_bipartite_round_trip(tmp_path):
    basis = generate(ConstructionRequest(3, 5, 2))
    path = tmp_path / "b.json"
    io.save(basis, path)
    loaded = io.load(path)
    assert loaded.kind == "bipartite" and loaded.dims == (3, 5) and loaded.k == 2
    assert np.array_equal(loaded.vectors, basis.vectors())
    again = loaded.to_entangled_basis()
    assert verify_basis(again).classification == verify_basis(basis).classification


def test_multipartite_round_trip(tmp_path):
    basis = generate_npartite((2, 2, 3), 2, "sebk")
    path = tmp_path / "m.json"
    io.save(basis, path)
    loaded = io.load(path)
    assert np.array_equal(loaded.vectors, basis.tensors())
    assert verify_multipartite(loaded.vectors, loaded.k, dims=loaded.dims).classification == "sebk"
    with pytest.raises(InvalidInputError):
        loaded.to_entangled_basis()


def test_output_is_deterministic_and_tagged():
    a = io.dumps(generate(ConstructionRequest(4, 6, 3, "sebk")))
    b = io.dumps(generate(ConstructionRequest(4, 6, 3, "sebk")))
    assert a == b
    doc = json.loads(a)
    assert doc["format_version"] == "1"
    assert doc["provenance"]["tool"] == io.TOOL_VERSION
    amp = doc["states"][0]["amplitudes"][0]
    assert set(amp) == {"indices", "re", "im"}


def test_floats_round_trip_exactly():
    basis = generate(ConstructionRequest(3, 3, 3, "sebk"))
    loaded = io.loads(io.dumps(basis))
    assert np.array_equal(loaded.vectors, basis.vectors())


def test_dense_vector_input():
    v = np.eye(4)
    doc = {
        "format_version": "1",
        "kind": "bipartite",
        "dims": [2, 2],
        "k": 1,
        "family": "custom",
        "states": [{"index": i, "vector": [[x, 0.0] for x in row]} for i, row in enumerate(v)],
    }
    loaded = io.from_dict(doc)
    assert np.array_equal(loaded.vectors, v)


def base_doc():
    return json.loads(io.dumps(generate(ConstructionRequest(2, 2, 2))))


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.update(format_version="2"), "format_version"),
        (lambda d: d.pop("states"), "states"),
        (lambda d: d.update(kind="multipartite"), "kind"),
        (lambda d: d["states"][0]["amplitudes"][0].update(indices=[5, 0]), "outside"),
        (lambda d: d["states"][0]["amplitudes"][0].update(re=3.0), "norm"),
        (lambda d: d["states"][1].update(index=0), "indices"),
        (lambda d: d["states"][0]["amplitudes"].append(dict(d["states"][0]["amplitudes"][0])), "duplicate"),
        (lambda d: d.update(family="weird"), "family"),
        (lambda d: d["states"][0].update(vector=[[1, 0]]), "states/0"),
    ],
)
def test_malformed_documents(mutate, message):
    doc = base_doc()
    mutate(doc)
    with pytest.raises(InvalidInputError, match=message):
        io.from_dict(doc)


def test_unreadable_inputs(tmp_path):
    with pytest.raises(InvalidInputError):
        io.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_bytes(b"\xff\xfe")
    with pytest.raises(InvalidInputError):
        io.load(bad)
    with pytest.raises(InvalidInputError):
        io.loads("{")
    with pytest.raises(InvalidInputError):
        io.loads("[" * 100000)


def test_serialise_rejects_unknown_objects():
    with pytest.raises(InvalidInputError):
        io.basis_to_dict([1, 2])

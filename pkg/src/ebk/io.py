"""JSON persistence for bases.

States are written sparsely as ``{indices, re, im}`` records, one index per
party. On input a state may instead carry a dense ``vector`` of ``[re, im]``
pairs (party 1 most significant), which is how foreign bases get verified.
Output is byte-deterministic: no timestamps, fixed key order, shortest
round-trip float formatting.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from pathlib import Path

import jsonschema
import numpy as np

from .exceptions import InvalidInputError
from .model import FAMILIES, BipartiteState, EntangledBasis
from .multipartite import MultipartiteBasis

FORMAT_VERSION = "1"
TOOL_VERSION = "ebk 0.1.0"
LOAD_NORM_TOL = 1e-10
MAX_AMPLITUDES = 1 << 22

_AMPLITUDE = {
    "type": "object",
    "required": ["indices", "re", "im"],
    "properties": {
        "indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "re": {"type": "number"},
        "im": {"type": "number"},
    },
    "additionalProperties": False,
}

BASIS_SCHEMA = {
    "type": "object",
    "required": ["format_version", "kind", "dims", "k", "family", "states"],
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "kind": {"enum": ["bipartite", "multipartite"]},
        "dims": {"type": "array", "minItems": 2, "items": {"type": "integer", "minimum": 1}},
        "k": {"type": "integer", "minimum": 1},
        "family": {"enum": list(FAMILIES)},
        "states": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index"],
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "amplitudes": {"type": "array", "items": _AMPLITUDE},
                    "vector": {
                        "type": "array",
                        "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}},
                    },
                },
                "oneOf": [{"required": ["amplitudes"]}, {"required": ["vector"]}],
                "additionalProperties": False,
            },
        },
        "provenance": {"type": "object"},
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class LoadedBasis:
    """A basis read from disk: dense amplitude vectors plus the file metadata."""

    kind: str
    dims: tuple
    k: int
    family: str
    vectors: np.ndarray
    provenance: dict = field(default_factory=dict)

    def to_entangled_basis(self) -> EntangledBasis:
        if self.kind != "bipartite":
            raise InvalidInputError("only bipartite files convert to an EntangledBasis")
        d, dprime = self.dims
        states = tuple(BipartiteState.from_vector(v, d, dprime, norm_tol=LOAD_NORM_TOL) for v in self.vectors)
        return EntangledBasis((d, dprime), self.k, states, self.family, self.provenance)


def _plain(obj):
    """Recursively convert numpy scalars and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def _sparse(vector: np.ndarray, dims) -> list:
    out = []
    for flat in np.flatnonzero(vector):
        z = complex(vector[flat])
        out.append({"indices": [int(i) for i in np.unravel_index(flat, dims)], "re": z.real, "im": z.imag})
    return out


def basis_to_dict(basis) -> dict:
    """Serialise an EntangledBasis or MultipartiteBasis."""
    if isinstance(basis, EntangledBasis):
        kind = "bipartite"
        vectors = basis.vectors()
    elif isinstance(basis, MultipartiteBasis):
        kind = "multipartite"
        vectors = basis.tensors()
    else:
        raise InvalidInputError(f"cannot serialise {type(basis).__name__}")
    dims = tuple(basis.dims)
    provenance = dict(_plain(basis.provenance))
    provenance["tool"] = TOOL_VERSION
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "dims": list(dims),
        "k": int(basis.k),
        "family": basis.family,
        "states": [{"index": i, "amplitudes": _sparse(v, dims)} for i, v in enumerate(vectors)],
        "provenance": provenance,
    }


def dumps(basis) -> str:
    return json.dumps(basis_to_dict(basis), indent=1, allow_nan=False) + "\n"


def save(basis, path) -> None:
    Path(path).write_bytes(dumps(basis).encode("utf-8"))


def _dense(state: dict, dims: tuple) -> np.ndarray:
    size = prod(dims)
    v = np.zeros(size, dtype=np.complex128)
    if "vector" in state:
        raw = state["vector"]
        if len(raw) != size:
            raise InvalidInputError(f"state {state['index']}: dense vector has {len(raw)} entries, expected {size}")
        return np.array([complex(re, im) for re, im in raw], dtype=np.complex128)
    for amp in state["amplitudes"]:
        idx = [int(i) for i in amp["indices"]]
        if len(idx) != len(dims) or any(i >= d for i, d in zip(idx, dims)):
            raise InvalidInputError(f"state {state['index']}: indices {idx} outside dims {list(dims)}")
        flat = int(np.ravel_multi_index(idx, dims))
        if v[flat] != 0:
            raise InvalidInputError(f"state {state['index']}: duplicate amplitude at {idx}")
        v[flat] = complex(amp["re"], amp["im"])
    return v


def from_dict(doc) -> LoadedBasis:
    try:
        jsonschema.validate(doc, BASIS_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidInputError(f"invalid basis file at {where}: {exc.message}") from exc
    dims = tuple(int(x) for x in doc["dims"])
    if prod(dims) * max(len(doc["states"]), 1) > MAX_AMPLITUDES:
        raise InvalidInputError(f"dims {list(dims)} are too large to load densely")
    if (doc["kind"] == "bipartite") != (len(dims) == 2):
        raise InvalidInputError(f"kind {doc['kind']!r} does not match {len(dims)} parties")
    states = doc["states"]
    if sorted(int(s["index"]) for s in states) != list(range(len(states))):
        raise InvalidInputError("state indices must be 0..n-1 without gaps")
    vectors = np.zeros((len(states), prod(dims)), dtype=np.complex128)
    for s in states:
        try:
            v = _dense(s, dims)
        except OverflowError as exc:
            raise InvalidInputError(f"state {s['index']}: amplitude out of range") from exc
        if not np.all(np.isfinite(v)):
            raise InvalidInputError(f"state {s['index']}: non-finite amplitude")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > LOAD_NORM_TOL:
            raise InvalidInputError(f"state {s['index']}: norm {norm!r} is not 1")
        vectors[int(s["index"])] = v
    return LoadedBasis(doc["kind"], dims, int(doc["k"]), doc["family"], vectors, doc.get("provenance", {}))


def loads(text: str) -> LoadedBasis:
    try:
        doc = json.loads(text)
    except (ValueError, RecursionError) as exc:
        raise InvalidInputError(f"not valid JSON: {exc}") from exc
    return from_dict(doc)


def load(path) -> LoadedBasis:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidInputError(f"{path} is not UTF-8 text") from exc
    return loads(text)

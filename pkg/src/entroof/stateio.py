"""JSON state files.

Schema::

    {"dims": [dA, dB], "kind": "pure",  "vector": [[re, im], ...]}
    {"dims": [dA, dB], "kind": "mixed", "matrix": [[[re, im], ...], ...]}

Tripartite pure states (for the monogamy command) carry three dims.  An
optional "comment" field records provenance.  Parsers reject data that
violates a state invariant, naming the invariant and its magnitude.
"""

from __future__ import annotations

import json

import numpy as np

from .states import DensityMatrix, PureState, StateValidationError, TripartiteState


class StateFileError(ValueError):
    """Malformed or invariant-violating state file."""


def _complex_from_pairs(pairs, what):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise StateFileError(f"{what} entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _pairs_from_complex(arr):
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def state_to_dict(state, comment: str = None) -> dict:
    if isinstance(state, PureState):
        doc = {
            "dims": [state.dim_a, state.dim_b],
            "kind": "pure",
            "vector": _pairs_from_complex(state.amplitudes),
        }
    elif isinstance(state, TripartiteState):
        doc = {
            "dims": list(state.dims),
            "kind": "pure",
            "vector": _pairs_from_complex(state.amplitudes),
        }
    elif isinstance(state, DensityMatrix):
        doc = {
            "dims": [state.dim_a, state.dim_b],
            "kind": "mixed",
            "matrix": _pairs_from_complex(state.matrix),
        }
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    if comment:
        doc["comment"] = comment
    return doc


def state_from_dict(doc: dict):
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object")
    for key in ("dims", "kind"):
        if key not in doc:
            raise StateFileError(f"state document missing required field {key!r}")
    dims = doc["dims"]
    if not isinstance(dims, list) or len(dims) not in (2, 3) or any(
        not isinstance(d, int) or d < 1 for d in dims
    ):
        raise StateFileError("dims must be a list of 2 or 3 positive integers")
    kind = doc["kind"]
    try:
        if kind == "pure":
            if "vector" not in doc:
                raise StateFileError("pure state document missing 'vector'")
            vec = _complex_from_pairs(doc["vector"], "vector")
            if len(dims) == 3:
                return TripartiteState(tuple(dims), vec)
            return PureState(dims[0], dims[1], vec)
        if kind == "mixed":
            if len(dims) != 3:
                if "matrix" not in doc:
                    raise StateFileError("mixed state document missing 'matrix'")
                mat = _complex_from_pairs(doc["matrix"], "matrix")
                return DensityMatrix(dims[0], dims[1], mat)
            raise StateFileError("mixed tripartite states are not supported")
        raise StateFileError(f"unknown state kind {kind!r}")
    except StateValidationError as exc:
        raise StateFileError(f"state violates an invariant: {exc}") from exc


def load_state(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise StateFileError(f"state file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise StateFileError(f"state file {path} is not valid JSON: {exc}") from exc
    return state_from_dict(doc)


def save_state(path, state, comment: str = None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state, comment), fh)
        fh.write("\n")

"""JSON state files: ``{"dims": [...], "rho_re": [[...]], "rho_im": [[...]]}``.

Floats are written with Python's shortest round-trip representation, so a
save/load cycle reproduces the matrix bit for bit.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .states import DensityMatrix, StateError

__all__ = ["state_to_dict", "state_from_dict", "save_state", "load_state"]


def state_to_dict(rho: DensityMatrix) -> dict:
    m = rho.matrix
    return {
        "dims": list(rho.dims),
        "rho_re": [[float(x) for x in row] for row in m.real],
        "rho_im": [[float(x) for x in row] for row in m.imag],
    }


def state_from_dict(data: dict, validate: bool = True) -> DensityMatrix:
    try:
        dims = tuple(int(d) for d in data["dims"])
        re = np.array(data["rho_re"], dtype=float)
        im = np.array(data["rho_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"malformed state file: {exc}") from exc
    if re.shape != im.shape:
        raise StateError("rho_re and rho_im have different shapes")
    rho = DensityMatrix(re + 1j * im, dims)
    return rho.validate() if validate else rho


def save_state(rho: DensityMatrix, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho), indent=1) + "\n")


def load_state(path, validate: bool = True) -> DensityMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateError(f"not valid JSON ({exc})") from exc
    return state_from_dict(data, validate)

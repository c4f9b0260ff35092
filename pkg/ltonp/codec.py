"""
JSON encoding of matrices, problems, parameters, systems and Leech data.

A matrix is a row-major nested list; entries are [re, im] pairs or bare
real numbers on input and always [re, im] pairs on output.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import InvalidProblem
from .fronts import CommutantLiftingInstance, LeechInstance
from .kernel import as_matrix
from .problem import ProblemData
from .systems import RationalSystem, SchurParameter

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def encode_matrix(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _entry(value, name: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidProblem(f"{name}: complex entries are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise InvalidProblem(f"{name}: unsupported entry {value!r}")


def decode_matrix(data, name: str = "matrix") -> np.ndarray:
    if not isinstance(data, list):
        return as_matrix(_entry(data, name), name)
    if not data:
        return np.zeros((0, 0), dtype=complex)
    if not all(isinstance(row, list) for row in data):
        raise InvalidProblem(f"{name} must be a list of rows")
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise InvalidProblem(f"{name} has ragged rows")
    if widths == {0}:
        return np.zeros((len(data), 0), dtype=complex)
    return as_matrix([[_entry(v, name) for v in row] for row in data], name)


def _require(data: dict, keys, what: str):
    if not isinstance(data, dict):
        raise InvalidProblem(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise InvalidProblem(f"{what} is missing {missing}")


def problem_from_dict(data: dict) -> ProblemData:
    _require(data, ("Z", "B", "Btilde"), "problem")
    return ProblemData(Z=decode_matrix(data["Z"], "Z"), B=decode_matrix(data["B"], "B"),
                       Btilde=decode_matrix(data["Btilde"], "Btilde"))


def problem_to_dict(prob: ProblemData) -> dict:
    return {"Z": encode_matrix(prob.Z), "B": encode_matrix(prob.B), "Btilde": encode_matrix(prob.Btilde)}


def lifting_from_dict(data: dict) -> CommutantLiftingInstance:
    _require(data, ("Z", "B", "Btilde"), "lifting instance")
    return CommutantLiftingInstance(Z=decode_matrix(data["Z"], "Z"), B=decode_matrix(data["B"], "B"),
                                    Btilde=decode_matrix(data["Btilde"], "Btilde"))


def system_from_dict(data: dict) -> RationalSystem:
    _require(data, ("delta",), "system")
    delta = decode_matrix(data["delta"], "delta")
    if not data.get("alpha"):
        return RationalSystem.constant(delta)
    return RationalSystem(alpha=decode_matrix(data["alpha"], "alpha"),
                          beta=decode_matrix(data["beta"], "beta"),
                          gamma=decode_matrix(data["gamma"], "gamma"), delta=delta)


def system_to_dict(system: RationalSystem) -> dict:
    return {
        "alpha": encode_matrix(system.alpha),
        "beta": encode_matrix(system.beta),
        "gamma": encode_matrix(system.gamma),
        "delta": encode_matrix(system.delta),
        "spectral_radius_alpha": system.spectral_radius_alpha,
        "contractive_system_matrix": system.contractive_system_matrix,
    }


def parameter_from_dict(data: dict) -> SchurParameter:
    if isinstance(data, dict) and "constant" in data:
        return SchurParameter.constant(decode_matrix(data["constant"], "constant"))
    if isinstance(data, dict) and "system" in data:
        return SchurParameter.dynamic(system_from_dict(data["system"]))
    raise InvalidProblem('parameter must be {"constant": M} or {"system": {...}}')


def leech_from_dict(data: dict) -> LeechInstance:
    _require(data, ("G", "K", "N"), "Leech instance")
    return LeechInstance(G_coeffs=[decode_matrix(g, "G") for g in data["G"]],
                         K_coeffs=[decode_matrix(k, "K") for k in data["K"]],
                         N=int(data["N"]))


def read_json(path: PathLike):
    with open(path) as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidProblem(f"{path}: {exc}") from exc


def write_json(data, path: Optional[PathLike] = None):
    """Write to `path`, or to stdout when no path is given"""
    text = json.dumps(data, indent=2)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    Path(path).write_text(text + "\n")
    logger.debug("wrote %s", path)

"""Scenario files: JSON descriptions of a circuit plus study settings.

A scenario pins everything a command-line run needs: dimension,
generators, initial state, true and guessed parameters, transmissivity,
and optional weight matrix, quasiprobability pair, POVM, trial count and
seed. Complex numbers are stored as [re, im] pairs; parse errors name
the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import EncodingCircuit
from .errors import ValidationError

_REQUIRED_KEYS = ("dim", "generators", "initial_state", "theta_true", "theta_guess", "t")
_OPTIONAL_KEYS = ("weight", "kd_pair", "povm", "trials", "seed")


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Parsed scenario. Optional fields are None when absent."""

    dim: int
    generators: tuple[np.ndarray, ...]
    initial_state: np.ndarray
    theta_true: np.ndarray
    theta_guess: np.ndarray
    t: float
    weight: np.ndarray | None = None
    kd_pair: tuple[int, int] | None = None
    povm: tuple[np.ndarray, ...] | None = None
    trials: int | None = None
    seed: int | None = None

    @property
    def n_params(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScenarioConfig):
            return NotImplemented

        def arrays_equal(a, b):
            if a is None or b is None:
                return a is None and b is None
            if isinstance(a, tuple):
                return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))
            return np.array_equal(a, b)

        return (
            self.dim == other.dim
            and self.t == other.t
            and self.kd_pair == other.kd_pair
            and self.trials == other.trials
            and self.seed == other.seed
            and arrays_equal(self.generators, other.generators)
            and arrays_equal(self.initial_state, other.initial_state)
            and arrays_equal(self.theta_true, other.theta_true)
            and arrays_equal(self.theta_guess, other.theta_guess)
            and arrays_equal(self.weight, other.weight)
            and arrays_equal(self.povm, other.povm)
        )


def _fail(path: str, message: str):
    raise ValidationError(f"{path}: {message}")


def _int_from_json(value, path: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if value < minimum:
        _fail(path, f"must be >= {minimum}, got {value}")
    return value


def _float_from_json(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    return float(value)


def _complex_from_json(value, path: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        _fail(path, f"complex entries must be [re, im] pairs, got {value!r}")
    return complex(_float_from_json(value[0], path + "[0]"), _float_from_json(value[1], path + "[1]"))


def _complex_vector_from_json(rows, path: str, length: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != length:
        _fail(path, f"expected a list of {length} [re, im] pairs")
    return np.array([_complex_from_json(v, f"{path}[{k}]") for k, v in enumerate(rows)])


def _complex_matrix_from_json(rows, path: str, dim: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        _fail(path, f"expected a {dim}x{dim} matrix as nested lists")
    return np.array(
        [_complex_vector_from_json(row, f"{path}[{r}]", dim) for r, row in enumerate(rows)]
    )


def _real_vector_from_json(rows, path: str, length: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != length:
        _fail(path, f"expected a list of {length} numbers")
    return np.array([_float_from_json(v, f"{path}[{k}]") for k, v in enumerate(rows)])


def scenario_from_dict(data) -> ScenarioConfig:
    """Build and structurally validate a scenario from parsed JSON."""
    if not isinstance(data, dict):
        raise ValidationError(f"scenario must be a JSON object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise ValidationError(f"unknown scenario keys: {', '.join(unknown)}")
    missing = [key for key in _REQUIRED_KEYS if key not in data]
    if missing:
        raise ValidationError(f"missing scenario keys: {', '.join(missing)}")

    dim = _int_from_json(data["dim"], "dim", minimum=1)
    raw_generators = data["generators"]
    if not isinstance(raw_generators, list) or not raw_generators:
        _fail("generators", "expected a nonempty list of matrices")
    generators = tuple(
        _complex_matrix_from_json(g, f"generators[{m}]", dim) for m, g in enumerate(raw_generators)
    )
    n_params = len(generators)
    initial_state = _complex_vector_from_json(data["initial_state"], "initial_state", dim)
    theta_true = _real_vector_from_json(data["theta_true"], "theta_true", n_params)
    theta_guess = _real_vector_from_json(data["theta_guess"], "theta_guess", n_params)
    t = _float_from_json(data["t"], "t")
    if not 0.0 < t <= 1.0:
        _fail("t", f"must lie in (0, 1], got {t}")

    weight = None
    if data.get("weight") is not None:
        raw_weight = data["weight"]
        if not isinstance(raw_weight, list) or len(raw_weight) != n_params:
            _fail("weight", f"expected a {n_params}x{n_params} matrix of numbers")
        weight = np.array(
            [
                _real_vector_from_json(row, f"weight[{r}]", n_params)
                for r, row in enumerate(raw_weight)
            ]
        )

    kd_pair = None
    if data.get("kd_pair") is not None:
        raw_pair = data["kd_pair"]
        if not isinstance(raw_pair, list) or len(raw_pair) != 2:
            _fail("kd_pair", f"expected two parameter indices, got {raw_pair!r}")
        kd_pair = tuple(
            _int_from_json(v, f"kd_pair[{k}]", minimum=0) for k, v in enumerate(raw_pair)
        )
        for k, index in enumerate(kd_pair):
            if index >= n_params:
                _fail(f"kd_pair[{k}]", f"index {index} out of range [0, {n_params})")

    povm = None
    if data.get("povm") is not None:
        raw_povm = data["povm"]
        if not isinstance(raw_povm, list) or not raw_povm:
            _fail("povm", "expected a nonempty list of matrices")
        povm = tuple(
            _complex_matrix_from_json(e, f"povm[{k}]", dim) for k, e in enumerate(raw_povm)
        )

    trials = None if data.get("trials") is None else _int_from_json(data["trials"], "trials", 1)
    seed = None if data.get("seed") is None else _int_from_json(data["seed"], "seed", 0)

    return ScenarioConfig(
        dim=dim,
        generators=generators,
        initial_state=initial_state,
        theta_true=theta_true,
        theta_guess=theta_guess,
        t=t,
        weight=weight,
        kd_pair=kd_pair,
        povm=povm,
        trials=trials,
        seed=seed,
    )


def _complex_matrix_to_json(matrix) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(matrix, dtype=complex)]


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Serialize a scenario to a JSON-ready dict, omitting absent options."""
    data = {
        "dim": int(config.dim),
        "generators": [_complex_matrix_to_json(g) for g in config.generators],
        "initial_state": [
            [float(v.real), float(v.imag)] for v in np.asarray(config.initial_state, dtype=complex)
        ],
        "theta_true": [float(v) for v in config.theta_true],
        "theta_guess": [float(v) for v in config.theta_guess],
        "t": float(config.t),
    }
    if config.weight is not None:
        data["weight"] = [[float(v) for v in row] for row in config.weight]
    if config.kd_pair is not None:
        data["kd_pair"] = [int(config.kd_pair[0]), int(config.kd_pair[1])]
    if config.povm is not None:
        data["povm"] = [_complex_matrix_to_json(e) for e in config.povm]
    if config.trials is not None:
        data["trials"] = int(config.trials)
    if config.seed is not None:
        data["seed"] = int(config.seed)
    return data


def load_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario JSON file.

    Missing files and malformed JSON raise the underlying errors so
    callers can map them to exit codes; schema problems raise
    ValidationError with the field path.
    """
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return scenario_from_dict(data)


def save_scenario(config: ScenarioConfig, path) -> None:
    """Write a scenario as indented JSON with a trailing newline."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(scenario_to_dict(config), handle, indent=2)
        handle.write("\n")


def build_circuit(config: ScenarioConfig) -> EncodingCircuit:
    """Instantiate the encoding circuit, running the deep numeric checks."""
    return EncodingCircuit(config.generators, config.initial_state)

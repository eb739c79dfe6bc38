import json
import math
from pathlib import Path

import numpy as np
import pytest

from qfisher import (
    ScenarioConfig,
    ValidationError,
    build_circuit,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

from helpers import SIGMA_X, SIGMA_Z, sic_povm

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def minimal_config():
    return ScenarioConfig(
        dim=2,
        generators=(SIGMA_X, (SIGMA_X + SIGMA_Z) / math.sqrt(2.0)),
        initial_state=np.array([1.0, 0.0], dtype=complex),
        theta_true=np.array([0.3, 0.7]),
        theta_guess=np.array([0.35, 0.65]),
        t=0.5,
    )


def full_config():
    return ScenarioConfig(
        dim=2,
        generators=(SIGMA_X, (SIGMA_X + SIGMA_Z) / math.sqrt(2.0)),
        initial_state=np.array([1.0, 0.0], dtype=complex),
        theta_true=np.array([0.3, 0.7]),
        theta_guess=np.array([0.35, 0.65]),
        t=0.5,
        weight=np.eye(2),
        kd_pair=(0, 1),
        povm=sic_povm(),
        trials=500,
        seed=11,
    )


def test_round_trip_through_dict():
    for config in (minimal_config(), full_config()):
        rebuilt = scenario_from_dict(scenario_to_dict(config))
        assert rebuilt == config


def test_round_trip_through_file(tmp_path):
    path = tmp_path / "scenario.json"
    config = full_config()
    save_scenario(config, path)
    assert load_scenario(path) == config
    # file is genuine JSON with [re, im] encoded complex entries
    raw = json.loads(path.read_text())
    assert raw["generators"][0][0][1] == [1.0, 0.0]


def test_optional_fields_default_to_none():
    data = scenario_to_dict(minimal_config())
    config = scenario_from_dict(data)
    assert config.weight is None
    assert config.kd_pair is None
    assert config.povm is None
    assert config.trials is None
    assert config.seed is None


def test_unknown_key_rejected():
    data = scenario_to_dict(minimal_config())
    data["typo_field"] = 1
    with pytest.raises(ValidationError, match="typo_field"):
        scenario_from_dict(data)


def test_missing_key_rejected():
    data = scenario_to_dict(minimal_config())
    del data["theta_true"]
    with pytest.raises(ValidationError, match="theta_true"):
        scenario_from_dict(data)


def test_field_path_in_error_messages():
    data = scenario_to_dict(minimal_config())
    data["generators"][1][0][1] = [1.0]  # not an [re, im] pair
    with pytest.raises(ValidationError, match=r"generators\[1\]\[0\]\[1\]"):
        scenario_from_dict(data)
    data = scenario_to_dict(minimal_config())
    data["theta_guess"] = [0.1]
    with pytest.raises(ValidationError, match="theta_guess"):
        scenario_from_dict(data)


def test_t_range_and_kd_pair_range():
    data = scenario_to_dict(minimal_config())
    data["t"] = 0.0
    with pytest.raises(ValidationError, match="t"):
        scenario_from_dict(data)
    data = scenario_to_dict(minimal_config())
    data["kd_pair"] = [0, 2]
    with pytest.raises(ValidationError, match=r"kd_pair\[1\]"):
        scenario_from_dict(data)


def test_load_errors_pass_through(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_scenario(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(json.JSONDecodeError):
        load_scenario(bad)


def test_equality_detects_array_changes():
    base = minimal_config()
    other = ScenarioConfig(
        dim=base.dim,
        generators=base.generators,
        initial_state=base.initial_state,
        theta_true=np.array([0.3, 0.7001]),
        theta_guess=base.theta_guess,
        t=base.t,
    )
    assert base != other
    assert base != "not a scenario"


def test_shipped_scenarios_load_and_build():
    names = ("reference_qubit.json", "commuting_classical.json", "single_parameter_crb.json")
    for name in names:
        config = load_scenario(SCENARIO_DIR / name)
        circuit = build_circuit(config)
        assert circuit.dim == config.dim
        assert circuit.n_params == config.n_params


def test_shipped_reference_scenario_contents():
    config = load_scenario(SCENARIO_DIR / "reference_qubit.json")
    assert config.kd_pair == (0, 1)
    assert config.trials == 10000
    assert config.t == pytest.approx(1.0 / math.sqrt(10.0))
    assert np.allclose(config.theta_true, [math.pi / 4.0, math.pi / 4.0])
    assert np.allclose(config.theta_guess - config.theta_true, [0.1, -0.1])

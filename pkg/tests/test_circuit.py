import math

import numpy as np
import pytest

from qfisher import (
    EncodingCircuit,
    NumericError,
    ValidationError,
    derivative_state,
    evolve,
    finite_difference_state,
    spectral_gap,
    tangent_frame,
    tilde_generator,
)

from helpers import SIGMA_X, SIGMA_Y, SIGMA_Z, closed_qubit_state, random_circuit, reference_circuit


def test_rejects_non_hermitian_generator():
    with pytest.raises(ValidationError):
        EncodingCircuit((np.array([[0.0, 1.0], [0.0, 0.0]]),), np.array([1.0, 0.0]))


def test_rejects_mismatched_generator_dims():
    with pytest.raises(ValidationError):
        EncodingCircuit((SIGMA_X, np.eye(3)), np.array([1.0, 0.0]))


def test_rejects_empty_generator_list():
    with pytest.raises(ValidationError):
        EncodingCircuit((), np.array([1.0, 0.0]))


def test_rejects_unnormalized_state():
    with pytest.raises(ValidationError, match="normalized"):
        EncodingCircuit((SIGMA_X,), np.array([1.0, 1.0]))


def test_stored_arrays_are_write_locked_copies():
    state = np.array([1.0, 0.0], dtype=complex)
    circuit = EncodingCircuit((SIGMA_X.copy(),), state)
    with pytest.raises(ValueError):
        circuit.initial_state[0] = 5.0
    # the caller's own array stays writable
    state[0] = 3.0


def test_evolve_single_generator_closed_form():
    circuit = EncodingCircuit((SIGMA_X,), np.array([1.0, 0.0], dtype=complex))
    out = evolve(circuit, [0.7])
    expected = np.array([math.cos(0.7), 1j * math.sin(0.7)])
    assert np.max(np.abs(out - expected)) < 1e-14


def test_evolve_matches_half_turn_product():
    circuit = reference_circuit()
    for theta in ([0.3, 1.1], [0.0, 0.0], [math.pi / 4, math.pi / 4], [-0.8, 2.4]):
        out = evolve(circuit, theta)
        assert np.max(np.abs(out - closed_qubit_state(theta))) < 1e-13


def test_evolve_applies_first_generator_first():
    # order matters: exp(i b B) exp(i a A) psi, not the reverse
    circuit = EncodingCircuit((SIGMA_X, SIGMA_Z), np.array([1.0, 0.0], dtype=complex))
    a, b = 0.4, 0.9
    eye = np.eye(2)
    ua = math.cos(a) * eye + 1j * math.sin(a) * SIGMA_X
    ub = math.cos(b) * eye + 1j * math.sin(b) * SIGMA_Z
    expected = ub @ ua @ np.array([1.0, 0.0])
    assert np.max(np.abs(evolve(circuit, [a, b]) - expected)) < 1e-13
    wrong = ua @ ub @ np.array([1.0, 0.0])
    assert np.max(np.abs(evolve(circuit, [a, b]) - wrong)) > 0.1


def test_evolve_rejects_bad_theta():
    circuit = EncodingCircuit((SIGMA_X,), np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ValidationError):
        evolve(circuit, [0.1, 0.2])
    with pytest.raises(ValidationError):
        evolve(circuit, [np.nan])


def test_tilde_generator_conjugation_known_case():
    # conjugating sigma_x by exp(i pi/4 sigma_z) rotates it onto -sigma_y
    circuit = EncodingCircuit((SIGMA_X, SIGMA_Z), np.array([1.0, 0.0], dtype=complex))
    tilde = tilde_generator(circuit, [0.3, math.pi / 4], 0)
    assert np.max(np.abs(tilde + SIGMA_Y)) < 1e-12
    # the last parameter's generator is never conjugated
    assert np.max(np.abs(tilde_generator(circuit, [0.3, math.pi / 4], 1) - SIGMA_Z)) < 1e-14


def test_tilde_generator_preserves_spectrum():
    rng = np.random.default_rng(11)
    for _ in range(10):
        circuit = random_circuit(rng)
        theta = rng.uniform(-1.5, 1.5, circuit.n_params)
        m = int(rng.integers(0, circuit.n_params))
        tilde = tilde_generator(circuit, theta, m)
        original = np.linalg.eigvalsh(circuit.generators[m])
        assert np.max(np.abs(np.linalg.eigvalsh(tilde) - original)) < 1e-10


def test_index_validation():
    circuit = EncodingCircuit((SIGMA_X,), np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ValidationError):
        tilde_generator(circuit, [0.1], 1)
    with pytest.raises(ValidationError):
        tilde_generator(circuit, [0.1], -1)
    with pytest.raises(ValidationError):
        tilde_generator(circuit, [0.1], True)


def test_derivative_state_matches_finite_difference():
    rng = np.random.default_rng(21)
    for _ in range(15):
        circuit = random_circuit(rng)
        theta = rng.uniform(-1.5, 1.5, circuit.n_params)
        for j in range(circuit.n_params):
            analytic = derivative_state(circuit, theta, j)
            numeric = finite_difference_state(circuit, theta, j)
            assert np.max(np.abs(analytic - numeric)) < 1e-7


def test_tangent_frame_matches_per_index_derivatives():
    rng = np.random.default_rng(31)
    for _ in range(10):
        circuit = random_circuit(rng)
        theta = rng.uniform(-1.5, 1.5, circuit.n_params)
        state, tangents = tangent_frame(circuit, theta)
        assert np.max(np.abs(state - evolve(circuit, theta))) < 1e-12
        for j in range(circuit.n_params):
            assert np.max(np.abs(tangents[:, j] - derivative_state(circuit, theta, j))) < 1e-11


def test_spectral_gap_values():
    assert spectral_gap(SIGMA_X) == pytest.approx(2.0)
    assert spectral_gap(np.diag([1.0, 4.0, -2.0])) == pytest.approx(6.0)

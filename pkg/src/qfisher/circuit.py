"""Sequential one-parameter unitary encodings of a pure state.

A circuit applies exp(i*theta[0]*A_0) to the initial state first, then
exp(i*theta[1]*A_1), and so on: generators are stored in application
order. Parameter indices are 0-based throughout the package.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .linalg import EigenDecomposition, herm_eig, require_hermitian

STATE_NORM_TOL = 1e-10
# Central-difference step for derivative cross-checks (truncation vs roundoff
# balance at double precision).
FD_STEP = 1e-5


def as_pure_state(values, dim: int | None = None, name: str = "state") -> np.ndarray:
    """Coerce input to a normalized complex vector."""
    vec = np.asarray(values, dtype=complex)
    if vec.ndim != 1 or vec.size == 0:
        raise ValidationError(f"{name} must be a nonempty vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValidationError(f"{name} contains non-finite entries")
    if dim is not None and vec.size != dim:
        raise ValidationError(f"{name} has dimension {vec.size}, expected {dim}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise ValidationError(f"{name} is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    return vec


class EncodingCircuit:
    """Ordered Hermitian generators acting on an initial pure state.

    ``generators[0]`` acts first; parameter m enters through
    exp(i*theta[m]*generators[m]). Generator eigendecompositions are cached
    at construction because every downstream quantity reuses them. Stored
    arrays are write-locked; instances are safe to share.
    """

    def __init__(self, generators, initial_state):
        gens = [require_hermitian(g, f"generators[{m}]") for m, g in enumerate(generators)]
        if not gens:
            raise ValidationError("at least one generator is required")
        dim = gens[0].shape[0]
        for m, gen in enumerate(gens):
            if gen.shape[0] != dim:
                raise ValidationError(
                    f"generators[{m}] has dimension {gen.shape[0]}, expected {dim}"
                )
        state = as_pure_state(initial_state, dim, "initial_state").copy()
        self.dim = int(dim)
        self.generators = tuple(gens)
        self.initial_state = state
        self._eigs = tuple(herm_eig(gen) for gen in gens)
        for arr in self.generators + (self.initial_state,):
            arr.setflags(write=False)

    @property
    def n_params(self) -> int:
        return len(self.generators)

    def generator_eig(self, m: int) -> EigenDecomposition:
        return self._eigs[m]

    def unitary(self, m: int, angle: float) -> np.ndarray:
        """exp(i*angle*generators[m]) from the cached eigendecomposition."""
        eig = self._eigs[m]
        phases = np.exp(1j * float(angle) * eig.eigenvalues)
        return (eig.eigenvectors * phases) @ eig.eigenvectors.conj().T


def as_param_vector(circuit: EncodingCircuit, theta, name: str = "theta") -> np.ndarray:
    """Coerce to a finite real vector of the circuit's parameter count."""
    values = np.asarray(theta, dtype=float)
    if values.ndim != 1 or values.size != circuit.n_params:
        raise ValidationError(
            f"{name} must be a vector of length {circuit.n_params}, got shape {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"{name} contains non-finite entries")
    return values


def _check_index(index, n_params: int) -> int:
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise ValidationError(f"parameter index must be an integer, got {index!r}")
    if not 0 <= index < n_params:
        raise ValidationError(f"parameter index {index} out of range [0, {n_params})")
    return int(index)


def evolve(circuit: EncodingCircuit, theta) -> np.ndarray:
    """Apply the full parametrized unitary product to the initial state."""
    values = as_param_vector(circuit, theta)
    state = circuit.initial_state
    for m in range(circuit.n_params):
        eig = circuit.generator_eig(m)
        phases = np.exp(1j * values[m] * eig.eigenvalues)
        state = (eig.eigenvectors * phases) @ (eig.eigenvectors.conj().T @ state)
    return state


def tilde_generator(circuit: EncodingCircuit, theta, m) -> np.ndarray:
    """Generator m conjugated by every later unitary in the circuit.

    The returned operator shares the spectrum of generators[m]; the last
    generator is returned unchanged.
    """
    values = as_param_vector(circuit, theta)
    m = _check_index(m, circuit.n_params)
    acc = circuit.generators[m]
    for k in range(m + 1, circuit.n_params):
        unitary = circuit.unitary(k, values[k])
        acc = unitary @ acc @ unitary.conj().T
    return (acc + acc.conj().T) / 2.0


def derivative_state(circuit: EncodingCircuit, theta, j) -> np.ndarray:
    """Tangent vector of the evolved state along parameter j.

    Equals i * tilde_generator(j) |psi_theta| and is unnormalized; the
    explicit factor i is what central finite differences of evolve()
    reproduce.
    """
    j = _check_index(j, circuit.n_params)
    return 1j * (tilde_generator(circuit, theta, j) @ evolve(circuit, theta))


def tangent_frame(circuit: EncodingCircuit, theta) -> tuple[np.ndarray, np.ndarray]:
    """Evolved state plus all tangent vectors in one suffix-product sweep.

    Returns ``(state, tangents)`` with ``tangents[:, j]`` equal to
    derivative_state(circuit, theta, j). One pass costs O(M) matrix
    products instead of the O(M^2) of M independent conjugations.
    """
    values = as_param_vector(circuit, theta)
    tildes = [None] * circuit.n_params
    suffix = np.eye(circuit.dim, dtype=complex)
    for m in range(circuit.n_params - 1, -1, -1):
        conj = suffix @ circuit.generators[m] @ suffix.conj().T
        tildes[m] = (conj + conj.conj().T) / 2.0
        suffix = suffix @ circuit.unitary(m, values[m])
    state = suffix @ circuit.initial_state
    tangents = np.column_stack([1j * (tilde @ state) for tilde in tildes])
    return state, tangents


def finite_difference_state(circuit: EncodingCircuit, theta, j, step: float = FD_STEP) -> np.ndarray:
    """Central-difference tangent vector along parameter j.

    Independent of the tilde-generator route; used to cross-check
    derivative_state.
    """
    values = as_param_vector(circuit, theta)
    j = _check_index(j, circuit.n_params)
    if not (np.isfinite(step) and step > 0):
        raise ValidationError("step must be a positive finite real")
    forward = values.copy()
    forward[j] += step
    backward = values.copy()
    backward[j] -= step
    return (evolve(circuit, forward) - evolve(circuit, backward)) / (2.0 * step)


def spectral_gap(generator) -> float:
    """Spread of the spectrum: largest minus smallest eigenvalue."""
    eigenvalues = herm_eig(generator, "generator").eigenvalues
    return float(eigenvalues[-1] - eigenvalues[0])

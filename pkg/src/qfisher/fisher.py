"""Fisher-information measures for pure-state encoding circuits.

Classical Fisher information of a POVM, the pure-state quantum Fisher
information matrix (QFIM), scalar risk bounds, the Uhlmann curvature, and
the geometric-quantumness measure built from the last two. The complex
"geometric tensor" is the common core: its real part carries the QFIM,
its imaginary part the curvature, and an effect-weighted variant covers
postselected states.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .circuit import EncodingCircuit, as_param_vector, tangent_frame
from .errors import NumericError, ValidationError
from .linalg import DEFAULT_TOL, as_square_matrix, invert, require_hermitian, spectral_norm

# Outcomes with probability below this floor are dropped from Fisher sums.
PROBABILITY_FLOOR = 1e-12
# Probability slope above which a dropped outcome signals a divergent FIM.
DIVERGENT_SLOPE_TOL = 1e-8
# Success probability below this floor aborts postselected quantities.
POSTSELECTION_PROB_FLOOR = 1e-12
# Asymmetry allowed in a computed QFIM before symmetrization.
QFIM_SYMMETRY_TOL = 1e-9
# Most negative eigenvalue (relative) tolerated in a QFIM.
QFIM_PSD_RTOL = 1e-9
# Slack allowed above 1 for the geometric quantumness.
QUANTUMNESS_TOL = 1e-9


class DivergentInformationWarning(RuntimeWarning):
    """A zero-probability outcome with non-vanishing probability slope was
    dropped from a Fisher-information sum; the true FIM diverges there."""


@dataclass(frozen=True)
class WeightedRisk:
    """Scalar Cramér-Rao risk bound Tr[W fim^-1] / trials."""

    weight: np.ndarray
    trials: int
    value: float


def validate_povm(effects, dim: int | None = None) -> tuple[np.ndarray, ...]:
    """Check that effects are PSD and resolve the identity; return copies."""
    elements = [
        require_hermitian(effect, f"povm[{k}]", rtol=DEFAULT_TOL)
        for k, effect in enumerate(effects)
    ]
    if not elements:
        raise ValidationError("povm must contain at least one effect")
    size = elements[0].shape[0]
    if dim is not None and size != dim:
        raise ValidationError(f"povm effects have dimension {size}, expected {dim}")
    for k, effect in enumerate(elements):
        if effect.shape[0] != size:
            raise ValidationError(f"povm[{k}] has dimension {effect.shape[0]}, expected {size}")
        lowest = float(np.linalg.eigvalsh(effect)[0])
        scale = max(1.0, float(np.max(np.abs(effect))))
        if lowest < -DEFAULT_TOL * scale:
            raise ValidationError(
                f"povm[{k}] is not positive semidefinite: min eigenvalue {lowest:.3e}"
            )
    total = sum(elements)
    if float(np.max(np.abs(total - np.eye(size)))) > DEFAULT_TOL:
        raise ValidationError("povm effects do not sum to the identity")
    return tuple(elements)


def require_effect(effect, dim: int | None = None, name: str = "effect") -> np.ndarray:
    """Validate a single postselection effect: Hermitian and PSD."""
    mat = require_hermitian(effect, name, rtol=DEFAULT_TOL)
    if dim is not None and mat.shape[0] != dim:
        raise ValidationError(f"{name} has dimension {mat.shape[0]}, expected {dim}")
    lowest = float(np.linalg.eigvalsh(mat)[0])
    scale = max(1.0, float(np.max(np.abs(mat))))
    if lowest < -DEFAULT_TOL * scale:
        raise ValidationError(f"{name} is not positive semidefinite: min eigenvalue {lowest:.3e}")
    return mat


def geometric_tensor(circuit: EncodingCircuit, theta) -> np.ndarray:
    """Complex M x M tensor whose real part is QFIM/4 and imaginary part
    is the Uhlmann curvature / 4.

    Entry (i, j) is <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi> built
    from the tangent vectors of the evolved state.
    """
    state, tangents = tangent_frame(circuit, theta)
    gram = tangents.conj().T @ tangents
    overlaps = state.conj() @ tangents
    return gram - np.outer(overlaps.conj(), overlaps)


def postselected_geometric_tensor(
    circuit: EncodingCircuit, theta, effect
) -> tuple[np.ndarray, float]:
    """Geometric tensor of the state conditioned on a postselection effect.

    Returns ``(tensor, success_prob)``. The tensor is the exact
    effect-weighted expression, no small-error expansion:
    (1/p) <d_i psi|F|d_j psi> - (1/p^2) <d_i psi|F|psi><psi|F|d_j psi>.
    """
    mat = require_effect(effect, circuit.dim)
    state, tangents = tangent_frame(circuit, theta)
    success_prob = float(np.real(state.conj() @ mat @ state))
    if success_prob < POSTSELECTION_PROB_FLOOR:
        raise NumericError(
            f"postselection probability {success_prob:.6e} is below the "
            f"{POSTSELECTION_PROB_FLOOR:g} floor"
        )
    weighted = mat @ tangents
    gram = tangents.conj().T @ weighted
    overlaps = tangents.conj().T @ (mat @ state)
    tensor = gram / success_prob - np.outer(overlaps, overlaps.conj()) / success_prob**2
    return tensor, success_prob


def qfim_from_tensor(tensor) -> np.ndarray:
    """Extract the QFIM (4x real part) and enforce its invariants.

    The computed matrix must be symmetric to 1e-9 and PSD to 1e-9 relative
    slack; violations signal an implementation bug, not bad user input.
    """
    qfim = 4.0 * np.real(np.asarray(tensor))
    scale = max(1.0, float(np.max(np.abs(qfim))))
    asym = float(np.max(np.abs(qfim - qfim.T)))
    if asym > QFIM_SYMMETRY_TOL * scale:
        raise NumericError(f"computed QFIM asymmetry {asym:.3e} exceeds tolerance")
    qfim = (qfim + qfim.T) / 2.0
    eigenvalues = np.linalg.eigvalsh(qfim)
    bound = max(1.0, float(np.max(np.abs(eigenvalues))))
    if float(eigenvalues[0]) < -QFIM_PSD_RTOL * bound:
        raise NumericError(
            f"computed QFIM is not positive semidefinite: min eigenvalue {eigenvalues[0]:.3e}"
        )
    return qfim


def curvature_from_tensor(tensor) -> np.ndarray:
    """Extract the Uhlmann curvature (4x imaginary part), exactly antisymmetric."""
    curvature = 4.0 * np.imag(np.asarray(tensor))
    scale = max(1.0, float(np.max(np.abs(curvature))))
    drift = float(np.max(np.abs(curvature + curvature.T)))
    if drift > QFIM_SYMMETRY_TOL * scale:
        raise NumericError(f"computed curvature symmetry drift {drift:.3e} exceeds tolerance")
    # Structural antisymmetrization zeroes the diagonal exactly.
    return (curvature - curvature.T) / 2.0


def qfim_pure(circuit: EncodingCircuit, theta) -> np.ndarray:
    """Pure-state quantum Fisher information matrix at theta."""
    return qfim_from_tensor(geometric_tensor(circuit, theta))


def uhlmann_curvature(circuit: EncodingCircuit, theta) -> np.ndarray:
    """Uhlmann curvature at theta: the antisymmetric partner of the QFIM."""
    return curvature_from_tensor(geometric_tensor(circuit, theta))


def classical_fim(circuit: EncodingCircuit, theta, povm) -> np.ndarray:
    """Classical Fisher information matrix of the POVM outcome statistics.

    Probabilities are p(k|theta) = <psi|F_k|psi> with analytic slopes from
    the tangent vectors. Outcomes below PROBABILITY_FLOOR are dropped; if a
    dropped outcome still has slope above DIVERGENT_SLOPE_TOL the true FIM
    diverges there and a DivergentInformationWarning is emitted.
    """
    effects = validate_povm(povm, circuit.dim)
    state, tangents = tangent_frame(circuit, theta)
    size = circuit.n_params
    fim = np.zeros((size, size))
    for k, effect in enumerate(effects):
        weighted_state = effect @ state
        prob = float(np.real(state.conj() @ weighted_state))
        slope = 2.0 * np.real(weighted_state.conj() @ tangents)
        if prob < PROBABILITY_FLOOR:
            if float(np.max(np.abs(slope))) > DIVERGENT_SLOPE_TOL:
                warnings.warn(
                    f"outcome {k} has probability {prob:.3e} but slope "
                    f"{float(np.max(np.abs(slope))):.3e}; Fisher information diverges",
                    DivergentInformationWarning,
                    stacklevel=2,
                )
            continue
        fim += np.outer(slope, slope) / prob
    return fim


def _validate_weight(weight, size: int) -> np.ndarray:
    if weight is None:
        return np.eye(size)
    mat = np.asarray(weight, dtype=float)
    if mat.shape != (size, size):
        raise ValidationError(f"weight must be {size}x{size}, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("weight contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(mat))))
    if float(np.max(np.abs(mat - mat.T))) > DEFAULT_TOL * scale:
        raise ValidationError("weight must be symmetric")
    if float(np.linalg.eigvalsh(mat)[0]) <= 0.0:
        raise ValidationError("weight must be positive definite")
    return (mat + mat.T) / 2.0


def _validate_trials(trials) -> int:
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)):
        raise ValidationError(f"trials must be a positive integer, got {trials!r}")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    return int(trials)


def scalar_risk(fim, weight=None, trials: int = 1) -> WeightedRisk:
    """Scalar risk bound Tr[W fim^-1] / trials for a positive weight W.

    Fails on a singular information matrix: the singular parameters must be
    removed by the caller, not papered over.
    """
    mat = np.real(as_square_matrix(fim, "fim"))
    weight_mat = _validate_weight(weight, mat.shape[0])
    trials = _validate_trials(trials)
    inverse = np.real(invert(mat))
    value = float(np.trace(weight_mat @ inverse)) / trials
    return WeightedRisk(weight=weight_mat, trials=trials, value=value)


def learnability_interval(qfim, weight=None, trials: int = 1) -> tuple[float, float]:
    """Two-sided bracket on the best achievable risk for a pure state.

    The lower edge is the QFIM risk bound; the upper edge is exactly twice
    the lower: the most-informative measurement lands inside this factor-2
    sandwich.
    """
    lower = scalar_risk(qfim, weight, trials).value
    return (lower, 2.0 * lower)


def geometric_quantumness(qfim, curvature) -> float:
    """Norm measure of the QFIM/curvature incompatibility, in [0, 1].

    Computed as the spectral radius of i * qfim^-1 * curvature. Values
    outside [0, 1] beyond tolerance signal an implementation bug and raise.
    """
    qfim_mat = np.real(as_square_matrix(qfim, "qfim"))
    curv_mat = np.real(as_square_matrix(curvature, "curvature"))
    if curv_mat.shape != qfim_mat.shape:
        raise ValidationError("qfim and curvature dimensions differ")
    value = spectral_norm(1j * invert(qfim_mat) @ curv_mat)
    if value > 1.0 + QUANTUMNESS_TOL:
        raise NumericError(f"geometric quantumness {value:.6e} exceeds 1 beyond tolerance")
    return value

"""Kirkwood-Dirac quasiprobability analysis of postselected information.

Builds the joint quasiprobability table over eigenprojectors of two
effective generators together with a binary postselection outcome,
conditions it on success, and reports negativity. The headline result is
a consistency check: a postselected-QFIM entry can only beat the
classical covariance bound when the conditioned quasiprobability
distribution is nonclassical (negative or non-real somewhere).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import EncodingCircuit, _check_index, as_param_vector, evolve, tilde_generator
from .errors import NumericError, ValidationError
from .fisher import POSTSELECTION_PROB_FLOOR, require_effect
from .linalg import herm_eig, require_hermitian

# Adjacent eigenvalues closer than this are merged into one projector.
DEGENERACY_TOL = 1e-8
# Tolerance for calling a quasiprobability entry classical.
CLASSICALITY_TOL = 1e-9
# Projector sanity checks (idempotence, orthogonality, completeness).
PROJECTOR_TOL = 1e-8


@dataclass(frozen=True)
class EigenProjectorSet:
    """Distinct eigenvalues of a Hermitian operator with their projectors."""

    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)

    @property
    def spread(self) -> float:
        """Largest minus smallest eigenvalue."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


def eigenprojectors(operator, name: str = "operator") -> EigenProjectorSet:
    """Spectral decomposition into projectors onto distinct eigenvalues.

    Eigenvalues within DEGENERACY_TOL of their neighbour are chained into
    one cluster; each cluster gets the mean eigenvalue and the projector
    onto its eigenspace. The resulting family is verified to be an
    orthogonal resolution of the identity.
    """
    mat = require_hermitian(operator, name)
    eig = herm_eig(mat, name)
    clusters: list[list[int]] = [[0]]
    for idx in range(1, len(eig.eigenvalues)):
        if eig.eigenvalues[idx] - eig.eigenvalues[clusters[-1][-1]] < DEGENERACY_TOL:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    values = np.array([float(np.mean(eig.eigenvalues[c])) for c in clusters])
    projectors = []
    for members in clusters:
        block = eig.eigenvectors[:, members]
        projectors.append(block @ block.conj().T)
    total = sum(projectors)
    if float(np.max(np.abs(total - np.eye(mat.shape[0])))) > PROJECTOR_TOL:
        raise NumericError(f"eigenprojectors of {name} do not sum to the identity")
    for a, proj in enumerate(projectors):
        if float(np.max(np.abs(proj @ proj - proj))) > PROJECTOR_TOL:
            raise NumericError(f"eigenprojector {a} of {name} is not idempotent")
        for b in range(a + 1, len(projectors)):
            if float(np.max(np.abs(proj @ projectors[b]))) > PROJECTOR_TOL:
                raise NumericError(f"eigenprojectors {a}, {b} of {name} are not orthogonal")
    return EigenProjectorSet(eigenvalues=values, projectors=tuple(projectors))


def _check_pair(pair, n_params: int) -> tuple[int, int]:
    try:
        first, second = pair
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"pair must hold two parameter indices, got {pair!r}") from exc
    return _check_index(first, n_params), _check_index(second, n_params)


@dataclass(frozen=True)
class KdDistribution:
    """Joint quasiprobability table for two generator spectra and a
    postselection outcome.

    ``table[k, l, m]`` is Tr[P_k F_m Q_l rho] where P_k projects onto the
    k-th eigenvalue of the first effective generator, Q_l likewise for the
    second, and F_0 / F_1 = effect / (1 - effect) are the postselection
    outcomes. Complex-valued by construction.
    """

    pair: tuple[int, int]
    table: np.ndarray
    eigenvalues_i: np.ndarray
    eigenvalues_j: np.ndarray
    spread_i: float
    spread_j: float

    @property
    def success_prob(self) -> float:
        """Probability that postselection succeeds."""
        return float(np.real(np.sum(self.table[:, :, 0])))


def kd_distribution(circuit: EncodingCircuit, theta, pair, effect) -> KdDistribution:
    """Joint Kirkwood-Dirac table at theta for a parameter pair and effect."""
    theta = as_param_vector(circuit, theta)
    first, second = _check_pair(pair, circuit.n_params)
    mat = require_effect(effect, circuit.dim)
    proj_i = eigenprojectors(tilde_generator(circuit, theta, first), f"effective generator {first}")
    proj_j = eigenprojectors(tilde_generator(circuit, theta, second), f"effective generator {second}")
    state = evolve(circuit, theta)
    rho = np.outer(state, state.conj())
    stack_i = np.stack(proj_i.projectors)
    stack_j = np.stack(proj_j.projectors)
    table = np.empty((proj_i.n_outcomes, proj_j.n_outcomes, 2), dtype=complex)
    for m, outcome in enumerate((mat, np.eye(circuit.dim) - mat)):
        table[:, :, m] = np.einsum("kab,bc,lcd,da->kl", stack_i, outcome, stack_j, rho)
    total = complex(np.sum(table))
    if abs(total - 1.0) > 1e-9:
        raise NumericError(f"quasiprobability table sums to {total:.12g}, expected 1")
    for axis, label in ((1, "first"), (0, "second")):
        marginal = table.sum(axis=2).sum(axis=axis)
        if float(np.max(np.abs(np.imag(marginal)))) > 1e-9:
            raise NumericError(f"{label}-spectrum marginal is not real")
        if float(np.min(np.real(marginal))) < -1e-9:
            raise NumericError(f"{label}-spectrum marginal is negative")
    return KdDistribution(
        pair=(first, second),
        table=table,
        eigenvalues_i=proj_i.eigenvalues,
        eigenvalues_j=proj_j.eigenvalues,
        spread_i=proj_i.spread,
        spread_j=proj_j.spread,
    )


def condition_on_postselection(dist: KdDistribution) -> tuple[np.ndarray, float]:
    """Slice out the success outcome and renormalize by its probability.

    Returns ``(conditioned, success_prob)``.
    """
    success_prob = dist.success_prob
    if success_prob < POSTSELECTION_PROB_FLOOR:
        raise NumericError(
            f"postselection probability {success_prob:.6e} is below the "
            f"{POSTSELECTION_PROB_FLOOR:g} floor"
        )
    return dist.table[:, :, 0] / success_prob, success_prob


def qfim_entry_kd(conditioned, eigenvalues_i, eigenvalues_j) -> float:
    """Postselected-QFIM entry from a conditioned quasiprobability matrix.

    4 Re{ E[a_i a_j] - E_left[a_i] E_right[a_j] } where the expectations
    run over the (generally complex) conditioned distribution and its two
    marginals.
    """
    matrix = np.asarray(conditioned, dtype=complex)
    vals_i = np.asarray(eigenvalues_i, dtype=float)
    vals_j = np.asarray(eigenvalues_j, dtype=float)
    if matrix.shape != (len(vals_i), len(vals_j)):
        raise ValidationError(
            f"conditioned matrix shape {matrix.shape} does not match eigenvalue "
            f"counts ({len(vals_i)}, {len(vals_j)})"
        )
    correlation = vals_i @ matrix @ vals_j
    left = vals_i @ matrix.sum(axis=1)
    right = matrix.sum(axis=0) @ vals_j
    return float(4.0 * np.real(correlation - left * right))


@dataclass(frozen=True)
class NegativityReport:
    """Summary of how far a conditioned quasiprobability sits from a
    genuine (real, [0, 1]-valued) probability distribution."""

    total_negativity: float
    min_real: float
    max_real: float
    max_imag: float
    classical: bool


def negativity_report(conditioned) -> NegativityReport:
    """Measure negativity and classicality of a conditioned distribution.

    ``total_negativity`` adds every negative real excess and every
    imaginary magnitude; ``classical`` requires all real parts in
    [0, 1] and all imaginary parts zero, within CLASSICALITY_TOL.
    """
    matrix = np.asarray(conditioned, dtype=complex)
    real = np.real(matrix)
    imag = np.imag(matrix)
    total = float(np.sum(np.maximum(0.0, -real)) + np.sum(np.abs(imag)))
    min_real = float(np.min(real))
    max_real = float(np.max(real))
    max_imag = float(np.max(np.abs(imag)))
    classical = (
        min_real >= -CLASSICALITY_TOL
        and max_real <= 1.0 + CLASSICALITY_TOL
        and max_imag <= CLASSICALITY_TOL
    )
    return NegativityReport(
        total_negativity=total,
        min_real=min_real,
        max_real=max_real,
        max_imag=max_imag,
        classical=classical,
    )


def negativity_consistency_check(
    entry: float, spread_i: float, spread_j: float, report: NegativityReport
) -> bool:
    """Check the negativity-enables-advantage implication on one pair.

    A classical conditioned distribution caps the QFIM entry at the
    covariance bound spread_i * spread_j. Returns False only on a
    counterexample: an entry beyond the bound while the distribution
    still looks classical.
    """
    anomalous = abs(entry) > spread_i * spread_j + CLASSICALITY_TOL
    return not (anomalous and report.classical)


@dataclass(frozen=True)
class KdPairAnalysis:
    """One-stop analysis of a parameter pair under postselection."""

    pair: tuple[int, int]
    success_prob: float
    conditioned: np.ndarray
    entry: float
    spread_i: float
    spread_j: float
    report: NegativityReport
    consistent: bool


def analyze_pair(circuit: EncodingCircuit, theta, pair, effect) -> KdPairAnalysis:
    """Distribution, conditioning, entry, negativity and consistency in one call."""
    dist = kd_distribution(circuit, theta, pair, effect)
    conditioned, success_prob = condition_on_postselection(dist)
    entry = qfim_entry_kd(conditioned, dist.eigenvalues_i, dist.eigenvalues_j)
    report = negativity_report(conditioned)
    consistent = negativity_consistency_check(entry, dist.spread_i, dist.spread_j, report)
    return KdPairAnalysis(
        pair=dist.pair,
        success_prob=success_prob,
        conditioned=conditioned,
        entry=entry,
        spread_i=dist.spread_i,
        spread_j=dist.spread_j,
        report=report,
        consistent=consistent,
    )

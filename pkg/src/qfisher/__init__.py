"""Fisher-information numerics for pure-state encoding circuits.

Covers the quantum Fisher information matrix and Uhlmann curvature,
lossless information distillation by guess-anchored postselection,
Kirkwood-Dirac quasiprobability negativity analysis, and a seeded Monte
Carlo check of the classical Cramér-Rao bound.
"""

from .circuit import (
    EncodingCircuit,
    as_pure_state,
    derivative_state,
    evolve,
    finite_difference_state,
    spectral_gap,
    tangent_frame,
    tilde_generator,
)
from .distill import (
    DistillationPlan,
    DistillationReport,
    SweepPoint,
    curvature_postselected,
    distillation_report,
    kraus_from_estimate,
    postselect,
    qfim_postselected,
    t_sweep,
)
from .errors import NumericError, ValidationError
from .estimator import (
    CrbComparison,
    CrbStudy,
    SampleBatch,
    crb_comparison,
    loglikelihood,
    mle_fit,
    outcome_probabilities,
    run_crb_study,
    sample_outcomes,
)
from .fisher import (
    DivergentInformationWarning,
    WeightedRisk,
    classical_fim,
    geometric_quantumness,
    geometric_tensor,
    learnability_interval,
    postselected_geometric_tensor,
    qfim_pure,
    scalar_risk,
    uhlmann_curvature,
    validate_povm,
)
from .kirkwood import (
    EigenProjectorSet,
    KdDistribution,
    KdPairAnalysis,
    NegativityReport,
    analyze_pair,
    condition_on_postselection,
    eigenprojectors,
    kd_distribution,
    negativity_consistency_check,
    negativity_report,
    qfim_entry_kd,
)
from .scenario import (
    ScenarioConfig,
    build_circuit,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "CrbComparison",
    "CrbStudy",
    "DistillationPlan",
    "DistillationReport",
    "DivergentInformationWarning",
    "EigenProjectorSet",
    "EncodingCircuit",
    "KdDistribution",
    "KdPairAnalysis",
    "NegativityReport",
    "NumericError",
    "SampleBatch",
    "ScenarioConfig",
    "SweepPoint",
    "ValidationError",
    "WeightedRisk",
    "analyze_pair",
    "as_pure_state",
    "build_circuit",
    "classical_fim",
    "condition_on_postselection",
    "crb_comparison",
    "curvature_postselected",
    "derivative_state",
    "distillation_report",
    "eigenprojectors",
    "evolve",
    "finite_difference_state",
    "geometric_quantumness",
    "geometric_tensor",
    "kd_distribution",
    "kraus_from_estimate",
    "learnability_interval",
    "loglikelihood",
    "mle_fit",
    "negativity_consistency_check",
    "negativity_report",
    "outcome_probabilities",
    "postselect",
    "postselected_geometric_tensor",
    "qfim_entry_kd",
    "qfim_postselected",
    "qfim_pure",
    "run_crb_study",
    "sample_outcomes",
    "save_scenario",
    "scalar_risk",
    "scenario_from_dict",
    "scenario_to_dict",
    "spectral_gap",
    "t_sweep",
    "tangent_frame",
    "tilde_generator",
    "uhlmann_curvature",
    "validate_povm",
]

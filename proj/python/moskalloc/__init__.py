"""Energy allocation for two-reservoir molecular-communication transmitters."""

from ._moskalloc import (
    Allocation,
    BerReport,
    ConfigError,
    ConstraintReport,
    Environment,
    ExperimentConfig,
    GaResult,
    GaSettings,
    GenerationStats,
    InfeasibleError,
    IntegerReservoirState,
    OptimizationProblem,
    ReservoirFractions,
    SelectionStats,
    SweepSpec,
    ThresholdMode,
    TransmitterConfig,
    TrialStats,
    build_state,
    energy_cost_exact,
    evaluate_allocation,
    feasible,
    fractions_after_energy,
    hypergeom_pmf,
    hypergeom_sf,
    hypergeom_tail_bit0,
    hypergeom_tail_bit1,
    load_config_file,
    max_valid_energy,
    moved_from_energy,
    optimize_ga,
    optimize_two_user,
    p_correct_bit0,
    p_correct_bit1,
    preset,
    preset_names,
    project_to_simplex,
    run_trials,
    selection_stats,
    std_normal_cdf,
    transmitter_ber,
    two_user_ber_derivative,
    two_user_total_ber,
)

__all__ = [
    "Allocation",
    "BerReport",
    "ConfigError",
    "ConstraintReport",
    "Environment",
    "ExperimentConfig",
    "GaResult",
    "GaSettings",
    "GenerationStats",
    "InfeasibleError",
    "IntegerReservoirState",
    "OptimizationProblem",
    "ReservoirFractions",
    "SelectionStats",
    "SweepSpec",
    "ThresholdMode",
    "TransmitterConfig",
    "TrialStats",
    "build_state",
    "energy_cost_exact",
    "evaluate_allocation",
    "feasible",
    "fractions_after_energy",
    "hypergeom_pmf",
    "hypergeom_sf",
    "hypergeom_tail_bit0",
    "hypergeom_tail_bit1",
    "load_config_file",
    "max_valid_energy",
    "moved_from_energy",
    "optimize_ga",
    "optimize_two_user",
    "p_correct_bit0",
    "p_correct_bit1",
    "preset",
    "preset_names",
    "project_to_simplex",
    "run_trials",
    "selection_stats",
    "std_normal_cdf",
    "transmitter_ber",
    "two_user_ber_derivative",
    "two_user_total_ber",
]

__version__ = "0.1.0"

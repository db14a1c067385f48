"""Agent-based retail department simulator."""

from ._core import (
    ConfigError,
    DegenerateInputError,
    InvariantViolation,
    IoError,
    NoStaffConfiguredError,
    RandomStream,
    RunResult,
    Scenario,
    __version__,
    classify,
    correct_delay,
    correct_threshold,
    corrected_bernoulli,
    describe,
    eta_squared,
    f_cdf,
    levene_test,
    load_scenario,
    measure_names,
    render_report,
    run_experiment,
    run_replication,
    sample_poisson,
    sample_triangular,
    save_scenario,
    student_t,
    t_cdf,
    to_noise_reduction,
    welch_t,
    wom_additional,
)

__all__ = [
    "ConfigError",
    "DegenerateInputError",
    "InvariantViolation",
    "IoError",
    "NoStaffConfiguredError",
    "RandomStream",
    "RunResult",
    "Scenario",
    "__version__",
    "classify",
    "correct_delay",
    "correct_threshold",
    "corrected_bernoulli",
    "describe",
    "eta_squared",
    "f_cdf",
    "levene_test",
    "load_scenario",
    "measure_names",
    "render_report",
    "run_experiment",
    "run_replication",
    "sample_poisson",
    "sample_triangular",
    "save_scenario",
    "student_t",
    "t_cdf",
    "to_noise_reduction",
    "welch_t",
    "wom_additional",
]

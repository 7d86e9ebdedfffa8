"""Sparse Bayesian learning solvers with a GAMP-accelerated E-step.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    EmOptions,
    ExactPosterior,
    FactorizationError,
    GampDivergenceError,
    GampOptions,
    GampOutput,
    Hyperparams,
    NmsePoint,
    NonzeroDist,
    PhasePoint,
    PriorConfig,
    ProblemInstance,
    RecoveryResult,
    RuntimePoint,
    Solver,
    SweepConfig,
    TrialResult,
    TrialSpec,
    __version__,
    default_em_options,
    derive_seed,
    e_step_exact,
    g_in,
    g_in_var,
    g_out,
    g_out_neg_deriv,
    gamp_run,
    is_success,
    m_step_alpha,
    m_step_gamma_exact,
    make_instance,
    moment_x2,
    nmse,
    nmse_sweep,
    phase_transition,
    residual_moment,
    run_trial,
    runtime_sweep,
    sbl_em_solve,
    sbl_gamp_solve,
    success_rate,
    update_alpha,
    update_gamma,
    z_posterior,
)

"""Reachable-set norm, generalized dry-friction feedback and damped oscillator simulation."""

from ._core import (
    ControlLaw,
    DualOptions,
    DualSolution,
    NumericalError,
    OscillatorSystem,
    QuadratureScheme,
    QuadratureSpec,
    ResonanceReport,
    SimConfig,
    Smoother,
    StagePolicy,
    SupportValue,
    SweepReport,
    Trajectory,
    ValidationError,
    H_of_p,
    block_amplitudes,
    control_exact,
    control_regularized,
    detect_resonance,
    drift,
    duality_residuals,
    energy,
    epsilon_sweep,
    grad_rho,
    h_eval,
    h_grad,
    hamiltonian_residual,
    inner_marginal,
    integrate,
    propagate_free,
    reachable_support_rate,
    rho,
    rho_decay_violations,
    run_command,
    solve_dual,
    stage_select,
    switching_value,
    z_map,
)

__version__ = "0.1.0"

"""Cavity magnomechanical cooling simulator.

Thin Python surface over the C++ core: parameter handling, the reduced
two-mode model, quantum-noise cooling analytics, Gaussian covariance
dynamics, and the truncated Fock-space master equation.
"""

from magnomech._core import (  # noqa: F401
    ConfigError,
    CoolingResult,
    CovarianceState,
    DriftDiffusion,
    EffectiveParams,
    FockSpace,
    IntegrationError,
    SingularityError,
    StabilityError,
    StabilityVerdict,
    SteadyAmplitudes,
    SystemParams,
    TruncationLeakError,
    __version__,
    analytic_nbs,
    build_effective,
    build_full,
    build_hamiltonian_effective,
    build_hamiltonian_linear,
    check_regimes,
    cli_run,
    cooling_rates,
    detuning_sweep,
    dissipators_effective,
    dissipators_linear,
    drive_amplitude,
    dump_config,
    effective_noise_weights,
    effective_params,
    evolve_covariance,
    evolve_fock,
    fidelity,
    load_config,
    lowering,
    magnon_frequency,
    number_operator,
    occupation,
    partial_trace,
    preset,
    product_thermal,
    stability,
    steady_state,
    steady_state_amplitudes,
    susceptibility,
    temperature_for,
    thermal_covariance,
    thermal_occupation,
)

"""Density evolution, wave speeds, and speed bounds for spatially coupled LDPC ensembles."""

from ._core import (
    DegreeDistribution,
    __version__,
    area_threshold,
    awgn_entropy,
    bound_B2,
    bound_LB,
    bounds,
    bp_threshold,
    bsc_entropy,
    channel_from_entropy,
    coupled_profile,
    de_step,
    decodes_to_zero,
    estimate_alpha,
    find_fixed_points,
    form_wave,
    forward_de_limit,
    measure_speed,
    potential,
    potential_coupled,
    potential_curve,
    potential_derivative,
    preset_config,
    run_experiment,
    run_montecarlo,
)

__all__ = [
    "DegreeDistribution",
    "__version__",
    "area_threshold",
    "awgn_entropy",
    "bound_B2",
    "bound_LB",
    "bounds",
    "bp_threshold",
    "bsc_entropy",
    "channel_from_entropy",
    "coupled_profile",
    "de_step",
    "decodes_to_zero",
    "estimate_alpha",
    "find_fixed_points",
    "form_wave",
    "forward_de_limit",
    "measure_speed",
    "potential",
    "potential_coupled",
    "potential_curve",
    "potential_derivative",
    "preset_config",
    "run_experiment",
    "run_montecarlo",
]

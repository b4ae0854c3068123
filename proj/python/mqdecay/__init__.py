"""Collective dephasing of multiple-quantum spin coherences.

Thin Python view of the C++ core: combinatorial counts, coupling
statistics, the exact small-cluster oracle, the closed-form decay model,
decoherence rates and (p, M2) fitting.
"""

from ._core import (
    CouplingSet,
    DecaySeries,
    FitResult,
    MqdecayError,
    RatePoint,
    RateResult,
    coherence_count,
    composite_rate,
    config_count,
    degree_of_correlation,
    exact_signal_dipolar,
    exact_signal_total,
    fit_rates,
    gate_error,
    pool_second_moment,
    s_m_composite,
    s_total,
    scaling_exponent,
    second_moment,
    synth_constant,
    synth_random,
    total_rate,
    uniform_time_grid,
)

__all__ = [
    "CouplingSet",
    "DecaySeries",
    "FitResult",
    "MqdecayError",
    "RatePoint",
    "RateResult",
    "coherence_count",
    "composite_rate",
    "config_count",
    "degree_of_correlation",
    "exact_signal_dipolar",
    "exact_signal_total",
    "fit_rates",
    "gate_error",
    "pool_second_moment",
    "s_m_composite",
    "s_total",
    "scaling_exponent",
    "second_moment",
    "synth_constant",
    "synth_random",
    "total_rate",
    "uniform_time_grid",
]

"""Limiting joint moments of independent patterned random matrices."""

__version__ = "0.1.0"

from .patterns import (
    Distribution,
    InputSequence,
    Pattern,
    PatternedMatrix,
    build_matrix,
    delta_empirical,
    inverse_link,
    link,
)
from .words import (
    ColoredWord,
    canonicalize,
    drop_colors,
    enumerate_colored_pair_matched,
    enumerate_pair_matched,
    is_catalan,
    is_colored_catalan,
    is_colored_symmetric,
    is_symmetric,
    noncrossing_pairings,
    symmetry_profile,
)
from .circuits import (
    CircuitCount,
    PConfig,
    PEstimate,
    count_circuits,
    count_colored_circuits,
    mc_volume,
    p_finite,
    p_limit,
)
from .moments import (
    ClassificationReport,
    MomentValue,
    classical_gaussian_moment,
    classify,
    free_semicircular_moment,
    half_independent_rayleigh_moment,
    limit_joint_moment,
    simulate_half_independent_model,
)
from .simulate import DecayFit, SimulationStats, fourth_moment_decay, simulate_moment, trace_moment_replicate

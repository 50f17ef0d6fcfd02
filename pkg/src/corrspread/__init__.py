"""Lightcone bounds on correlation spreading in spin chains, with exact
XX-chain dynamics as verification oracles."""

from .bounds import (
    BoundConstants,
    ClosedFormParams,
    CorrelationGrid,
    big_G,
    big_G_simple,
    bound_at_radius,
    bound_block_closed,
    bound_grid,
    bound_optimized,
    bound_power_closed,
    closed_form_exponential,
    closed_form_powerlaw,
    default_velocity,
    g_func,
    lr_commutator_bound,
)
from .initcorr import CorModel, cor_between_balls
from .lattice import (
    DecayFunction,
    LatticeSpec,
    PairInteractionSpec,
    constant_C,
    f_eval,
    norm_F,
    norm_phi,
    tail_sum,
)
from .xxsim import (
    GaussianState,
    HoppingMatrix,
    MagnonState,
    corr_xx,
    corr_zz,
    corr_zz_gaussian,
    evolve_gaussian,
    ground_state_half_filled,
    make_initial,
    propagate,
)

__version__ = "0.1.0"

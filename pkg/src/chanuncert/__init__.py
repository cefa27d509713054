"""Uncertainty of quantum channels via the rho-absolute variance, and lower bounds on it."""

from .bounds import (
    EXAMPLE_PARAMS, BoundParams, BoundReport, PermutationAssignment, SearchSpaceError,
    combined_bound, norm_ineq_rhs, product_bound_thm1, sum_bound_thm2, sum_bound_thm3,
    sum_bound_thm4,
)
from .channels import (
    DensityMatrix, KrausChannel, KrausMap, apply_channel, bloch_circle_state, combine_maps,
    density_from_bloch, identity_channel, lift_channel, mix_kraus, standard_channel,
    validate_channel,
)
from .variance import (
    CenteredKraus, UncertaintyValue, centered_kraus, channel_uncertainty, expectation,
    rho_abs_variance, rho_variance,
)

__version__ = "0.1.0"

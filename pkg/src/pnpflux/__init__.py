"""Reduced-model solver for ionic flux ratios in charged channels.

Library layout: `model` holds the closed-form algebra, `geometry`
integrates tabulated channel profiles, `nlsolve` provides the scalar and
dogleg solvers, `governing` solves the steady state, `bifurcation`
locates and sweeps bifurcation moments of the critical flux-ratio
relation, and `cli` wraps everything for the command line.
"""

from .errors import (DegenerateError, DomainError, MaxIterError,
                     NoBracketError, NoSolutionError, ProfileError,
                     RangeError, SingularJacobianError)
from .model import (A_max, ChannelProfile, FluxReport, PhysicalScaling,
                    ScaledBoundary, ScaledState, UnscaledQuantities,
                    compute_B, current_I, flux_ratio, governing_residual,
                    layer_quantity_Y, nondimensionalize, rescale,
                    scaled_fluxes, unscale, zero_charge_flux)
from .geometry import (ChargeProfile, TabulatedProfile, H_of, alpha_beta,
                       channel_from_profile, load_profile, parse_profile)
from .nlsolve import (MultiStartBox, RootSet, SolverConfig, bracket_root,
                      multi_start, solve_system)
from .governing import (CurvePoint, GoverningSolution, Q0FluxResult,
                        fluxes_for_Q0, lambda_curve, solve_governing)
from .bifurcation import (AuxiliaryQuantities, BifurcationPoint,
                          BifurcationResult, Branch, BranchTable,
                          bif_residual, bif_residual_unexpanded,
                          branch_sweep, evaluate_conjectures,
                          solve_bifurcation)

__version__ = "0.1.0"

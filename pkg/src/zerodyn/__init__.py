"""Solvable many-body problems in the complex plane.

Particles are the zeros of a monic polynomial whose coefficients evolve by
decoupled linear ODEs. The motion can be obtained in two independent ways:
in closed form (evaluate the coefficients, find and track the zeros) or by
integrating the nonlinear Newtonian equations of motion directly.
"""

from .classify import BehaviorClass, classify_modes, detect_period
from .dynamics import PhaseState, integrate, rhs_fourth_order, rhs_n2, rhs_n3, rhs_newtonian
from .errors import (
    CollisionError,
    ConditioningWarning,
    ConvergenceError,
    DegenerateModesError,
    IntegrationError,
    NumericalError,
    ScenarioError,
    SingularityError,
    TrackingError,
    ZerodynError,
)
from .identities import (
    DerivBundle,
    identity_residuals,
    n2_order_k_residual,
    relation_matrix,
    relation_matrix_inverse,
    zero_derivs_from_coeff_derivs,
)
from .modes import (
    CoeffParams,
    ModeSpec,
    eval_coefficient,
    eval_coefficients,
    fit_amplitudes,
    params_from_decay_freq,
    params_from_modes,
    quartic_modes,
)
from .rootflow import Trajectory, match_ordering, roots, zero_trajectory
from .symmetria import (
    coeff_derivs_from_zero_derivs,
    coeffs_from_zeros,
    elem_sym,
    elem_sym_excl,
    poly_eval,
)

__version__ = "0.1.0"

"""
LTONP interpolation toolkit.

Solves left-tangential operator Nevanlinna-Pick problems on finite data
{Z, B, Btilde}: Pick operator, complementary pair, coefficient function,
central solution, all solutions through a Schur parameter, plus Leech and
commutant lifting front ends and a verification suite.
"""
from .complementary import ComplementaryPair, complementary_pair, inner_theta, verify_pair
from .errors import LtonpError
from .fronts import (CommutantLiftingInstance, LeechInstance, commutant_lifting_coefficients,
                     commutant_lifting_instance, leech_residual, leech_residuals, leech_solvability,
                     leech_truncate, toeplitz_corona_instance)
from .problem import (PickClass, PickData, ProblemData, auto_truncation_order, gramians, stein_solve,
                      truncated_controllability)
from .settings import DEFAULT_SETTINGS, Settings
from .solver import (CoefficientSystem, InterpolationSolver, alternative_coefficients, central_from_omega,
                     central_solution, coefficient_system, g_family, lft_solution, omega_pf,
                     redheffer_solution, scalar_parameter_from_solution, tau_isometries,
                     upsilon22_inverse, upsilon_eval, upsilon_system)
from .systems import RationalSystem, SchurParameter
from .verify import (VerificationReport, entropy_central, entropy_maximality_gap, entropy_of_solution,
                     entropy_section, interpolation_residual, j_identity_residual, schur_margin,
                     spectral_factorization_residual, szego_check, verify_solution)

__version__ = "1.0.0"

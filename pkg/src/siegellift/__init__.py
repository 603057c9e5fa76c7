"""Exact Siegel-series layers, lattice representation numbers, genus-weighted
theta averages, and lift coefficient checks over the rationals."""

from ._backend import backend_name
from .arith import (SquareClassData, delta_p, f_frak_eta, f_p_eta, kronecker,
                    ordp, square_class)
from .errors import CapabilityError, ConsistencyError, DomainError
from .lattice import (GenusWithWeights, automorphism_order,
                      representation_count, short_vectors, theta_coefficients)
from .lift import (LiftCoefficient, PlusFormCoefficients, SatakeData,
                   ZetaLValue, corollary_ratio_check, h_coefficient_predict,
                   ikeda_coefficient, parse_eigenform_text,
                   parse_plusform_text, siegel_rhs, zeta_L_exact)
from .quadform import (EvenLattice, HalfIntegralForm, D_xi, direct_sum,
                       load_bundled_genus, load_bundled_lattice,
                       membership_Rj, xi_local_invariants)
from .siegelseries import (SiegelSeriesData, F_p_poly, F_tilde_eval, gamma_p,
                           psi_eval, psi_poly, siegel_series_layers)
from .sqrtring import SqrtVal

__version__ = "0.1.0"

__all__ = [
    "CapabilityError", "ConsistencyError", "DomainError",
    "SquareClassData", "ordp", "kronecker", "square_class", "delta_p",
    "f_p_eta", "f_frak_eta",
    "SqrtVal",
    "HalfIntegralForm", "EvenLattice", "membership_Rj", "D_xi",
    "xi_local_invariants", "direct_sum", "load_bundled_lattice",
    "load_bundled_genus",
    "SiegelSeriesData", "gamma_p", "siegel_series_layers", "F_p_poly",
    "F_tilde_eval", "psi_poly", "psi_eval",
    "short_vectors", "representation_count", "automorphism_order",
    "theta_coefficients", "GenusWithWeights",
    "SatakeData", "PlusFormCoefficients", "ZetaLValue", "zeta_L_exact",
    "h_coefficient_predict", "ikeda_coefficient", "LiftCoefficient",
    "siegel_rhs", "corollary_ratio_check",
    "parse_eigenform_text", "parse_plusform_text",
    "backend_name",
]

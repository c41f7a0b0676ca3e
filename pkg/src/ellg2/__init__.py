"""Numerical toolkit for the elliptic beta integral on the G2 root system."""
from .errors import ConvergenceError, DegenerateParameterError, DomainError, EllipticError, PoleError
from .g2 import LogPoint, WeylElement, act_log, longest_element, weyl_denominator, weyl_elements
from .integrand import ParameterSet, j_product, make_balanced, phi
from .quadrature import IntegralResult, QuadSpec, i_of_a, torus_integral_1d, torus_integral_2d
from .special import Nome, e_pair, elliptic_gamma, qpoch_double_inf, qpoch_inf, theta, theta_prod
from .verifier import Report, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DegenerateParameterError", "DomainError", "EllipticError", "PoleError",
    "LogPoint", "WeylElement", "act_log", "longest_element", "weyl_denominator", "weyl_elements",
    "ParameterSet", "j_product", "make_balanced", "phi",
    "IntegralResult", "QuadSpec", "i_of_a", "torus_integral_1d", "torus_integral_2d",
    "Nome", "e_pair", "elliptic_gamma", "qpoch_double_inf", "qpoch_inf", "theta", "theta_prod",
    "Report", "run_check", "run_suite",
]

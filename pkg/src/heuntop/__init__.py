"""The Heun operator as the Hamiltonian of the sl(2,R) quantum top.

Exact operator algebra in differential, shift-lattice and dilation-lattice
realizations, quasi-exactly-solvable spectra, gauge rotation to Schrodinger
form, the BC1 elliptic model and the classical limit.
"""
from .algebra import DiffOp, Poly, Q, RationalFn, op_compose
from .errors import DomainError, FactorizationError, NotInvariantError
from .heun import (HeunParams, band_action, covariance_map, es_spectrum, factorize, heun_operator, heun_to_top,
                   qes_solve, spin_from_condition, top_to_heun)
from .sl2 import TopParams, make_differential, make_dilation, make_shift

__all__ = [
    "DiffOp", "Poly", "Q", "RationalFn", "op_compose",
    "DomainError", "FactorizationError", "NotInvariantError",
    "HeunParams", "band_action", "covariance_map", "es_spectrum", "factorize", "heun_operator", "heun_to_top",
    "qes_solve", "spin_from_condition", "top_to_heun",
    "TopParams", "make_differential", "make_dilation", "make_shift",
]
__version__ = "0.1.0"

# exact scalar expressions
from .expr_parser import parse_scalar, parse_vector, render_scalar


# numerics
from .linalg import eigenvalues, min_eigenvalue, weighted_sum, maximally_entangled, conjugate_set
from .rational_simplex import maximize
from .sdp_solver import lovasz_theta_sdp, max_min_eigenvalue


__all__ = [
    "parse_scalar",
    "parse_vector",
    "render_scalar",
    "eigenvalues",
    "min_eigenvalue",
    "weighted_sum",
    "maximally_entangled",
    "conjugate_set",
    "maximize",
    "lovasz_theta_sdp",
    "max_min_eigenvalue",
]

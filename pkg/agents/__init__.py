from .ortho_graph import orthogonality_graph, johnson_graph
from .invariants import alpha, chromatic_number, fractional_chromatic, lovasz_theta, graph_profile
from .ks_logic import find_complete_bases, ks_solve, is_critical_ks, verify_tifs, verify_tits, maxmixed_nc_model
from .gadget_forge import GadgetForger
from .sic_cert import SICCertifier, integer_weights
from .ineq_engine import (
    build_nc_inequality,
    build_bell_inequality,
    nchv_bound_bruteforce,
    lhv_bound_bruteforce,
    quantum_nc_value,
    quantum_bell_value,
    to_nonlocal_game,
)
from .round_sampler import RoundSampler

__all__ = [
    "orthogonality_graph",
    "johnson_graph",
    "alpha",
    "chromatic_number",
    "fractional_chromatic",
    "lovasz_theta",
    "graph_profile",
    "find_complete_bases",
    "ks_solve",
    "is_critical_ks",
    "verify_tifs",
    "verify_tits",
    "maxmixed_nc_model",
    "GadgetForger",
    "SICCertifier",
    "integer_weights",
    "build_nc_inequality",
    "build_bell_inequality",
    "nchv_bound_bruteforce",
    "lhv_bound_bruteforce",
    "quantum_nc_value",
    "quantum_bell_value",
    "to_nonlocal_game",
    "RoundSampler",
]

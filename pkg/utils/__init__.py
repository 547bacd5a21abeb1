from .errors import CtxForgeError
from .rational import Rational, ComplexValue, to_fraction, format_fraction, parse_weights, rationalize
from .retry import after_func, attempt_seed, resolve_seed
from .timer import Timer

__all__ = [
    "CtxForgeError",
    "Rational",
    "ComplexValue",
    "to_fraction",
    "format_fraction",
    "parse_weights",
    "rationalize",
    "after_func",
    "attempt_seed",
    "resolve_seed",
    "Timer",
]

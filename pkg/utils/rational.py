from fractions import Fraction
from typing import Annotated, Any, Iterable, List

from pydantic import PlainSerializer, PlainValidator, WithJsonSchema


def to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # decimal reading of the literal, so 0.1 stays 1/10
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def format_fraction(q: Fraction) -> str:
    return str(q)


def to_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise TypeError("booleans are not complex numbers")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise TypeError(f"cannot read {value!r} as a complex number")


def complex_pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


Rational = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(format_fraction, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

ComplexValue = Annotated[
    complex,
    PlainValidator(to_complex),
    PlainSerializer(complex_pair, return_type=list, when_used="json"),
    WithJsonSchema({"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}),
]


def parse_weights(text: str) -> List[Fraction]:
    """Comma separated rationals, e.g. "3,3,2,3"."""
    return [to_fraction(tok) for tok in text.split(",") if tok.strip()]


def rationalize(values: Iterable[float], max_denominator: int = 10**6) -> List[Fraction]:
    return [Fraction(float(v)).limit_denominator(max_denominator) for v in values]

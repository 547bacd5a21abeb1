from typing import Literal, Optional

from pydantic import BaseModel, Field

from utils.rational import Rational


class ScalarExpr(BaseModel):
    source: str = Field(
        description="Canonical rendering of the parsed expression; re-parsing it gives the same value.",
        examples=["1/sqrt(2)", "exp(2*i*pi/3)"],
    )
    real: float = Field(description="Real part of the evaluated value.")
    imag: float = Field(description="Imaginary part of the evaluated value.")
    exactness: Literal["exact-rational-form", "evaluated"] = Field(
        description="exact-rational-form when the expression only uses integers and + - * /, evaluated otherwise.",
    )
    exact: Optional[Rational] = Field(
        default=None,
        description="The exact rational value, present for exact-rational-form expressions.",
    )

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)

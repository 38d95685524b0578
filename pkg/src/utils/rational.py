"""
Exact Rationals in Reports

ADR Note: Densities, ratios and epsilons are fractions.Fraction end to end.
Report models carry them through the `Rational` annotated type, which
accepts "p/q" strings or ints on input and serializes to "p/q" in JSON, so a
report never holds a rounded float where an exact value exists.
"""

from fractions import Fraction
from typing import Any, Union

from pydantic import BeforeValidator, PlainSerializer
from typing_extensions import Annotated


def parse_rational(value: Any) -> Fraction:
    """Fraction from an int, a Fraction or a "p/q" / decimal string"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"not a rational: {value!r}")


def format_rational(value: Union[Fraction, int]) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]

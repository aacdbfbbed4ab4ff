from typing import Any, Sequence, Union

import sympy
from pydantic import BaseModel, validator

S = sympy.Symbol("s", real=True)

Scalar = Union[int, float, sympy.Expr]


def to_scalar(value: Any) -> sympy.Expr:
    """Integers and Fractions become exact Rationals, floats stay Floats."""
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, float):
        return sympy.Float(value)
    return sympy.nsimplify(value, rational=True) if isinstance(value, str) else sympy.sympify(value)


def is_zero(value: sympy.Expr, tolerance: float = 0.0) -> bool:
    value = sympy.expand(value)
    if value == 0:
        return True
    if tolerance and value.is_number:
        return abs(complex(value)) <= tolerance
    return False


class Polynomial(BaseModel):
    """
    Polynomial in s with ascending coefficients (exact rationals, floats or symbolic expressions).

    >>> Polynomial.from_coefficients([1, 0, -1]).degree
    2
    """

    coefficients: tuple[Any, ...] = ()

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @validator("coefficients", pre=True)
    def _trim(cls, value):
        coefficients = [to_scalar(c) for c in value]
        while coefficients and is_zero(coefficients[-1]):
            coefficients.pop()
        return tuple(sympy.expand(c) for c in coefficients)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Scalar]) -> "Polynomial":
        return cls(coefficients=tuple(coefficients))

    @classmethod
    def from_expr(cls, expr: Any, symbol: sympy.Symbol = S) -> "Polynomial":
        expr = sympy.expand(sympy.sympify(expr))
        if expr == 0:
            return cls(coefficients=())
        poly = sympy.Poly(expr, symbol)
        return cls(coefficients=tuple(reversed(poly.all_coeffs())))

    @property
    def degree(self) -> int:
        # -1 for the zero polynomial
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_exact(self) -> bool:
        return not any(c.has(sympy.Float) for c in self.coefficients)

    def coefficient(self, power: int) -> sympy.Expr:
        if 0 <= power < len(self.coefficients):
            return self.coefficients[power]
        return sympy.Integer(0)

    def as_expr(self, symbol: sympy.Symbol = S) -> sympy.Expr:
        return sympy.Add(*[c * symbol**i for i, c in enumerate(self.coefficients)])

    def derivative(self) -> "Polynomial":
        return Polynomial(coefficients=tuple(i * c for i, c in enumerate(self.coefficients))[1:])

    def __call__(self, value: Any) -> sympy.Expr:
        return sympy.expand(self.as_expr().subs(S, value))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_expr(self.as_expr() + other.as_expr())

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_expr(self.as_expr() - other.as_expr())

    def scale(self, factor: Scalar) -> "Polynomial":
        return Polynomial(coefficients=tuple(to_scalar(factor) * c for c in self.coefficients))

    def subs(self, *args: Any) -> "Polynomial":
        return Polynomial(coefficients=tuple(c.subs(*args) for c in self.coefficients))

    def __str__(self) -> str:
        return str(self.as_expr()) if self.coefficients else "0"

"""Laurent polynomials in a distinguished deformation variable.

A Laurent polynomial maps integer exponents (possibly negative) of the
variable ``t`` to MultiPoly coefficients, so parametrized bases like
``e_1 + t^-1*e_2`` and parametrized indexes like ``3/2 + t`` stay exact,
including when family parameters appear in the coefficients.

Instances are immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from .poly import ExactDivisionError, MultiPoly, Scalar, _Parser, _tokenize

Coefficient = Union[int, Fraction, MultiPoly]


class ZeroLaurentError(ArithmeticError):
    """Raised when an operation needs a nonzero Laurent polynomial."""


class PoleAtZeroError(ArithmeticError):
    """Raised when a value at t = 0 is requested but the order is negative.

    During degeneration checking this signals an invalid witness.
    """


class LaurentPoly:
    """Exact Laurent polynomial in one variable with MultiPoly coefficients."""

    __slots__ = ("var", "terms")

    def __init__(self, terms: Mapping[int, Coefficient] | None = None, var: str = "t"):
        tm: dict[int, MultiPoly] = {}
        if terms:
            for exp, coeff in terms.items():
                c = coeff if isinstance(coeff, MultiPoly) else MultiPoly.const(coeff)
                if not c.is_zero():
                    tm[int(exp)] = c
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "terms", tm)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(value: Coefficient, var: str = "t") -> "LaurentPoly":
        return LaurentPoly({0: value}, var=var)

    @staticmethod
    def t_power(exp: int, var: str = "t") -> "LaurentPoly":
        return LaurentPoly({exp: Fraction(1)}, var=var)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Minimal exponent with a nonzero coefficient."""
        if not self.terms:
            raise ZeroLaurentError("the zero Laurent polynomial has no order")
        return min(self.terms)

    def degree(self) -> int:
        if not self.terms:
            raise ZeroLaurentError("the zero Laurent polynomial has no degree")
        return max(self.terms)

    def coefficient(self, exp: int) -> MultiPoly:
        return self.terms.get(exp, MultiPoly.const(0))

    def value_at_zero(self) -> MultiPoly:
        """Constant-in-t part; raises PoleAtZeroError on a pole."""
        if self.terms and self.order() < 0:
            raise PoleAtZeroError(f"pole at {self.var}=0 in {self}")
        return self.terms.get(0, MultiPoly.const(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = LaurentPoly.const(other, var=self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(value, var: str) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, (int, Fraction, MultiPoly)):
            return LaurentPoly.const(value, var=var)
        raise TypeError(f"cannot coerce {type(value).__name__} to LaurentPoly")

    def __add__(self, other) -> "LaurentPoly":
        other = LaurentPoly._coerce(other, self.var)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            c = out.get(exp, MultiPoly.const(0)) + coeff
            if c.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = c
        return LaurentPoly(out, var=self.var)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()}, var=self.var)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-LaurentPoly._coerce(other, self.var))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly._coerce(other, self.var) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = LaurentPoly._coerce(other, self.var)
        out: dict[int, MultiPoly] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = e1 + e2
                c = out.get(exp, MultiPoly.const(0)) + c1 * c2
                if c.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = c
        return LaurentPoly(out, var=self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise ValueError("Laurent powers must be integers")
        if n < 0:
            if len(self.terms) != 1:
                raise ExactDivisionError(f"cannot invert multi-term {self}")
            exp, coeff = next(iter(self.terms.items()))
            if not coeff.is_constant():
                raise ExactDivisionError(f"cannot invert non-constant coefficient in {self}")
            inv = LaurentPoly({-exp: 1 / coeff.constant_value()}, var=self.var)
            return inv ** (-n)
        result = LaurentPoly.const(1, var=self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient in the Laurent ring, dividing from the lowest order.

        Coefficient divisions use exact MultiPoly division, so dividing by a
        determinant like ``(alpha - 1)*t^3`` works symbolically in the family
        parameter.  Raises ExactDivisionError when the quotient would leave
        the Laurent polynomial ring.
        """
        divisor = LaurentPoly._coerce(divisor, self.var)
        if divisor.is_zero():
            raise ZeroDivisionError("Laurent division by zero")
        if self.is_zero():
            return self
        d_lo = divisor.order()
        d_hi = divisor.degree()
        d_lead = divisor.terms[d_lo]
        max_exp = self.degree() - d_hi
        rem = dict(self.terms)
        quot: dict[int, MultiPoly] = {}
        while rem:
            lo = min(rem)
            qexp = lo - d_lo
            if qexp > max_exp:
                raise ExactDivisionError(f"({self}) is not divisible by ({divisor})")
            qc = rem[lo].exact_div(d_lead)
            quot[qexp] = qc
            for e2, c2 in divisor.terms.items():
                target = qexp + e2
                c = rem.get(target, MultiPoly.const(0)) - qc * c2
                if c.is_zero():
                    rem.pop(target, None)
                else:
                    rem[target] = c
        return LaurentPoly(quot, var=self.var)

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, reverse=True):
            coeff = self.terms[exp]
            if exp == 0:
                body = str(coeff)
            else:
                t = self.var if exp == 1 else f"{self.var}^{exp}"
                if coeff == MultiPoly.const(1):
                    body = t
                elif coeff == MultiPoly.const(-1):
                    body = f"-{t}"
                elif coeff.is_constant() or len(coeff.terms) == 1:
                    body = f"{coeff}*{t}"
                else:
                    body = f"({coeff})*{t}"
            pieces.append(body)
        text = pieces[0]
        for body in pieces[1:]:
            if body.startswith("-"):
                text += f" - {body[1:]}"
            else:
                text += f" + {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def laurent_order(p: LaurentPoly) -> int:
    """Minimal t-exponent carrying a nonzero coefficient; error on zero."""
    return p.order()


def laurent_eval_at_zero(p: LaurentPoly) -> MultiPoly:
    """The t=0 value; a pole signals an invalid degeneration witness."""
    return p.value_at_zero()


def parse_laurent(text: str, var: str = "t") -> LaurentPoly:
    """Parse a string like ``"t^-1 + 2"`` or ``"(3-alpha)*t^2"``."""
    def atom(x):
        if isinstance(x, Fraction):
            return LaurentPoly.const(x, var=var)
        if x == var:
            return LaurentPoly.t_power(1, var=var)
        return LaurentPoly.const(MultiPoly.var(x), var=var)

    return _Parser(_tokenize(text), atom).parse()

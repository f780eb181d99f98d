"""Sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from exponent vectors to nonzero Fraction
coefficients, together with an ordered tuple of variable names.  All
arithmetic is exact; there is no floating point anywhere in this module.

  x^2*y + 3/2  ->  MultiPoly(vars=("x", "y"), terms={(2, 1): 1, (0, 0): 3/2})

The zero polynomial has an empty term map.  Instances are immutable after
construction and safe to share between threads.

Strings use explicit ``*`` and ``^`` (e.g. ``"3/2*a^2*b - 1"``); the parser
additionally accepts parentheses, so table data can be written readably as
``"(1-alpha)*gamma"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


class ExactDivisionError(ArithmeticError):
    """Raised when a polynomial division leaves a remainder."""


class MissingVariableError(KeyError):
    """Raised when an evaluation does not cover every variable."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into an exact rational.

    A negative denominator is accepted and normalized away.
    """
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_rational(value: Scalar) -> str:
    """Format an exact rational as ``"p/q"`` or ``"p"``."""
    return str(Fraction(value))


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    merged = list(a)
    seen = set(a)
    for name in b:
        if name not in seen:
            merged.append(name)
            seen.add(name)
    return tuple(merged)


def _remap(terms: Mapping[Exponent, Fraction], old: tuple[str, ...],
           new: tuple[str, ...]) -> dict[Exponent, Fraction]:
    if old == new:
        return dict(terms)
    pos = {name: i for i, name in enumerate(new)}
    width = len(new)
    out: dict[Exponent, Fraction] = {}
    for exp, coeff in terms.items():
        row = [0] * width
        for name, e in zip(old, exp):
            if e:
                row[pos[name]] = e
        out[tuple(row)] = coeff
    return out


def _grlex_key(exp: Exponent) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """An exact sparse polynomial in named variables over the rationals."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping[Exponent, Scalar] | None = None):
        vs = tuple(vars)
        tm: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    exp = tuple(exp)
                    if len(exp) != len(vs):
                        raise ValueError("exponent width does not match variable count")
                    tm[exp] = c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", tm)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(value: Scalar) -> "MultiPoly":
        c = Fraction(value)
        return MultiPoly((), {(): c} if c else {})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): Fraction(1)})

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return next(iter(self.terms.values()))

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((exp[i] for exp in self.terms), default=0)

    def canonical(self) -> tuple[tuple[str, ...], tuple[tuple[Exponent, Fraction], ...]]:
        """Variable-pruned, sorted form used for semantic equality and hashing."""
        order = tuple(sorted(self.variables_used()))
        terms = _remap(self.terms, self.vars, order)
        return order, tuple(sorted(terms.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return MultiPoly.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to MultiPoly")

    def _aligned(self, other: "MultiPoly"):
        vs = _merge_vars(self.vars, other.vars)
        return vs, _remap(self.terms, self.vars, vs), _remap(other.terms, other.vars, vs)

    def __add__(self, other) -> "MultiPoly":
        other = MultiPoly._coerce(other)
        vs, a, b = self._aligned(other)
        for exp, coeff in b.items():
            c = a.get(exp, Fraction(0)) + coeff
            if c:
                a[exp] = c
            else:
                a.pop(exp, None)
        return MultiPoly(vs, a)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-MultiPoly._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        other = MultiPoly._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly(_merge_vars(self.vars, other.vars), {})
        vs, a, b = self._aligned(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                c = out.get(exp, Fraction(0)) + c1 * c2
                if c:
                    out[exp] = c
                else:
                    out.pop(exp, None)
        return MultiPoly(vs, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation and substitution -----------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact value of the polynomial; every variable must be assigned."""
        used = self.variables_used()
        missing = [v for v in used if v not in assignment]
        if missing:
            raise MissingVariableError(f"unassigned variables: {', '.join(missing)}")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            value = coeff
            for name, e in zip(self.vars, exp):
                if e:
                    value *= Fraction(assignment[name]) ** e
            total += value
        return total

    def substitute(self, mapping: Mapping[str, Union[Scalar, "MultiPoly"]]) -> "MultiPoly":
        """Replace some variables by rationals or polynomials."""
        relevant = {k: MultiPoly._coerce(v) for k, v in mapping.items() if k in self.vars}
        if not relevant:
            return self
        total = MultiPoly.const(0)
        for exp, coeff in self.terms.items():
            term = MultiPoly.const(coeff)
            for name, e in zip(self.vars, exp):
                if not e:
                    continue
                if name in relevant:
                    term = term * relevant[name] ** e
                else:
                    term = term * MultiPoly((name,), {(e,): Fraction(1)})
            total = total + term
        return total

    def evaluate_in(self, values: Mapping[str, object], ring_const) -> object:
        """Evaluate with values from an arbitrary commutative ring.

        ``ring_const`` lifts a Fraction into the ring; values must support
        ``+`` and ``*``.  Used to substitute Laurent polynomials for family
        parameters.
        """
        used = self.variables_used()
        missing = [v for v in used if v not in values]
        if missing:
            raise MissingVariableError(f"unassigned variables: {', '.join(missing)}")
        total = ring_const(Fraction(0))
        for exp, coeff in self.terms.items():
            value = ring_const(coeff)
            for name, e in zip(self.vars, exp):
                for _ in range(e):
                    value = value * values[name]
            total = total + value
        return total

    # -- division ------------------------------------------------------

    def leading(self) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def exact_div(self, divisor: Union[Scalar, "MultiPoly"]) -> "MultiPoly":
        """Quotient of an exact division; raises ExactDivisionError otherwise."""
        divisor = MultiPoly._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            c = divisor.constant_value()
            return MultiPoly(self.vars, {e: k / c for e, k in self.terms.items()})
        vs, rem, div = self._aligned(divisor)
        dexp = max(div, key=_grlex_key)
        dcoeff = div[dexp]
        quot: dict[Exponent, Fraction] = {}
        while rem:
            exp = max(rem, key=_grlex_key)
            qexp = tuple(a - b for a, b in zip(exp, dexp))
            if any(e < 0 for e in qexp):
                raise ExactDivisionError(f"({self}) is not divisible by ({divisor})")
            qc = rem[exp] / dcoeff
            quot[qexp] = quot.get(qexp, Fraction(0)) + qc
            for e2, c2 in div.items():
                target = tuple(a + b for a, b in zip(qexp, e2))
                c = rem.get(target, Fraction(0)) - qc * c2
                if c:
                    rem[target] = c
                else:
                    rem.pop(target, None)
        return MultiPoly(vs, quot)

    def content(self) -> Fraction:
        """Positive rational content (gcd of coefficients, sign of leading term)."""
        if not self.terms:
            return Fraction(0)
        from math import gcd
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        sign = 1 if self.leading()[1] > 0 else -1
        return Fraction(sign * num, den)

    def primitive(self) -> "MultiPoly":
        c = self.content()
        if c in (0, 1):
            return self
        return self.exact_div(c)

    def monomial_gcd(self) -> Exponent:
        """Componentwise minimum exponent over all terms."""
        if not self.terms:
            return tuple(0 for _ in self.vars)
        mins = None
        for exp in self.terms:
            mins = exp if mins is None else tuple(min(a, b) for a, b in zip(mins, exp))
        return mins

    def cancel_inverse_pairs(self, pairs: Iterable[tuple[str, str]]) -> "MultiPoly":
        """Reduce modulo relations x*xi = 1 for each (x, xi) pair.

        Every term's exponents on x and xi are lowered by their minimum; the
        result is the normal form modulo the ideal generated by the relations.
        """
        idx = []
        for a, b in pairs:
            if a in self.vars and b in self.vars:
                idx.append((self.vars.index(a), self.vars.index(b)))
        if not idx:
            return self
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            row = list(exp)
            for i, j in idx:
                m = min(row[i], row[j])
                if m:
                    row[i] -= m
                    row[j] -= m
            key = tuple(row)
            c = out.get(key, Fraction(0)) + coeff
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        return MultiPoly(self.vars, out)

    # -- formatting ----------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[exp]
            factors = []
            for name, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


ZERO = MultiPoly.const(0)
ONE = MultiPoly.const(1)


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    """Exact add/sub/mul with automatic variable-context merging."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: MultiPoly, assignment: Mapping[str, Scalar]) -> Fraction:
    """Exact evaluation at a rational point covering all variables."""
    return p.evaluate(assignment)


# -- parsing -----------------------------------------------------------

_TOKEN_CHARS = set("+-*^()")


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _TOKEN_CHARS:
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] == "/"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ValueError(f"unexpected character {ch!r} in polynomial {text!r}")
    return tokens


class _Parser:
    """Recursive-descent parser for +, -, *, ^ and parentheses.

    ``atom`` builds a ring element from a symbol name or Fraction, so the
    same grammar serves both plain and Laurent polynomials.
    """

    def __init__(self, tokens: list[str], atom):
        self.tokens = tokens
        self.pos = 0
        self.atom = atom

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of polynomial text")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens starting at {self.peek()!r}")
        return value

    def expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        base = self.base()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ValueError(f"expected integer exponent, got {tok!r}")
            return base ** (sign * int(tok))
        return base

    def base(self):
        tok = self.take()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parentheses")
            return value
        if tok == "-":
            return -self.base()
        if tok[0].isdigit():
            return self.atom(Fraction(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return self.atom(tok)
        raise ValueError(f"unexpected token {tok!r}")


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical string format (plus parentheses) into a MultiPoly."""
    def atom(x):
        if isinstance(x, Fraction):
            return MultiPoly.const(x)
        return MultiPoly.var(x)

    return _Parser(_tokenize(text), atom).parse()

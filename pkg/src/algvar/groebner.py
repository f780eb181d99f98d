"""Minimal exact Buchberger engine over the rationals.

Decides emptiness of polynomial systems over the algebraic closure: a system
(with required-nonvanishing side conditions folded in by the Rabinowitsch
trick) has no solutions iff its ideal contains 1, which a Groebner basis
detects.  That one certificate powers both orbit-emptiness checks behind the
non-degeneration tables and the isomorphism decider.

The engine is deliberately small: graded-reverse-lexicographic order over a
declared variable list, normal pair-selection strategy, the coprimality
criterion, and hard degree/pair caps that raise rather than ever returning a
wrong basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from random import Random
from typing import Mapping, Sequence

from .algebra import StructureTensor, multiply
from .poly import MultiPoly

Term = tuple[int, ...]
Poly = dict[Term, Fraction]


class GroebnerExhausted(RuntimeError):
    """Raised when the degree or pair cap is hit (never a wrong basis)."""


def _grevlex_key(exp: Term):
    return (sum(exp), tuple(-e for e in reversed(exp)))


def _align(poly: MultiPoly, variables: Sequence[str]) -> Poly:
    pos = {name: i for i, name in enumerate(variables)}
    width = len(variables)
    out: Poly = {}
    for exp, coeff in poly.terms.items():
        row = [0] * width
        for name, e in zip(poly.vars, exp):
            if e:
                if name not in pos:
                    raise ValueError(f"polynomial variable {name} not in declared order")
                row[pos[name]] = e
        key = tuple(row)
        c = out.get(key, Fraction(0)) + coeff
        if c:
            out[key] = c
        else:
            out.pop(key, None)
    return out


def _to_multipoly(poly: Poly, variables: Sequence[str]) -> MultiPoly:
    return MultiPoly(tuple(variables), poly)


def _leading(poly: Poly) -> tuple[Term, Fraction]:
    exp = max(poly, key=_grevlex_key)
    return exp, poly[exp]


def _monic(poly: Poly) -> Poly:
    if not poly:
        return poly
    _, c = _leading(poly)
    if c == 1:
        return poly
    return {e: k / c for e, k in poly.items()}


def _divides(a: Term, b: Term) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_scaled_shifted(p: Poly, c: Fraction, shift: Term, q: Poly) -> Poly:
    """p - c * x^shift * q, in place on a copy of p."""
    out = dict(p)
    for exp, coeff in q.items():
        key = tuple(a + b for a, b in zip(shift, exp))
        v = out.get(key, Fraction(0)) - c * coeff
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def reduce_poly(poly: Poly, basis: Sequence[Poly]) -> Poly:
    """Full normal form of poly modulo the basis (every term reduced)."""
    remainder: Poly = {}
    work = dict(poly)
    leads = [(_leading(g)[0], g) for g in basis if g]
    while work:
        exp, coeff = _leading(work)
        for lead, g in leads:
            if _divides(lead, exp):
                shift = tuple(a - b for a, b in zip(exp, lead))
                work = _sub_scaled_shifted(work, coeff / g[lead], shift, g)
                break
        else:
            remainder[exp] = coeff
            del work[exp]
    return remainder


def s_polynomial(f: Poly, g: Poly) -> Poly:
    fe, fc = _leading(f)
    ge, gc = _leading(g)
    lcm = tuple(max(a, b) for a, b in zip(fe, ge))
    sf = tuple(a - b for a, b in zip(lcm, fe))
    sg = tuple(a - b for a, b in zip(lcm, ge))
    out: Poly = {}
    for exp, coeff in f.items():
        key = tuple(a + b for a, b in zip(sf, exp))
        out[key] = out.get(key, Fraction(0)) + coeff / fc
    for exp, coeff in g.items():
        key = tuple(a + b for a, b in zip(sg, exp))
        v = out.get(key, Fraction(0)) - coeff / gc
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return {e: c for e, c in out.items() if c}


@dataclass
class Ideal:
    """Generators with a fixed grevlex variable order."""

    generators: list[MultiPoly]
    variables: tuple[str, ...]

    @staticmethod
    def of(generators: Sequence[MultiPoly], variables: Sequence[str] | None = None) -> "Ideal":
        if variables is None:
            names: list[str] = []
            for g in generators:
                for v in g.variables_used():
                    if v not in names:
                        names.append(v)
            variables = tuple(names)
        return Ideal(list(generators), tuple(variables))


@dataclass
class GroebnerBasis:
    polys: list[MultiPoly]
    variables: tuple[str, ...]

    def contains_one(self) -> bool:
        return any(p.is_constant() and not p.is_zero() for p in self.polys)

    def reduce(self, poly: MultiPoly) -> MultiPoly:
        aligned = [_align(p, self.variables) for p in self.polys]
        return _to_multipoly(reduce_poly(_align(poly, self.variables), aligned),
                             self.variables)


def buchberger(ideal: Ideal, degree_cap: int = 20, pair_cap: int = 50000) -> GroebnerBasis:
    """Groebner basis under grevlex, or GroebnerExhausted when caps are hit."""
    if degree_cap <= 0 or pair_cap <= 0:
        raise ValueError("caps must be positive")
    variables = ideal.variables
    basis: list[Poly] = []
    for g in ideal.generators:
        aligned = _monic(_align(g, variables))
        if aligned:
            basis.append(aligned)
    if not basis:
        return GroebnerBasis([], variables)

    pairs: set[tuple[int, int]] = set()

    def lcm_of(i: int, j: int) -> Term:
        a = _leading(basis[i])[0]
        b = _leading(basis[j])[0]
        return tuple(max(x, y) for x, y in zip(a, b))

    def add_pairs(k: int) -> None:
        lead_k = _leading(basis[k])[0]
        for i in range(k):
            lead_i = _leading(basis[i])[0]
            # coprime leading monomials: S-polynomial reduces to zero
            if all(min(a, b) == 0 for a, b in zip(lead_i, lead_k)):
                continue
            pairs.add((i, k))

    for k in range(len(basis)):
        add_pairs(k)

    processed = 0
    while pairs:
        pair = min(pairs, key=lambda ij: _grevlex_key(lcm_of(*ij)))
        pairs.discard(pair)
        processed += 1
        if processed > pair_cap:
            raise GroebnerExhausted(f"pair cap {pair_cap} exceeded")
        i, j = pair
        s = s_polynomial(basis[i], basis[j])
        remainder = reduce_poly(s, basis)
        if not remainder:
            continue
        if sum(_leading(remainder)[0]) > degree_cap:
            raise GroebnerExhausted(f"degree cap {degree_cap} exceeded")
        remainder = _monic(remainder)
        if not any(remainder[e] for e in remainder):
            continue
        if () in remainder and len(remainder) == 1:
            return GroebnerBasis([MultiPoly.const(1)], variables)
        basis.append(remainder)
        add_pairs(len(basis) - 1)

    reduced = _interreduce(basis)
    return GroebnerBasis([_to_multipoly(p, variables) for p in reduced], variables)


def _interreduce(basis: list[Poly]) -> list[Poly]:
    # drop generators whose leading monomial another one divides
    kept: list[Poly] = []
    leads = [_leading(g)[0] for g in basis]
    for i, g in enumerate(basis):
        li = leads[i]
        redundant = False
        for j in range(len(basis)):
            if i == j:
                continue
            lj = leads[j]
            if _divides(lj, li) and (lj != li or j < i):
                redundant = True
                break
        if not redundant:
            kept.append(g)
    out = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1:]
        reduced = reduce_poly(g, others) if others else g
        if reduced:
            out.append(_monic(reduced))
    return out


def certify_groebner(basis: GroebnerBasis) -> bool:
    """Post-hoc Buchberger criterion: every S-polynomial reduces to zero."""
    aligned = [_align(p, basis.variables) for p in basis.polys if not p.is_zero()]
    for i in range(len(aligned)):
        for j in range(i + 1, len(aligned)):
            s = s_polynomial(aligned[i], aligned[j])
            if reduce_poly(s, aligned):
                return False
    return True


# -- emptiness over the algebraic closure -----------------------------------


@dataclass
class EmptinessResult:
    verdict: str  # "yes" | "no" | "unknown"
    point: dict[str, Fraction] | None = None
    detail: str = ""


def _search_pool(height: int) -> list[Fraction]:
    values = {Fraction(0)}
    for num in range(1, height + 1):
        for den in range(1, height + 1):
            values.add(Fraction(num, den))
            values.add(Fraction(-num, den))
    return sorted(values)


def find_rational_point(equations: Sequence[MultiPoly], nonvanishing: Sequence[MultiPoly],
                        variables: Sequence[str], *, height: int = 6,
                        random_tries: int = 2000, seed: int = 0
                        ) -> dict[str, Fraction] | None:
    """Bounded-height search for a rational solution with side conditions."""
    def good(point: dict[str, Fraction]) -> bool:
        return (all(eq.evaluate(point) == 0 for eq in equations)
                and all(q.evaluate(point) != 0 for q in nonvanishing))

    nvars = len(variables)
    if nvars == 0:
        point: dict[str, Fraction] = {}
        return point if good(point) else None
    pool = _search_pool(height)
    if nvars <= 2:
        for combo in product(pool, repeat=nvars):
            point = dict(zip(variables, combo))
            if good(point):
                return point
        return None
    small = [Fraction(v) for v in (0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2))]
    for combo in product(small, repeat=min(nvars, 4)):
        point = {v: Fraction(0) for v in variables}
        point.update(dict(zip(variables, combo)))
        if good(point):
            return point
    rng = Random(seed)
    for _ in range(random_tries):
        point = {v: Fraction(rng.randint(-12, 12), rng.randint(1, 12)) for v in variables}
        if good(point):
            return point
    return None


def is_empty(equations: Sequence[MultiPoly], nonvanishing: Sequence[MultiPoly] = (),
             variables: Sequence[str] | None = None, *,
             degree_cap: int = 20, pair_cap: int = 50000,
             search_seed: int = 0) -> EmptinessResult:
    """Has the system no solutions over the algebraic closure?

    "yes" iff 1 lies in the ideal saturated by the nonvanishing polynomials
    (Rabinowitsch variables, one per condition); "no" iff the search finds a
    rational witness; "unknown" otherwise.
    """
    if variables is None:
        names: list[str] = []
        for p in list(equations) + list(nonvanishing):
            for v in p.variables_used():
                if v not in names:
                    names.append(v)
        variables = names
    gens = list(equations)
    order = list(variables)
    for idx, q in enumerate(nonvanishing):
        rab = f"_rab{idx}"
        order.append(rab)
        gens.append(q * MultiPoly.var(rab) - 1)
    try:
        basis = buchberger(Ideal.of(gens, order), degree_cap=degree_cap, pair_cap=pair_cap)
        if basis.contains_one():
            return EmptinessResult("yes", detail="1 lies in the saturated ideal")
        completed = True
    except GroebnerExhausted as exc:
        completed = False
        detail = str(exc)
    point = find_rational_point(equations, nonvanishing, variables, seed=search_seed)
    if point is not None:
        return EmptinessResult("no", point=point)
    if completed:
        return EmptinessResult(
            "unknown",
            detail="nonempty over the closure (basis lacks 1) but no rational point found")
    return EmptinessResult("unknown", detail=detail)


# -- isomorphism of numeric algebras -----------------------------------------


ISO_VARS = ("g11", "g21", "g12", "g22")


def isomorphism_system(a: StructureTensor, b: StructureTensor
                       ) -> tuple[list[MultiPoly], MultiPoly]:
    """Equations for an invertible g with g(x *_a y) = g(x) *_b g(y)."""
    n = a.dim
    g = [[MultiPoly.var(f"g{i + 1}{j + 1}") for j in range(n)] for i in range(n)]
    cols = [[g[i][j] for i in range(n)] for j in range(n)]
    equations = []
    for i in range(n):
        for j in range(n):
            prod_a = multiply(a, [1 if k == i else 0 for k in range(n)],
                              [1 if k == j else 0 for k in range(n)])
            lhs = [sum((g[r][k] * prod_a[k] for k in range(n)), MultiPoly.const(0))
                   for r in range(n)]
            rhs = multiply(b, cols[i], cols[j])
            equations.extend(lhs[r] - rhs[r] for r in range(n))
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    return equations, det


def _numeric_constants(t: StructureTensor) -> list[list[list[Fraction]]]:
    n = t.dim
    return [[[t.c[i][j][k].constant_value() for k in range(n)]
             for j in range(n)] for i in range(n)]


def _matrix_satisfies(ca, cb, matrix: list[list[Fraction]]) -> bool:
    """g(x *_a y) = g(x) *_b g(y) on basis pairs, for constant tensors ca, cb."""
    n = len(matrix)
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    if det == 0:
        return False
    for i in range(n):
        for j in range(n):
            va = ca[i][j]
            for r in range(n):
                lhs = sum(matrix[r][k] * va[k] for k in range(n))
                rhs = sum(matrix[p][i] * matrix[q][j] * cb[p][q][r]
                          for p in range(n) for q in range(n))
                if lhs != rhs:
                    return False
    return True


def _bil(cb, x, y):
    n = len(cb)
    return [sum(x[i] * y[j] * cb[i][j][k] for i in range(n) for j in range(n))
            for k in range(n)]


def _solve2(m, rhs):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det == 0:
        return None
    return [(m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
            (-m[1][0] * rhs[0] + m[0][0] * rhs[1]) / det]


def _structured_search(ca, cb, height: int) -> list[list[Fraction]] | None:
    """Column search: draw g(e1) = u from a pool, solve g(e2) = v linearly.

    Each isomorphism equation B(u, v) = a*u + b*v is linear in v once u is
    fixed, so v comes from a 2x2 solve instead of a second pool sweep.
    """
    a11 = ca[0][0]
    a12 = ca[0][1]
    a21 = ca[1][0]
    pool = _search_pool(height)
    for u0 in pool:
        for u1 in pool:
            if u0 == 0 and u1 == 0:
                continue
            u = [u0, u1]
            buu = _bil(cb, u, u)
            candidates = []
            if a11[1] != 0:
                candidates.append([(buu[k] - a11[0] * u[k]) / a11[1] for k in range(2)])
            # left multiplication by u in B, as a matrix on v
            lu = [[sum(u[i] * cb[i][j][k] for i in range(2)) for j in range(2)]
                  for k in range(2)]
            ru = [[sum(u[i] * cb[j][i][k] for i in range(2)) for j in range(2)]
                  for k in range(2)]
            v = _solve2([[lu[0][0] - a12[1], lu[0][1]],
                         [lu[1][0], lu[1][1] - a12[1]]],
                        [a12[0] * u[0], a12[0] * u[1]])
            if v is not None:
                candidates.append(v)
            v = _solve2([[ru[0][0] - a21[1], ru[0][1]],
                         [ru[1][0], ru[1][1] - a21[1]]],
                        [a21[0] * u[0], a21[0] * u[1]])
            if v is not None:
                candidates.append(v)
            for v in candidates:
                matrix = [[u[0], v[0]], [u[1], v[1]]]
                if _matrix_satisfies(ca, cb, matrix):
                    return matrix
    return None


@dataclass
class IsomorphismResult:
    verdict: str  # "yes" | "no" | "unknown"
    witness: list[list[Fraction]] | None = None
    detail: str = ""


def are_isomorphic(a: StructureTensor, b: StructureTensor, *,
                   degree_cap: int = 20, pair_cap: int = 50000,
                   search_height: int = 3) -> IsomorphismResult:
    """Decide isomorphism of numeric algebras of equal dimension.

    Invariant screening and a small planted-candidate search run first; the
    general no-certificate is emptiness (via Buchberger) of the isomorphism
    system saturated by det(g); yes needs a rational witness matrix.
    """
    from .algebra import derivation_algebra_dim, product_span_dim
    from .identity import is_commutative

    if a.dim != b.dim:
        raise ValueError("isomorphic algebras must share a dimension")
    if a.dim != 2:
        raise ValueError("the isomorphism decider covers dimension 2")
    if derivation_algebra_dim(a) != derivation_algebra_dim(b):
        return IsomorphismResult("no", detail="derivation dimensions differ")
    if product_span_dim(a) != product_span_dim(b):
        return IsomorphismResult("no", detail="product span dimensions differ")
    if is_commutative(a) != is_commutative(b):
        return IsomorphismResult("no", detail="commutativity differs")

    ca = _numeric_constants(a)
    cb = _numeric_constants(b)
    planted = [
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]],
        [[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]],
        [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]],
        [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]],
        [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)]],
    ]
    for matrix in planted:
        if _matrix_satisfies(ca, cb, matrix):
            return IsomorphismResult("yes", witness=matrix)
    matrix = _structured_search(ca, cb, height=6)
    if matrix is not None:
        return IsomorphismResult("yes", witness=matrix)

    equations, det = isomorphism_system(a, b)
    result = is_empty(equations, [det], variables=list(ISO_VARS),
                      degree_cap=degree_cap, pair_cap=pair_cap)
    if result.verdict == "yes":
        return IsomorphismResult("no", detail="isomorphism system empty over the closure")
    if result.verdict == "no" and result.point is not None:
        p = result.point
        matrix = [[p["g11"], p["g12"]], [p["g21"], p["g22"]]]
        return IsomorphismResult("yes", witness=matrix)

    pool = _search_pool(search_height)
    for combo in product(pool, repeat=4):
        matrix = [[combo[0], combo[2]], [combo[1], combo[3]]]
        if _matrix_satisfies(ca, cb, matrix):
            return IsomorphismResult("yes", witness=matrix)
    return IsomorphismResult("unknown", detail="no certificate within caps")

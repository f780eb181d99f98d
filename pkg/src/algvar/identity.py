"""Deciders and witness solvers for the defining identity classes.

Three nested classes of algebras are decided here, all through one bilinear
identity on the multiplication P:

  terminal      [[[P,a],P],P] = 0 for all a
  conservative  [L_b,[L_a,P]] = -[L_{F(a,b)},P]            for some F
  rigid         [L_b,[L_a,P]] = -[L_{F(a,b)},P] + phi(a,b)P for some F, phi

Conservativity and rigidity reduce to exact linear systems in the entries of
the auxiliary multiplication F (and the form phi).  Numeric tensors get a
general solution in solved form; tensors with family parameters are decided
symbolically by fraction-free elimination with case splits on pivot
polynomials, or at sampled parameter points when splitting is not feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import (
    BilinearForm,
    BilinearMap,
    LinearMap,
    StructureTensor,
    basis_vector,
    bracket_bil_bil,
    bracket_lin_bil,
    left_mult,
    multiply,
    slice_map,
)
from .poly import MultiPoly

# Unknowns of the rigidity system for n = 2, in the order that fixes which
# variables end up free (trailing unknowns are preferred as free symbols).
CLASSIC_UNKNOWNS = ("lam1", "lam2", "mu1", "mu2", "tau1", "tau2",
                    "nu1", "nu2", "phi11", "phi12", "phi21", "phi22")

# The sixteen (a, b, x, y) basis specializations in their traditional labels.
CASE_ASSIGNMENTS: dict[str, tuple[int, int, int, int]] = {
    "1.a": (0, 0, 0, 0), "1.b": (1, 1, 1, 1),
    "2.a": (0, 1, 0, 0), "2.b": (1, 0, 1, 1),
    "3.a": (1, 0, 0, 0), "3.b": (0, 1, 1, 1),
    "4.a": (0, 0, 1, 0), "4.b": (1, 1, 0, 1),
    "5.a": (0, 0, 0, 1), "5.b": (1, 1, 1, 0),
    "6.a": (1, 1, 0, 0), "6.b": (0, 0, 1, 1),
    "7.a": (0, 1, 0, 1), "7.b": (1, 0, 1, 0),
    "8.a": (1, 0, 0, 1), "8.b": (0, 1, 1, 0),
}


class CaseSplitExplosion(RuntimeError):
    """Raised when symbolic case splitting cannot continue soundly."""


class NonCommutativeError(ValueError):
    """Raised when the Jordan check receives a non-commutative algebra."""


@dataclass
class Witness:
    """A general solution (F, phi) of the defining linear system.

    Entries are affine in ``free_symbols``; substituting any values for the
    free symbols yields an exact solution.  ``constraints`` lists the solved
    rows, each of the form  unknown - expression(free symbols).
    """

    f: BilinearMap
    phi: BilinearForm
    free_symbols: list[str]
    constraints: list[MultiPoly]

    def instantiate(self, values: Mapping[str, Fraction] | None = None
                    ) -> tuple[BilinearMap, BilinearForm]:
        assignment = {name: Fraction(0) for name in self.free_symbols}
        if values:
            assignment.update({k: Fraction(v) for k, v in values.items()})
        f = self.f.substitute(assignment)
        phi = BilinearForm([[e.substitute(assignment) for e in row] for row in self.phi.phi])
        return f, phi


@dataclass
class ParamCell:
    """One constructible cell of parameter space with its verdict."""

    equations: list[MultiPoly]
    inequations: list[MultiPoly]
    consistent: bool
    solution_dim: int | None = None
    pinned: dict[str, Fraction] = field(default_factory=dict)

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        pt = {k: Fraction(v) for k, v in point.items()}
        return (all(eq.evaluate(pt) == 0 for eq in self.equations)
                and all(ineq.evaluate(pt) != 0 for ineq in self.inequations))


@dataclass
class IdentityReport:
    """Outcome of a decider run.

    verdict is "yes" or "no"; symbolic runs over a parametric tensor may
    return "split" together with the cell partition.  A "yes" on a numeric
    tensor always carries a witness for conservativity/rigidity.
    """

    verdict: str
    witness: Witness | None = None
    solution_dim: int | None = None
    cells: list[ParamCell] | None = None
    conditions: list[MultiPoly] | None = None
    samples: list[dict] | None = None

    def verdict_at(self, point: Mapping[str, Fraction]) -> str:
        """Resolve a split verdict at a concrete parameter point."""
        if self.verdict != "split":
            return self.verdict
        for cell in self.cells or []:
            if cell.contains(point):
                return "yes" if cell.consistent else "no"
        raise ValueError(f"point {point} not covered by any cell")


# -- identity systems ------------------------------------------------------


def unknown_names(dim: int, with_phi: bool) -> list[str]:
    if dim == 2:
        names = list(CLASSIC_UNKNOWNS)
        return names if with_phi else names[:8]
    names = [f"f{i + 1}{j + 1}_{k + 1}" for i in range(dim) for j in range(dim)
             for k in range(dim)]
    if with_phi:
        names += [f"phi{i + 1}{j + 1}" for i in range(dim) for j in range(dim)]
    return names


def _lhs_brackets(tensor: StructureTensor) -> list[list[BilinearMap]]:
    """lhs[i][j] = [L_{e_j}, [L_{e_i}, P]] as a bilinear map."""
    n = tensor.dim
    inner = [bracket_lin_bil(left_mult(tensor, basis_vector(n, i)), tensor)
             for i in range(n)]
    return [[bracket_lin_bil(left_mult(tensor, basis_vector(n, j)), inner[i])
             for j in range(n)] for i in range(n)]


def _unit_brackets(tensor: StructureTensor) -> list[BilinearMap]:
    """k[c] = [L_{e_c}, P], the coefficient maps of the unknown F entries."""
    n = tensor.dim
    return [bracket_lin_bil(left_mult(tensor, basis_vector(n, c)), tensor)
            for c in range(n)]


def identity_system(tensor: StructureTensor, with_phi: bool
                    ) -> tuple[list[tuple[list[MultiPoly], MultiPoly]], list[str]]:
    """Linear system for the identity, rows (coefficients, rhs).

    Unknowns are the 2n^2 entries of F followed by the n^2 entries of phi
    when requested; the system is block diagonal over the (a, b) basis pair.
    """
    n = tensor.dim
    nf = n * n * n
    ncols = nf + (n * n if with_phi else 0)
    lhs = _lhs_brackets(tensor)
    units = _unit_brackets(tensor)
    zero = MultiPoly.const(0)
    rows = []
    for i in range(n):
        for j in range(n):
            for p in range(n):
                for q in range(n):
                    for r in range(n):
                        coeffs = [zero] * ncols
                        for c in range(n):
                            val = units[c].c[p][q][r]
                            if not val.is_zero():
                                coeffs[(i * n + j) * n + c] = val
                        if with_phi:
                            val = tensor.c[p][q][r]
                            if not val.is_zero():
                                coeffs[nf + i * n + j] = -val
                        rhs = -lhs[i][j].c[p][q][r]
                        rows.append((coeffs, rhs))
    return rows, unknown_names(n, with_phi)


def case_conditions(tensor: StructureTensor) -> dict[str, list[MultiPoly]]:
    """The 32 scalar equations of the rigidity identity, grouped by the
    sixteen labeled (a, b, x, y) basis specializations (n = 2 only).

    Equations are polynomials in the twelve unknowns (and any family
    parameters), sign-normalized to positive leading coefficient.
    """
    if tensor.dim != 2:
        raise ValueError("case labels are defined for dimension 2")
    lhs = _lhs_brackets(tensor)
    units = _unit_brackets(tensor)
    f_syms = [[MultiPoly.var(CLASSIC_UNKNOWNS[(i * 2 + j) * 2 + c]) for c in range(2)]
              for i in range(2) for j in range(2)]
    phi_syms = [MultiPoly.var(CLASSIC_UNKNOWNS[8 + i]) for i in range(4)]
    out: dict[str, list[MultiPoly]] = {}
    for label, (a, b, x, y) in CASE_ASSIGNMENTS.items():
        eqs = []
        for r in range(2):
            poly = lhs[a][b].c[x][y][r]
            for c in range(2):
                poly = poly + f_syms[a * 2 + b][c] * units[c].c[x][y][r]
            poly = poly - phi_syms[a * 2 + b] * tensor.c[x][y][r]
            if not poly.is_zero():
                content = poly.content()
                poly = poly.exact_div(content)
            eqs.append(poly)
        out[label] = eqs
    return out


# -- numeric solving -------------------------------------------------------


def _solve_numeric(rows, unknowns: list[str], dim: int, with_phi: bool
                   ) -> IdentityReport:
    ncols = len(unknowns)
    a = []
    b = []
    for coeffs, rhs in rows:
        a.append([c.constant_value() for c in coeffs])
        b.append(rhs.constant_value())
    solved = linalg.solve_affine(a, b)
    if solved is None:
        return IdentityReport(verdict="no")
    particular, basis, free_cols = solved
    free_syms = [unknowns[j] for j in free_cols]
    exprs: list[MultiPoly] = []
    for idx in range(ncols):
        expr = MultiPoly.const(particular[idx])
        for v, col in zip(basis, free_cols):
            if v[idx]:
                expr = expr + MultiPoly.const(v[idx]) * MultiPoly.var(unknowns[col])
        exprs.append(expr)
    constraints = [MultiPoly.var(unknowns[idx]) - exprs[idx]
                   for idx in range(ncols) if idx not in free_cols]
    n = dim
    f = BilinearMap([[[exprs[(i * n + j) * n + k] for k in range(n)]
                      for j in range(n)] for i in range(n)])
    if with_phi:
        base = n * n * n
        phi = BilinearForm([[exprs[base + i * n + j] for j in range(n)] for i in range(n)])
    else:
        phi = BilinearForm.zero(n)
    witness = Witness(f=f, phi=phi, free_symbols=free_syms, constraints=constraints)
    return IdentityReport(verdict="yes", witness=witness, solution_dim=len(free_cols))


# -- symbolic case splitting ------------------------------------------------


@dataclass
class _Cell:
    subs: list[tuple[str, MultiPoly]]
    equations: list[MultiPoly]
    inequations: list[MultiPoly]
    nonzero_keys: set

    def clone(self) -> "_Cell":
        return _Cell(list(self.subs), list(self.equations),
                     list(self.inequations), set(self.nonzero_keys))

    def specialize(self, poly: MultiPoly) -> MultiPoly:
        for name, expr in self.subs:
            poly = poly.substitute({name: expr})
        return poly

    def pinned(self) -> dict[str, Fraction]:
        values: dict[str, Fraction] = {}
        for name, expr in reversed(self.subs):
            resolved = expr.substitute(values)
            if resolved.is_constant():
                values[name] = resolved.constant_value()
        return dict(values)


def _rational_roots(poly: MultiPoly, var: str) -> list[Fraction]:
    """All rational roots of a univariate polynomial, by the rational root test."""
    coeffs: dict[int, Fraction] = {}
    idx = poly.vars.index(var)
    for exp, c in poly.terms.items():
        coeffs[exp[idx]] = coeffs.get(exp[idx], Fraction(0)) + c
    deg = max(coeffs)
    den = 1
    for c in coeffs.values():
        den = den * c.denominator
    ints = {e: int(c * den) for e, c in coeffs.items()}
    lead = ints[deg]
    const = ints.get(0, 0)
    if const == 0:
        rest = MultiPoly((var,), {(e - 1,): Fraction(c) for e, c in coeffs.items() if e > 0})
        roots = [Fraction(0)]
        if rest.total_degree() >= 1:
            roots += [r for r in _rational_roots(rest, var) if r != 0]
        return roots

    def divisors(n: int) -> list[int]:
        n = abs(n)
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    roots = []
    univ = MultiPoly((var,), {(e,): Fraction(c) for e, c in coeffs.items()})
    for p in divisors(const):
        for q in divisors(lead):
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                if cand not in roots and univ.evaluate({var: cand}) == 0:
                    roots.append(cand)
    return roots


def _light_factors(poly: MultiPoly) -> list[MultiPoly]:
    """Split a polynomial into factors good enough for zero-branching.

    Pulls out single-variable factors, then rational linear factors of a
    univariate cofactor.  The remaining cofactor is kept whole.
    """
    poly = poly.primitive()
    factors: list[MultiPoly] = []
    mono = poly.monomial_gcd()
    if any(mono):
        for name, e in zip(poly.vars, mono):
            if e:
                factors.append(MultiPoly.var(name))
        shifted = {tuple(a - b for a, b in zip(exp, mono)): c
                   for exp, c in poly.terms.items()}
        poly = MultiPoly(poly.vars, shifted)
    if poly.is_constant():
        return factors
    used = poly.variables_used()
    if len(used) == 1 and poly.total_degree() > 1:
        from .poly import ExactDivisionError
        var = used[0]
        for root in _rational_roots(poly, var):
            linear = MultiPoly.var(var) - MultiPoly.const(root)
            while not poly.is_constant():
                try:
                    poly = poly.exact_div(linear)
                except ExactDivisionError:
                    break
                factors.append(linear)
    if not poly.is_constant():
        factors.append(poly.primitive())
    return factors


def _linear_solve_var(poly: MultiPoly) -> tuple[str, MultiPoly] | None:
    """Find a variable with constant nonzero coefficient occurring linearly;
    return (name, expression) with poly = 0 solved for that variable."""
    for name in poly.variables_used():
        idx = poly.vars.index(name)
        if poly.degree_in(name) != 1:
            continue
        coeff_terms = {}
        rest_terms = {}
        for exp, c in poly.terms.items():
            if exp[idx] == 1:
                reduced = list(exp)
                reduced[idx] = 0
                coeff_terms[tuple(reduced)] = c
            else:
                rest_terms[exp] = c
        coeff = MultiPoly(poly.vars, coeff_terms)
        if not coeff.is_constant():
            continue
        cval = coeff.constant_value()
        if not cval:
            continue
        rest = MultiPoly(poly.vars, rest_terms)
        expr = rest.exact_div(-cval)
        return name, expr
    return None


def _nonzero_key(poly: MultiPoly):
    return poly.primitive().canonical()


def _row_content(polys: Sequence[MultiPoly]) -> Fraction:
    """Positive gcd of the contents of all nonzero polynomials in a row."""
    from math import gcd
    num = 0
    den = 1
    for p in polys:
        if p.is_zero():
            continue
        c = p.content()
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den) if num else Fraction(0)


class _Splitter:
    """Fraction-free elimination over parameter polynomials with case splits."""

    def __init__(self, rows, ncols: int, cell_cap: int = 200):
        self.rows = rows
        self.ncols = ncols
        self.cell_cap = cell_cap
        self.results: list[ParamCell] = []

    def is_nonzero(self, cell: _Cell, poly: MultiPoly) -> bool:
        if poly.is_constant():
            return bool(poly.constant_value())
        for f in _light_factors(poly):
            if f.is_constant():
                if not f.constant_value():
                    return False
            elif _nonzero_key(f) not in cell.nonzero_keys:
                return False
        return True

    def branch(self, cell: _Cell, poly: MultiPoly) -> list[_Cell]:
        """Cells covering cell: poly != 0 first, then one per vanishing factor."""
        factors = [f for f in _light_factors(poly) if not f.is_constant()]
        out: list[_Cell] = []
        nz = cell.clone()
        for f in factors:
            key = _nonzero_key(f)
            if key not in nz.nonzero_keys:
                nz.nonzero_keys.add(key)
                nz.inequations.append(f)
        out.append(nz)
        for f in factors:
            solved = _linear_solve_var(f)
            if solved is None:
                raise CaseSplitExplosion(f"cannot solve {f} = 0 rationally")
            name, expr = solved
            zero_cell = cell.clone()
            zero_cell.subs.append((name, expr))
            zero_cell.equations.append(f)
            # a substitution may kill a standing inequation; drop such cells
            ok = True
            for ineq in zero_cell.inequations:
                if zero_cell.specialize(ineq).is_zero():
                    ok = False
                    break
            if ok:
                keys = set()
                for q in zero_cell.inequations:
                    for piece in _light_factors(zero_cell.specialize(q)):
                        if not piece.is_constant():
                            keys.add(_nonzero_key(piece))
                zero_cell.nonzero_keys = keys
                out.append(zero_cell)
        return out

    def run(self, cell: _Cell) -> list[ParamCell]:
        self._solve(cell)
        return self.results

    def _record(self, cell: _Cell, consistent: bool, dim: int | None):
        self.results.append(ParamCell(
            equations=list(cell.equations),
            inequations=list(cell.inequations),
            consistent=consistent,
            solution_dim=dim,
            pinned=cell.pinned(),
        ))

    def _solve(self, cell: _Cell):
        if len(self.results) > self.cell_cap:
            raise CaseSplitExplosion("too many cells")
        work = []
        for coeffs, rhs in self.rows:
            row = [cell.specialize(c) for c in coeffs]
            rvalue = cell.specialize(rhs)
            if all(c.is_zero() for c in row) and rvalue.is_zero():
                continue
            work.append((row, rvalue))
        pivots = 0
        for col in range(self.ncols):
            candidates = [i for i in range(pivots, len(work)) if not work[i][0][col].is_zero()]
            if not candidates:
                continue
            choice = None
            for i in candidates:
                entry = work[i][0][col]
                if entry.is_constant() or self.is_nonzero(cell, entry):
                    choice = i
                    break
            if choice is None:
                # branch on the structurally simplest candidate pivot
                i = min(candidates, key=lambda k: len(work[k][0][col].terms))
                for sub in self.branch(cell, work[i][0][col]):
                    self._solve(sub)
                return
            work[pivots], work[choice] = work[choice], work[pivots]
            prow, pr = work[pivots]
            pivot = prow[col]
            for i in range(pivots + 1, len(work)):
                row, rhs = work[i]
                if row[col].is_zero():
                    continue
                factor = row[col]
                new_row = [pivot * row[j] - factor * prow[j] for j in range(self.ncols)]
                new_rhs = pivot * rhs - factor * pr
                c0 = _row_content(new_row + [new_rhs])
                if c0 not in (0, 1):
                    new_row = [p.exact_div(c0) if not p.is_zero() else p for p in new_row]
                    new_rhs = new_rhs.exact_div(c0) if not new_rhs.is_zero() else new_rhs
                work[i] = (new_row, new_rhs)
            pivots += 1
            if pivots == len(work):
                break
        # residual rows: zero coefficients, possibly nonzero right side
        for i in range(pivots, len(work)):
            row, rhs = work[i]
            if any(not c.is_zero() for c in row):
                continue
            if rhs.is_zero():
                continue
            if rhs.is_constant() or self.is_nonzero(cell, rhs):
                self._record(cell, consistent=False, dim=None)
                return
            subcells = self.branch(cell, rhs)
            nz = subcells[0]
            self._record(nz, consistent=False, dim=None)
            for sub in subcells[1:]:
                self._solve(sub)
            return
        self._record(cell, consistent=True, dim=self.ncols - pivots)


def solve_identity_symbolic(rows, unknowns: list[str],
                            domain_equations: Sequence[MultiPoly] = (),
                            domain_inequations: Sequence[MultiPoly] = (),
                            ) -> list[ParamCell]:
    """Partition parameter space into cells with a consistency verdict each."""
    cell = _Cell(subs=[], equations=[], inequations=[], nonzero_keys=set())
    for eq in domain_equations:
        solved = _linear_solve_var(eq)
        if solved is None:
            raise CaseSplitExplosion(f"cannot fold domain equation {eq} = 0")
        cell.subs.append(solved)
        cell.equations.append(eq)
    for ineq in domain_inequations:
        for f in _light_factors(cell.specialize(ineq)):
            if not f.is_constant():
                cell.inequations.append(f)
                cell.nonzero_keys.add(_nonzero_key(f))
    return _Splitter(rows, len(unknowns)).run(cell)


# -- public deciders ---------------------------------------------------------


def _decide_linear(tensor: StructureTensor, with_phi: bool,
                   domain_equations: Sequence[MultiPoly] = (),
                   domain_inequations: Sequence[MultiPoly] = (),
                   sample_points: Sequence[Mapping[str, Fraction]] | None = None,
                   ) -> IdentityReport:
    rows, unknowns = identity_system(tensor, with_phi)
    if tensor.is_numeric():
        return _solve_numeric(rows, unknowns, tensor.dim, with_phi)
    if sample_points is not None:
        samples = []
        verdicts = set()
        for point in sample_points:
            inst = tensor.substitute({k: Fraction(v) for k, v in point.items()})
            sub = _decide_linear(inst, with_phi)
            samples.append({"point": dict(point), "verdict": sub.verdict,
                            "solution_dim": sub.solution_dim})
            verdicts.add(sub.verdict)
        verdict = verdicts.pop() if len(verdicts) == 1 else "split"
        return IdentityReport(verdict=verdict, samples=samples)
    cells = solve_identity_symbolic(rows, unknowns, domain_equations, domain_inequations)
    consistent = {c.consistent for c in cells}
    if consistent == {True}:
        dims = {c.solution_dim for c in cells}
        return IdentityReport(verdict="yes", cells=cells,
                              solution_dim=dims.pop() if len(dims) == 1 else None)
    if consistent == {False}:
        return IdentityReport(verdict="no", cells=cells)
    return IdentityReport(verdict="split", cells=cells)


def is_conservative(tensor: StructureTensor, *,
                    domain_equations: Sequence[MultiPoly] = (),
                    domain_inequations: Sequence[MultiPoly] = (),
                    sample_points: Sequence[Mapping[str, Fraction]] | None = None,
                    ) -> IdentityReport:
    """Does some multiplication F satisfy the conservativity identity?"""
    return _decide_linear(tensor, with_phi=False,
                          domain_equations=domain_equations,
                          domain_inequations=domain_inequations,
                          sample_points=sample_points)


def is_rigid(tensor: StructureTensor, *,
             domain_equations: Sequence[MultiPoly] = (),
             domain_inequations: Sequence[MultiPoly] = (),
             sample_points: Sequence[Mapping[str, Fraction]] | None = None,
             ) -> IdentityReport:
    """Does some pair (F, phi) satisfy the quasi-conservativity identity?"""
    return _decide_linear(tensor, with_phi=True,
                          domain_equations=domain_equations,
                          domain_inequations=domain_inequations,
                          sample_points=sample_points)


def terminal_conditions(tensor: StructureTensor) -> list[MultiPoly]:
    """All entries of [[[P,a],P],P] over basis a, sign-normalized, nonzero ones."""
    n = tensor.dim
    conditions = []
    seen = set()
    for a in range(n):
        inner = slice_map(tensor, basis_vector(n, a))
        mid = bracket_lin_bil(inner, tensor)
        outer = bracket_bil_bil(mid, tensor)
        for poly in outer.nonzero_entries():
            prim = poly.primitive()
            key = prim.canonical()
            if key not in seen:
                seen.add(key)
                conditions.append(prim)
    return conditions


def is_terminal(tensor: StructureTensor, *,
                domain_equations: Sequence[MultiPoly] = (),
                domain_inequations: Sequence[MultiPoly] = (),
                ) -> IdentityReport:
    """Does the triple bracket vanish identically?

    Multilinearity makes checking a over the basis sufficient.  On a
    parametric tensor the vanishing conditions are polynomials in the
    parameters; the verdict is split into cells when they only vanish on a
    proper subvariety.
    """
    conditions = terminal_conditions(tensor)
    if not conditions:
        return IdentityReport(verdict="yes", conditions=[])
    if tensor.is_numeric() or all(c.is_constant() for c in conditions):
        return IdentityReport(verdict="no", conditions=conditions)
    rows = [([], cond) for cond in conditions]
    try:
        cells = solve_identity_symbolic(rows, [], domain_equations, domain_inequations)
    except CaseSplitExplosion:
        return IdentityReport(verdict="split", conditions=conditions)
    consistent = {c.consistent for c in cells}
    if consistent == {False}:
        return IdentityReport(verdict="no", cells=cells, conditions=conditions)
    if consistent == {True}:
        return IdentityReport(verdict="yes", cells=cells, conditions=conditions)
    return IdentityReport(verdict="split", cells=cells, conditions=conditions)


def pinned_terminal_multiplication(tensor: StructureTensor, a: Sequence, b: Sequence
                                   ) -> list[MultiPoly]:
    """F(a,b) = 2/3 P(a,b) + 1/3 P(b,a), the canonical terminal choice."""
    ab = multiply(tensor, a, b)
    ba = multiply(tensor, b, a)
    two_thirds = Fraction(2, 3)
    third = Fraction(1, 3)
    return [two_thirds * x + third * y for x, y in zip(ab, ba)]


def terminal_via_pinned_f(tensor: StructureTensor) -> bool:
    """Check the conservativity identity with F pinned to its terminal form.

    Equivalent to terminality; used as an independent cross-check.
    """
    n = tensor.dim
    for i in range(n):
        for j in range(n):
            a = basis_vector(n, i)
            b = basis_vector(n, j)
            inner = bracket_lin_bil(left_mult(tensor, a), tensor)
            lhs = bracket_lin_bil(left_mult(tensor, b), inner)
            c = pinned_terminal_multiplication(tensor, a, b)
            rhs = bracket_lin_bil(left_mult(tensor, c), tensor)
            for p in range(n):
                for q in range(n):
                    for r in range(n):
                        if not (lhs.c[p][q][r] + rhs.c[p][q][r]).is_zero():
                            return False
    return True


def verify_witness(tensor: StructureTensor, f: BilinearMap, phi: BilinearForm,
                   denominator: MultiPoly | None = None,
                   inverse_pairs: Sequence[tuple[str, str]] = ()) -> bool:
    """Substitute a concrete (F, phi) into the identity and check it vanishes.

    When F and phi are given with a common denominator d (entries are the
    numerators), the identity is checked multiplied through by d, which is
    equivalent wherever d does not vanish.  ``inverse_pairs`` lists symbol
    pairs (g, gi) satisfying g*gi = 1, for families whose constants carry a
    parameter inverse; residuals are reduced modulo those relations before
    the zero test.
    """
    n = tensor.dim
    d = denominator if denominator is not None else MultiPoly.const(1)
    for i in range(n):
        for j in range(n):
            a = basis_vector(n, i)
            b = basis_vector(n, j)
            inner = bracket_lin_bil(left_mult(tensor, a), tensor)
            lhs = bracket_lin_bil(left_mult(tensor, b), inner)
            fab = [f.c[i][j][k] for k in range(n)]
            rhs = bracket_lin_bil(left_mult(tensor, fab), tensor)
            for p in range(n):
                for q in range(n):
                    for r in range(n):
                        total = (d * lhs.c[p][q][r] + rhs.c[p][q][r]
                                 - phi.phi[i][j] * tensor.c[p][q][r])
                        if inverse_pairs:
                            total = total.cancel_inverse_pairs(inverse_pairs)
                        if not total.is_zero():
                            return False
    return True


def is_commutative(tensor: StructureTensor) -> bool:
    n = tensor.dim
    return all(tensor.c[i][j][k] == tensor.c[j][i][k]
               for i in range(n) for j in range(n) for k in range(n))


def is_jordan(tensor: StructureTensor) -> bool:
    """Jordan identity (x^2 y) x = x^2 (y x) for a commutative algebra.

    Coordinates of x are carried symbolically, so every multihomogeneous
    component of the identity is checked exactly; y ranges over the basis,
    which suffices by linearity.
    """
    if not is_commutative(tensor):
        raise NonCommutativeError("the Jordan check needs a commutative algebra")
    n = tensor.dim
    x = [MultiPoly.var(f"_x{i + 1}") for i in range(n)]
    xx = multiply(tensor, x, x)
    for j in range(n):
        y = basis_vector(n, j)
        lhs = multiply(tensor, multiply(tensor, xx, y), x)
        rhs = multiply(tensor, xx, multiply(tensor, y, x))
        if any(not (l - r).is_zero() for l, r in zip(lhs, rhs)):
            return False
    return True

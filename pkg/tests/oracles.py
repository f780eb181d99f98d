"""Independent brute-force oracles, deliberately not importing algvar internals.

Everything here recomputes results from first principles with sympy (or raw
Fraction loops), so the main code path can be checked against an
implementation that shares none of its machinery.
"""

from __future__ import annotations

from fractions import Fraction

import sympy


def mult(constants, x, y):
    """Raw bilinear product: constants[i][j][k] over any sympy-compatible ring."""
    n = len(constants)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if x[i] == 0 or y[j] == 0:
                continue
            for k in range(n):
                out[k] += x[i] * y[j] * constants[i][j][k]
    return [sympy.expand(v) for v in out]


def basis(n, i):
    return [1 if k == i else 0 for k in range(n)]


def trilinear_bracket(a_const, b_const):
    """[A,B](x,y,z) by direct expansion of the six-term formula on basis triples."""
    n = len(a_const)
    out = {}
    for x in range(n):
        for y in range(n):
            for z in range(n):
                ex, ey, ez = basis(n, x), basis(n, y), basis(n, z)
                v = [0] * n
                for sign, f, g in ((1, a_const, b_const), (-1, b_const, a_const)):
                    for term in (mult(f, mult(g, ex, ey), ez),
                                 mult(f, ex, mult(g, ey, ez)),
                                 mult(f, ey, mult(g, ex, ez))):
                        v = [sympy.expand(a + sign * b) for a, b in zip(v, term)]
                out[(x, y, z)] = v
    return out


def rigidity_equation(constants, a, b, x, y, f_ab, phi_ab):
    """Both components of the identity at one (a,b,x,y) specialization.

    Implements the fully expanded form
      b(a(xy)-(ax)y-x(ay)) - a((bx)y) + (a(bx))y + (bx)(ay)
        - a(x(by)) + (ax)(by) + x(a(by))
      = -F(a,b)(xy) + (F(a,b)x)y + x(F(a,b)y) + phi(a,b)(xy)
    and returns lhs - rhs componentwise.
    """
    def m(u, v):
        return mult(constants, u, v)

    xy = m(x, y)
    lhs_inner = [p - q - r for p, q, r in zip(m(a, xy), m(m(a, x), y), m(x, m(a, y)))]
    lhs = [sympy.expand(t1 - t2 + t3 + t4 - t5 + t6 + t7) for t1, t2, t3, t4, t5, t6, t7
           in zip(m(b, lhs_inner),
                  m(a, m(m(b, x), y)),
                  m(m(a, m(b, x)), y),
                  m(m(b, x), m(a, y)),
                  m(a, m(x, m(b, y))),
                  m(m(a, x), m(b, y)),
                  m(x, m(a, m(b, y))))]
    rhs = [sympy.expand(-t1 + t2 + t3 + phi_ab * t4) for t1, t2, t3, t4
           in zip(m(f_ab, xy), m(m(f_ab, x), y), m(x, m(f_ab, y)), xy)]
    return [sympy.expand(l - r) for l, r in zip(lhs, rhs)]


def a1_case_equations():
    """The 16 labeled case equations for the first classification family,
    assembled from the raw expanded identity with symbolic unknowns."""
    al = sympy.Symbol("alpha")
    constants = [[[1, 1], [0, al]], [[0, 1 - al], [0, 0]]]
    lam1, lam2, mu1, mu2, tau1, tau2, nu1, nu2 = sympy.symbols(
        "lam1 lam2 mu1 mu2 tau1 tau2 nu1 nu2")
    p11, p12, p21, p22 = sympy.symbols("phi11 phi12 phi21 phi22")
    f = {(0, 0): [lam1, lam2], (0, 1): [mu1, mu2], (1, 0): [tau1, tau2], (1, 1): [nu1, nu2]}
    phi = {(0, 0): p11, (0, 1): p12, (1, 0): p21, (1, 1): p22}
    cases = {
        "1.a": (0, 0, 0, 0), "1.b": (1, 1, 1, 1),
        "2.a": (0, 1, 0, 0), "2.b": (1, 0, 1, 1),
        "3.a": (1, 0, 0, 0), "3.b": (0, 1, 1, 1),
        "4.a": (0, 0, 1, 0), "4.b": (1, 1, 0, 1),
        "5.a": (0, 0, 0, 1), "5.b": (1, 1, 1, 0),
        "6.a": (1, 1, 0, 0), "6.b": (0, 0, 1, 1),
        "7.a": (0, 1, 0, 1), "7.b": (1, 0, 1, 0),
        "8.a": (1, 0, 0, 1), "8.b": (0, 1, 1, 0),
    }
    out = {}
    for label, (a, b, x, y) in cases.items():
        out[label] = rigidity_equation(
            constants, basis(2, a), basis(2, b), basis(2, x), basis(2, y),
            f[(a, b)], phi[(a, b)])
    return out


def t01_to_t03_constants():
    """Structure constants of the first degeneration row, by sympy linear solve.

    The source products are expanded in the parametrized basis E1 = t e1,
    E2 = t^2 e2 and re-expressed in E-coordinates.
    """
    t = sympy.Symbol("t")
    constants = [[[1, 1], [0, 1]], [[0, 0], [0, 0]]]  # e1e1=e1+e2, e1e2=e2
    e_basis = [[t, 0], [0, t ** 2]]
    m = sympy.Matrix([[e_basis[0][0], e_basis[1][0]], [e_basis[0][1], e_basis[1][1]]])
    out = {}
    for i in range(2):
        for j in range(2):
            v = mult(constants, e_basis[i], e_basis[j])
            sol = m.solve(sympy.Matrix(2, 1, v))
            out[(i, j)] = [sympy.simplify(sol[0]), sympy.simplify(sol[1])]
    return out


def solve_affine_dimension(matrix_rows, rhs):
    """Affine solution dimension of A x = b via sympy, or None if inconsistent."""
    a = sympy.Matrix(matrix_rows)
    b = sympy.Matrix(len(rhs), 1, rhs)
    aug = a.row_join(b)
    if a.rank() != aug.rank():
        return None
    return a.cols - a.rank()


def derivation_dimension(constants):
    """Nullspace dimension of the derivation conditions, assembled raw."""
    n = len(constants)
    rows = []
    for i in range(n):
        for j in range(n):
            for comp in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[comp * n + k] += Fraction(constants[i][j][k])
                for r in range(n):
                    row[r * n + i] -= Fraction(constants[r][j][comp])
                    row[r * n + j] -= Fraction(constants[i][r][comp])
                rows.append([sympy.Rational(x) for x in row])
    m = sympy.Matrix(rows)
    return m.cols - m.rank()

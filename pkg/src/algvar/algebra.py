"""Structure-constant tensors, bracket operations and basis-change invariants.

An n-dimensional algebra is a tensor c[i][j][k]: the coefficient of e_k in
e_i * e_j.  Entries are MultiPoly, so a tensor can carry family parameters;
an instance with constant entries is called numeric here.  Linear maps use
the column convention: column j is the image of e_j.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from . import linalg
from .poly import MultiPoly, parse_poly

Entry = Union[int, Fraction, MultiPoly]
Vector = Sequence[Entry]


class DimensionMismatchError(ValueError):
    """Raised when operand dimensions disagree."""


class SingularMatrixError(ValueError):
    """Raised when a basis-change matrix is not invertible."""


def as_poly(value: Entry) -> MultiPoly:
    return value if isinstance(value, MultiPoly) else MultiPoly.const(value)


def _as_vector(values: Vector, dim: int) -> list[MultiPoly]:
    vec = [as_poly(v) for v in values]
    if len(vec) != dim:
        raise DimensionMismatchError(f"expected a vector of length {dim}, got {len(vec)}")
    return vec


def basis_vector(dim: int, index: int) -> list[MultiPoly]:
    return [MultiPoly.const(1 if k == index else 0) for k in range(dim)]


class StructureTensor:
    """Multiplication tensor of an n-dimensional algebra (also any bilinear map)."""

    __slots__ = ("dim", "c")

    def __init__(self, c: Sequence[Sequence[Sequence[Entry]]]):
        dim = len(c)
        rows = []
        for i in range(dim):
            if len(c[i]) != dim:
                raise DimensionMismatchError("tensor is not cubical")
            row = []
            for j in range(dim):
                if len(c[i][j]) != dim:
                    raise DimensionMismatchError("tensor is not cubical")
                row.append([as_poly(v) for v in c[i][j]])
            rows.append(row)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "c", rows)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("StructureTensor is immutable")

    @staticmethod
    def zero(dim: int) -> "StructureTensor":
        z = MultiPoly.const(0)
        return StructureTensor([[[z] * dim for _ in range(dim)] for _ in range(dim)])

    @staticmethod
    def from_strings(entries: Sequence[Sequence[Sequence[str]]]) -> "StructureTensor":
        return StructureTensor(
            [[[parse_poly(s) for s in entries[i][j]] for j in range(len(entries))]
             for i in range(len(entries))]
        )

    def is_numeric(self) -> bool:
        return all(e.is_constant() for plane in self.c for row in plane for e in row)

    def entry(self, i: int, j: int, k: int) -> MultiPoly:
        return self.c[i][j][k]

    def substitute(self, mapping) -> "StructureTensor":
        return StructureTensor(
            [[[e.substitute(mapping) for e in row] for row in plane] for plane in self.c]
        )

    def parameters(self) -> tuple[str, ...]:
        names: list[str] = []
        for plane in self.c:
            for row in plane:
                for e in row:
                    for v in e.variables_used():
                        if v not in names:
                            names.append(v)
        return tuple(names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureTensor):
            return NotImplemented
        if self.dim != other.dim:
            return False
        n = self.dim
        return all(self.c[i][j][k] == other.c[i][j][k]
                   for i in range(n) for j in range(n) for k in range(n))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "constants": [[[str(e) for e in row] for row in plane] for plane in self.c],
        }

    @staticmethod
    def from_json(doc: dict) -> "StructureTensor":
        dim = int(doc["dim"])
        constants = doc["constants"]
        if len(constants) != dim:
            raise DimensionMismatchError("constants array does not match dim")
        return StructureTensor.from_strings(constants)

    def __repr__(self) -> str:
        cells = []
        for i in range(self.dim):
            for j in range(self.dim):
                parts = [f"{self.c[i][j][k]}*e{k + 1}" for k in range(self.dim)
                         if not self.c[i][j][k].is_zero()]
                if parts:
                    cells.append(f"e{i + 1}e{j + 1}=" + "+".join(parts))
        return "StructureTensor(" + ", ".join(cells or ["0"]) + ")"


# A bilinear map V x V -> V has exactly the shape of a multiplication tensor.
BilinearMap = StructureTensor


class LinearMap:
    """Square matrix acting on coordinates; column j is the image of e_j."""

    __slots__ = ("dim", "m")

    def __init__(self, m: Sequence[Sequence[Entry]]):
        dim = len(m)
        rows = []
        for row in m:
            if len(row) != dim:
                raise DimensionMismatchError("matrix is not square")
            rows.append([as_poly(v) for v in row])
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "m", rows)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("LinearMap is immutable")

    @staticmethod
    def identity(dim: int) -> "LinearMap":
        return LinearMap([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @staticmethod
    def from_columns(cols: Sequence[Vector]) -> "LinearMap":
        dim = len(cols)
        return LinearMap([[as_poly(cols[j][i]) for j in range(dim)] for i in range(dim)])

    def column(self, j: int) -> list[MultiPoly]:
        return [self.m[i][j] for i in range(self.dim)]

    def apply(self, vec: Vector) -> list[MultiPoly]:
        v = _as_vector(vec, self.dim)
        return [sum((self.m[i][j] * v[j] for j in range(self.dim)), MultiPoly.const(0))
                for i in range(self.dim)]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Matrix product self . other."""
        if self.dim != other.dim:
            raise DimensionMismatchError("composition dimensions differ")
        n = self.dim
        return LinearMap([[sum((self.m[i][k] * other.m[k][j] for k in range(n)),
                               MultiPoly.const(0)) for j in range(n)] for i in range(n)])

    def is_numeric(self) -> bool:
        return all(e.is_constant() for row in self.m for e in row)

    def numeric_rows(self) -> list[list[Fraction]]:
        return [[e.constant_value() for e in row] for row in self.m]

    def is_triangular(self) -> str | None:
        n = self.dim
        lower = all(self.m[i][j].is_zero() for i in range(n) for j in range(i + 1, n))
        upper = all(self.m[i][j].is_zero() for j in range(n) for i in range(j + 1, n))
        if lower:
            return "lower"
        if upper:
            return "upper"
        return None

    def inverse(self) -> "LinearMap":
        """Exact inverse.

        Numeric matrices invert directly.  Symbolic matrices invert only when
        triangular with nonzero constant diagonal; anything else must supply
        an explicit inverse to change_basis.
        """
        n = self.dim
        if self.is_numeric():
            rows = self.numeric_rows()
            try:
                inv = linalg.invert(rows)
            except ZeroDivisionError as exc:
                raise SingularMatrixError(str(exc)) from exc
            return LinearMap(inv)
        shape = self.is_triangular()
        if shape is None:
            raise SingularMatrixError("symbolic inverse needs a triangular matrix "
                                      "or an explicit inverse")
        diag = [self.m[i][i] for i in range(n)]
        if not all(d.is_constant() and d.constant_value() for d in diag):
            raise SingularMatrixError("symbolic triangular inverse needs nonzero "
                                      "constant diagonal entries")
        inv = [[MultiPoly.const(0) for _ in range(n)] for _ in range(n)]
        order = range(n) if shape == "lower" else range(n - 1, -1, -1)
        for col in range(n):
            x = [MultiPoly.const(0)] * n
            for i in order:
                rhs = MultiPoly.const(1 if i == col else 0)
                rhs = rhs - sum((self.m[i][j] * x[j] for j in range(n) if j != i),
                                MultiPoly.const(0))
                x[i] = rhs.exact_div(diag[i].constant_value())
            for i in range(n):
                inv[i][col] = x[i]
        return LinearMap(inv)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.dim == other.dim and all(
            self.m[i][j] == other.m[i][j] for i in range(self.dim) for j in range(self.dim))

    def __repr__(self) -> str:
        return "LinearMap(" + "; ".join(
            ", ".join(str(e) for e in row) for row in self.m) + ")"


class BilinearForm:
    """Scalar-valued bilinear form phi[i][j] = phi(e_i, e_j)."""

    __slots__ = ("dim", "phi")

    def __init__(self, phi: Sequence[Sequence[Entry]]):
        dim = len(phi)
        rows = []
        for row in phi:
            if len(row) != dim:
                raise DimensionMismatchError("form matrix is not square")
            rows.append([as_poly(v) for v in row])
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "phi", rows)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("BilinearForm is immutable")

    @staticmethod
    def zero(dim: int) -> "BilinearForm":
        return BilinearForm([[0] * dim for _ in range(dim)])

    def value(self, i: int, j: int) -> MultiPoly:
        return self.phi[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.dim == other.dim and all(
            self.phi[i][j] == other.phi[i][j]
            for i in range(self.dim) for j in range(self.dim))

    def __repr__(self) -> str:
        return "BilinearForm(" + "; ".join(
            ", ".join(str(e) for e in row) for row in self.phi) + ")"


class Trilinear:
    """Dense n^3 x n array for results of the bilinear-bilinear bracket."""

    __slots__ = ("dim", "t")

    def __init__(self, t):
        object.__setattr__(self, "dim", len(t))
        object.__setattr__(self, "t", t)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Trilinear is immutable")

    def entry(self, x: int, y: int, z: int) -> list[MultiPoly]:
        return self.t[x][y][z]

    def is_zero(self) -> bool:
        n = self.dim
        return all(self.t[x][y][z][k].is_zero()
                   for x in range(n) for y in range(n) for z in range(n) for k in range(n))

    def nonzero_entries(self) -> list[MultiPoly]:
        n = self.dim
        return [self.t[x][y][z][k]
                for x in range(n) for y in range(n) for z in range(n) for k in range(n)
                if not self.t[x][y][z][k].is_zero()]


# -- operations ----------------------------------------------------------


def multiply(tensor: StructureTensor, x: Vector, y: Vector) -> list[MultiPoly]:
    """Product of two coordinate vectors: (x*y)_k = sum x_i y_j c_ijk."""
    n = tensor.dim
    xv = _as_vector(x, n)
    yv = _as_vector(y, n)
    out = [MultiPoly.const(0) for _ in range(n)]
    for i in range(n):
        if xv[i].is_zero():
            continue
        for j in range(n):
            if yv[j].is_zero():
                continue
            coeff = xv[i] * yv[j]
            for k in range(n):
                if not tensor.c[i][j][k].is_zero():
                    out[k] = out[k] + coeff * tensor.c[i][j][k]
    return out


def left_mult(tensor: StructureTensor, a: Vector) -> LinearMap:
    """Operator of left multiplication by a."""
    n = tensor.dim
    cols = [multiply(tensor, a, basis_vector(n, j)) for j in range(n)]
    return LinearMap.from_columns(cols)


def slice_map(bilinear: BilinearMap, a: Vector) -> LinearMap:
    """Curry a bilinear map in its first slot: x -> B(a, x)."""
    return left_mult(bilinear, a)


def bracket_lin_bil(a: LinearMap, b: BilinearMap) -> BilinearMap:
    """(x, y) -> A(B(x,y)) - B(A(x), y) - B(x, A(y))."""
    if a.dim != b.dim:
        raise DimensionMismatchError("bracket dimensions differ")
    n = a.dim
    out = []
    for i in range(n):
        row = []
        ei = basis_vector(n, i)
        ai = a.column(i)
        for j in range(n):
            ej = basis_vector(n, j)
            aj = a.column(j)
            v1 = a.apply(multiply(b, ei, ej))
            v2 = multiply(b, ai, ej)
            v3 = multiply(b, ei, aj)
            row.append([v1[k] - v2[k] - v3[k] for k in range(n)])
        out.append(row)
    return BilinearMap(out)


def bracket_bil_bil(a: BilinearMap, b: BilinearMap) -> Trilinear:
    """Six-term bracket of two bilinear maps, a trilinear map on V^3."""
    if a.dim != b.dim:
        raise DimensionMismatchError("bracket dimensions differ")
    n = a.dim
    basis = [basis_vector(n, i) for i in range(n)]
    out = []
    for x in range(n):
        plane = []
        for y in range(n):
            row = []
            for z in range(n):
                ex, ey, ez = basis[x], basis[y], basis[z]
                v = [MultiPoly.const(0)] * n
                for sign, f, g in ((1, a, b), (-1, b, a)):
                    t1 = multiply(f, multiply(g, ex, ey), ez)
                    t2 = multiply(f, ex, multiply(g, ey, ez))
                    t3 = multiply(f, ey, multiply(g, ex, ez))
                    v = [v[k] + sign * (t1[k] + t2[k] + t3[k]) for k in range(n)]
                row.append(v)
            plane.append(row)
        out.append(plane)
    return Trilinear(out)


def change_basis(tensor: StructureTensor, g: LinearMap,
                 g_inv: LinearMap | None = None) -> StructureTensor:
    """Structure constants in the basis E_j = g(e_j).

    Satisfies change_basis(T, g.compose(h)) == change_basis(change_basis(T, g), h).
    A symbolic g needs either a triangular shape with constant nonzero
    diagonal or an explicit g_inv.
    """
    if g.dim != tensor.dim:
        raise DimensionMismatchError("basis matrix dimension differs from tensor")
    inv = g_inv if g_inv is not None else g.inverse()
    n = tensor.dim
    out = []
    for i in range(n):
        row = []
        gi = g.column(i)
        for j in range(n):
            product = multiply(tensor, gi, g.column(j))
            row.append(inv.apply(product))
        out.append(row)
    return StructureTensor(out)


def derivation_algebra_dim(tensor: StructureTensor) -> int:
    """Dimension of {D : D(xy) = D(x)y + xD(y)} by exact nullspace.

    Over characteristic zero this equals the automorphism group dimension,
    which is how the degeneration graph levels are computed.
    """
    if not tensor.is_numeric():
        raise ValueError("derivation dimension needs a numeric tensor")
    n = tensor.dim
    c = [[[tensor.c[i][j][k].constant_value() for k in range(n)]
          for j in range(n)] for i in range(n)]
    # unknowns d[r][s] flattened as r * n + s  (column s = image of e_s)
    rows = []
    for i in range(n):
        for j in range(n):
            for comp in range(n):
                row = [Fraction(0)] * (n * n)
                # D(e_i e_j) component: sum_k c_ijk d[comp][k]
                for k in range(n):
                    row[comp * n + k] += c[i][j][k]
                # - D(e_i) e_j: sum_r d[r][i] c_rj^comp
                for r in range(n):
                    row[r * n + i] -= c[r][j][comp]
                # - e_i D(e_j): sum_r d[r][j] c_ir^comp
                for r in range(n):
                    row[r * n + j] -= c[i][r][comp]
                rows.append(row)
    return len(linalg.nullspace(rows, n * n))


def product_span_dim(tensor: StructureTensor) -> int:
    """Rank of the n^2 x n matrix whose rows are all basis products."""
    if not tensor.is_numeric():
        raise ValueError("product span dimension needs a numeric tensor")
    n = tensor.dim
    rows = [[tensor.c[i][j][k].constant_value() for k in range(n)]
            for i in range(n) for j in range(n)]
    return linalg.rank(rows)


def commutator_span_dim(tensor: StructureTensor) -> int:
    """Rank of the span of e_i e_j - e_j e_i (diagnostic, not used in checks)."""
    if not tensor.is_numeric():
        raise ValueError("commutator span dimension needs a numeric tensor")
    n = tensor.dim
    rows = [[(tensor.c[i][j][k] - tensor.c[j][i][k]).constant_value() for k in range(n)]
            for i in range(n) for j in range(n)]
    return linalg.rank(rows)

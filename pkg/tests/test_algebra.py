"""Structure tensors, brackets, basis change and the two graph invariants."""

from fractions import Fraction
from random import Random

import pytest

from algvar.algebra import (
    DimensionMismatchError,
    LinearMap,
    SingularMatrixError,
    StructureTensor,
    basis_vector,
    bracket_bil_bil,
    bracket_lin_bil,
    change_basis,
    commutator_span_dim,
    derivation_algebra_dim,
    left_mult,
    multiply,
    product_span_dim,
    slice_map,
)
from algvar.poly import MultiPoly, parse_poly

import oracles


@pytest.fixture(scope="module")
def t09(catalog):
    return catalog["T09"].instantiate({})


@pytest.fixture(scope="module")
def t03(catalog):
    return catalog["T03"].instantiate({})


def test_multiply_examples(catalog, t09):
    assert multiply(t09, [1, 0], [0, 1]) == [MultiPoly.const(0)] * 2
    assert multiply(t09, [0, 0], [3, 5]) == [MultiPoly.const(0)] * 2
    a1 = catalog["A1"].tensor
    result = multiply(a1, [0, 1], [1, 0])
    assert result[0].is_zero() and result[1] == parse_poly("1 - alpha")


def test_multiply_dimension_mismatch(t09):
    with pytest.raises(DimensionMismatchError):
        multiply(t09, [1, 0, 0], [0, 1])


def test_left_mult_examples(catalog, t09):
    assert left_mult(t09, [1, 0]) == LinearMap([[1, 0], [0, 0]])
    assert left_mult(t09, [0, 0]) == LinearMap([[0, 0], [0, 0]])
    b3 = catalog["B3"].instantiate({})
    l2 = left_mult(b3, [0, 1])
    assert l2.apply([1, 0]) == [MultiPoly.const(0), MultiPoly.const(-1)]
    assert l2.apply([0, 1]) == [MultiPoly.const(0)] * 2


def test_slice_coincides_with_left_mult(catalog, t09):
    assert slice_map(t09, [1, 0]) == left_mult(t09, [1, 0])
    assert slice_map(t09, [0, 0]) == LinearMap([[0, 0], [0, 0]])
    a3 = catalog["A3"].instantiate({})
    s = slice_map(a3, [1, 0])
    assert s.apply([1, 0]) == [MultiPoly.const(0), MultiPoly.const(1)]
    assert s.apply([0, 1]) == [MultiPoly.const(0)] * 2


def test_bracket_lin_bil_identity_cases(catalog, t09):
    any_b = catalog["A1"].instantiate({"alpha": 3})
    minus_b = bracket_lin_bil(LinearMap.identity(2), any_b)
    assert all(minus_b.c[i][j][k] == -any_b.c[i][j][k]
               for i in range(2) for j in range(2) for k in range(2))
    zero = bracket_lin_bil(LinearMap([[0, 0], [0, 0]]), any_b)
    assert all(zero.c[i][j][k].is_zero()
               for i in range(2) for j in range(2) for k in range(2))
    # [L_{e1}, product] of the two-idempotent algebra sends (e1,e1) to -e1 only
    br = bracket_lin_bil(left_mult(t09, [1, 0]), t09)
    assert br.c[0][0][0] == -1 and br.c[0][0][1].is_zero()
    assert all(br.c[i][j][k].is_zero()
               for (i, j) in ((0, 1), (1, 0), (1, 1)) for k in range(2))


def test_bracket_bil_bil_zero_cases(catalog, t03):
    zero = StructureTensor.zero(2)
    assert bracket_bil_bil(zero, zero).is_zero()
    assert bracket_bil_bil(zero, t03).is_zero()
    assert bracket_bil_bil(t03, t03).is_zero()


def test_bracket_bil_bil_matches_oracle(catalog, t03, t09):
    for tensor in (t03, t09, catalog["T06"].instantiate({})):
        consts = [[[tensor.c[i][j][k].constant_value() for k in range(2)]
                   for j in range(2)] for i in range(2)]
        expected = oracles.trilinear_bracket(consts, consts)
        got = bracket_bil_bil(tensor, tensor)
        for (x, y, z), vec in expected.items():
            for k in range(2):
                assert got.t[x][y][z][k].constant_value() == Fraction(str(vec[k]))


def _random_invertible(rng: Random) -> LinearMap:
    while True:
        entries = [[Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(2)]
                   for _ in range(2)]
        if entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0] != 0:
            return LinearMap(entries)


def test_change_basis_examples(catalog, t09):
    assert change_basis(t09, LinearMap.identity(2)) == t09
    scaled = change_basis(t09, LinearMap([[3, 0], [0, 3]]))
    assert scaled.c[0][0][0] == 3  # all constants pick up the scale factor
    t01 = catalog["T01"].instantiate({})
    g = LinearMap([[1, 1], [0, parse_poly("s")]])
    with pytest.raises(SingularMatrixError):
        change_basis(t01, g)  # symbolic diagonal needs an explicit inverse


def test_change_basis_reproduces_t10_limit(catalog):
    # E1 = e1, E2 = e1 + s e2 applied to the first terminal algebra gives
    # constants whose limit (s standing for 1/t, t -> 0 meaning dropping
    # the 1/s terms) is the distinguished one-parameter family at alpha=1
    t01 = catalog["T01"].instantiate({})
    g = LinearMap([[1, 1], [0, parse_poly("s")]])
    g_inv = LinearMap([[1, parse_poly("-si")], [0, parse_poly("si")]])
    moved = change_basis(t01, g, g_inv=g_inv)
    cleaned = StructureTensor(
        [[[moved.c[i][j][k].cancel_inverse_pairs([("s", "si")]) for k in range(2)]
          for j in range(2)] for i in range(2)])
    # dropping the si terms (the t-part) leaves exactly T10(1)
    limit = StructureTensor(
        [[[cleaned.c[i][j][k].substitute({"si": 0}) for k in range(2)]
          for j in range(2)] for i in range(2)])
    assert limit == catalog["T10"].instantiate({"alpha": 1})


def test_change_basis_composition(catalog):
    rng = Random(5)
    tensor = catalog["T05"].instantiate({})
    for _ in range(20):
        g = _random_invertible(rng)
        h = _random_invertible(rng)
        assert change_basis(tensor, g.compose(h)) == change_basis(change_basis(tensor, g), h)


def test_change_basis_inverse_roundtrip(catalog):
    rng = Random(9)
    for name in ("T01", "T06", "T09"):
        tensor = catalog[name].instantiate({})
        for _ in range(10):
            g = _random_invertible(rng)
            assert change_basis(change_basis(tensor, g), g.inverse()) == tensor


def test_derivation_dims_match_strata(catalog):
    assert derivation_algebra_dim(catalog["K2"].instantiate({})) == 4
    assert derivation_algebra_dim(catalog["T09"].instantiate({})) == 0
    assert derivation_algebra_dim(catalog["T03"].instantiate({})) == 2


def test_derivation_dim_matches_oracle(catalog):
    for name in ("T01", "T04", "T06", "T09", "K2"):
        tensor = catalog[name].instantiate({})
        consts = [[[tensor.c[i][j][k].constant_value() for k in range(2)]
                   for j in range(2)] for i in range(2)]
        assert derivation_algebra_dim(tensor) == oracles.derivation_dimension(consts)


def test_product_span_dims(catalog):
    assert product_span_dim(catalog["K2"].instantiate({})) == 0
    assert product_span_dim(catalog["T03"].instantiate({})) == 1
    assert product_span_dim(catalog["T09"].instantiate({})) == 2
    # the commutator-span diagnostic vanishes exactly for commutative algebras
    assert commutator_span_dim(catalog["T09"].instantiate({})) == 0
    assert commutator_span_dim(catalog["T06"].instantiate({})) == 1


def test_invariants_stable_under_basis_change(catalog):
    rng = Random(31)
    for name in ("T01", "T07", "T10", "T09"):
        fam = catalog[name]
        point = fam.sample(1, 3)[0] if fam.params else {}
        tensor = fam.instantiate({k: v for k, v in point.items() if k in fam.params})
        d = derivation_algebra_dim(tensor)
        s = product_span_dim(tensor)
        for _ in range(50):
            g = _random_invertible(rng)
            moved = change_basis(tensor, g)
            assert derivation_algebra_dim(moved) == d
            assert product_span_dim(moved) == s


def test_json_roundtrip(catalog):
    tensor = catalog["T08"].tensor
    doc = tensor.to_json()
    assert doc["dim"] == 2
    assert StructureTensor.from_json(doc) == tensor

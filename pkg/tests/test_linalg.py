"""Exact linear algebra: rank, nullspace, affine solve, inverse."""

from fractions import Fraction
from random import Random

import pytest

from algvar import linalg


def F(x):
    return Fraction(x)


def test_rank_and_nullspace():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    assert linalg.rank(rows) == 2
    basis = linalg.nullspace(rows)
    assert len(basis) == 1
    v = basis[0]
    for row in rows:
        assert sum(a * b for a, b in zip(row, v)) == 0


def test_nullspace_full_and_empty():
    assert len(linalg.nullspace([], ncols=4)) == 4
    rows = [[F(1), F(0)], [F(0), F(1)]]
    assert linalg.nullspace(rows) == []


def test_solve_affine_consistent():
    a = [[F(1), F(1), F(0)], [F(0), F(1), F(1)]]
    b = [F(3), F(5)]
    particular, basis, free = linalg.solve_affine(a, b)
    assert free == [2]  # trailing unknown stays free
    assert len(basis) == 1
    for row, rhs in zip(a, b):
        assert sum(x * y for x, y in zip(row, particular)) == rhs
        assert sum(x * y for x, y in zip(row, basis[0])) == 0


def test_solve_affine_inconsistent():
    a = [[F(1), F(1)], [F(1), F(1)]]
    assert linalg.solve_affine(a, [F(1), F(2)]) is None


def test_invert_and_det():
    m = [[F(2), F(1)], [F(1), F(1)]]
    inv = linalg.invert(m)
    assert inv == [[F(1), F(-1)], [F(-1), F(2)]]
    assert linalg.det(m) == 1
    assert linalg.det([[F(1), F(2)], [F(2), F(4)]]) == 0
    with pytest.raises(ZeroDivisionError):
        linalg.invert([[F(1), F(2)], [F(2), F(4)]])


def test_bareiss_matches_rational_elimination():
    rng = Random(42)
    for _ in range(100):
        nrows = rng.randint(1, 5)
        ncols = rng.randint(1, 5)
        rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(ncols)]
                for _ in range(nrows)]
        _, pivots = linalg.rref(rows)
        assert linalg.rank(rows) == len(pivots)
        for v in linalg.nullspace(rows, ncols):
            for row in rows:
                assert sum(a * b for a, b in zip(row, v)) == 0

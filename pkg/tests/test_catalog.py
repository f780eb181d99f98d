"""Catalog data: instantiation, constraints, sampling, aliases, conjectures."""

from fractions import Fraction

import pytest

from algvar.algebra import LinearMap, change_basis
from algvar.catalog import (
    ConstraintViolation,
    SamplingExhausted,
    conjecture_family,
    gamma_functions,
    pair_determinant,
    same_orbit_params,
)
from algvar.identity import is_terminal


def test_instantiate_examples(catalog):
    t = catalog["A1"].instantiate({"alpha": 1})
    assert t == catalog["T01"].instantiate({})
    e5 = catalog["E5"].instantiate({"alpha": 0})
    assert e5.c[0][1][0] == 1 and e5.c[1][0][1] == 1  # e1e2=e1, e2e1=e2


def test_instantiate_constraint_violation(catalog):
    with pytest.raises(ConstraintViolation) as err:
        catalog["D2"].instantiate({"alpha": 1, "beta": 0})
    assert "alpha + beta - 1" in str(err.value)
    with pytest.raises(ConstraintViolation):
        catalog["E3"].instantiate({"alpha": 1, "beta": 1, "gamma": 0})
    with pytest.raises(ConstraintViolation):
        catalog["T07"].instantiate({"alpha": 1})
    with pytest.raises(ConstraintViolation):
        catalog["T08"].instantiate({"alpha": Fraction(3, 2)})
    with pytest.raises(ConstraintViolation):
        catalog["A1"].instantiate({})  # missing parameter
    with pytest.raises(ConstraintViolation):
        catalog["A3"].instantiate({"bogus": 1})


def test_gamma_functions():
    det, c1, c2, c3 = gamma_functions((0, 0, 0, 0))
    assert det == -1 and c1 == (0, 0) and c2 == (0, 0) and c3 == (1, 1)
    assert gamma_functions((0, 2, 3, 0))[0] == 5
    with pytest.raises(ZeroDivisionError):
        gamma_functions((0, 1, 1, 0))
    assert pair_determinant((1, 0, 0, 1)) == 0


def test_sampling(catalog):
    pts = catalog["T07"].sample(3, 42)
    assert len(pts) == 3 and all(p["alpha"] != 1 for p in pts)
    assert pts == catalog["T07"].sample(3, 42)  # deterministic
    p = catalog["E1"].sample(1, 7)[0]
    gamma = (p["alpha"], p["beta"], p["gamma"], p["delta"])
    assert pair_determinant(gamma) != 0
    assert p["beta"] + p["delta"] != 1 and p["gamma"] + p["alpha"] != 1
    assert catalog["K2"].sample(1, 0) == [{}]
    e3 = catalog["E3"].sample(2, 5)
    for pt in e3:
        assert pt["gamma"] not in (0, 1)
        assert pt["gamma_inv"] == 1 / pt["gamma"]


def test_sampling_exhaustion(catalog):
    impossible = catalog["A1"]
    # a family whose constraint can never hold exhausts the rejection budget
    from algvar.catalog import Family, ParamConstraint
    from algvar.poly import parse_poly
    bad = Family(name="bad", dim=2, params=("alpha",), tensor=impossible.tensor,
                 constraints=[ParamConstraint("equation", parse_poly("1"))])
    with pytest.raises(SamplingExhausted):
        bad.sample(1, 0, max_rejections=10)


def test_alias_coherence_all_rows(catalog):
    for table in (2, 3, 4):
        for fam in catalog.rows(table):
            origin_name, omap = fam.origin
            origin = catalog[origin_name]
            points = fam.sample(10, 1234) if fam.params else [{}]
            for pt in points:
                own = fam.instantiate({k: v for k, v in pt.items() if k in fam.params})
                oparams = {k: expr.evaluate(pt) for k, expr in omap.items()}
                assert own == origin.instantiate(oparams), (fam.name, pt)


def test_conjecture_families(catalog):
    assert conjecture_family("direct-sum", 2) == catalog["T09"].instantiate({})
    nu2 = conjecture_family("nu", 2, Fraction(1, 3))
    base_change = LinearMap.from_columns([[1, 0], [1, -1]])
    assert change_basis(nu2, base_change) == catalog["T10"].instantiate(
        {"alpha": Fraction(1, 3)})
    nu3 = conjecture_family("nu", 3, Fraction(1, 3))
    assert nu3.c[0][1][1] == Fraction(1, 3)
    assert nu3.c[1][0][1] == Fraction(2, 3)
    with pytest.raises(ValueError):
        conjecture_family("nu", 3)
    with pytest.raises(ValueError):
        conjecture_family("direct-sum", 1)


def test_conjecture_families_terminal_small_dims():
    for n in (2, 3, 4):
        assert is_terminal(conjecture_family("direct-sum", n)).verdict == "yes"
        for k in range(3):
            alpha = Fraction(2 * k + 1, 3)
            assert is_terminal(conjecture_family("nu", n, alpha)).verdict == "yes"


def test_same_orbit_params():
    assert same_orbit_params("A4", {"alpha": 2}, {"alpha": -2})
    assert not same_orbit_params("A4", {"alpha": 2}, {"alpha": 3})
    assert same_orbit_params("D1", {"alpha": 1, "beta": 0}, {"alpha": 0, "beta": 0})
    assert same_orbit_params("E3", {"alpha": 1, "beta": 0, "gamma": 2},
                             {"alpha": 0, "beta": 1, "gamma": Fraction(1, 2)})
    assert same_orbit_params(
        "E1",
        {"alpha": 0, "beta": 2, "gamma": 3, "delta": 0},
        {"alpha": 0, "beta": 2, "gamma": 3, "delta": 0})


def test_witness_bank_verifies(catalog):
    from algvar.identity import verify_witness
    for row, data in sorted(catalog.witnesses.items()):
        fam = catalog[row]
        f, phi = data.as_maps()
        pairs = data.inverse_pairs or fam.inverse_pairs()
        assert verify_witness(fam.tensor, f, phi, denominator=data.denominator,
                              inverse_pairs=pairs), row
        if data.kind == "conservative":
            assert all(v.is_zero() for v in data.phi_values)

"""Machine-readable catalog of the classification tables.

Families are data, not code: one JSON document per table under the package
data directory (overridable via the ALGVAR_DATA environment variable), so
every multiplication table and constraint can be audited line by line.

A family row carries named parameters, polynomial constraints (equations and
inequations over the rationals), optional derived parameters (inverses, for
rows whose constants involve 1/gamma), and, for rows of the derived tables,
the name and parameter substitution of their origin in the base table.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from random import Random
from typing import Mapping

from .algebra import StructureTensor
from .poly import MultiPoly, parse_poly

TABLE_FILES = {1: "table1.json", 2: "table2.json", 3: "table3.json", 4: "table4.json"}


class ConstraintViolation(ValueError):
    """Raised when parameters violate a family constraint; names the constraint."""


class SamplingExhausted(RuntimeError):
    """Raised when rejection sampling cannot find admissible parameters."""


@dataclass(frozen=True)
class ParamConstraint:
    kind: str  # "equation" | "inequation"
    poly: MultiPoly
    note: str = ""

    def holds(self, values: Mapping[str, Fraction]) -> bool:
        v = self.poly.evaluate(values)
        return v == 0 if self.kind == "equation" else v != 0

    def describe(self) -> str:
        rel = "=" if self.kind == "equation" else "!="
        text = f"{self.poly} {rel} 0"
        return f"{text} ({self.note})" if self.note else text


@dataclass(frozen=True)
class DerivedParam:
    name: str
    inverse_of: str


@dataclass
class Family:
    """A (possibly parametric) multiplication table with its admissible set."""

    name: str
    dim: int
    params: tuple[str, ...]
    tensor: StructureTensor
    constraints: list[ParamConstraint] = field(default_factory=list)
    derived: list[DerivedParam] = field(default_factory=list)
    source_table: int | None = None
    origin: tuple[str, dict[str, MultiPoly]] | None = None

    def inverse_pairs(self) -> list[tuple[str, str]]:
        return [(d.inverse_of, d.name) for d in self.derived]

    def domain_inequations(self) -> list[MultiPoly]:
        out = [c.poly for c in self.constraints if c.kind == "inequation"]
        for d in self.derived:
            out.append(MultiPoly.var(d.inverse_of))
        return out

    def full_values(self, params: Mapping[str, Fraction]) -> dict[str, Fraction]:
        """Parameter assignment extended with derived inverses, checked exactly."""
        values = {}
        for p in self.params:
            if p not in params:
                raise ConstraintViolation(f"{self.name}: missing parameter {p}")
            values[p] = Fraction(params[p])
        extra = set(params) - set(self.params)
        if extra:
            raise ConstraintViolation(f"{self.name}: unknown parameters {sorted(extra)}")
        for d in self.derived:
            base = values[d.inverse_of]
            if base == 0:
                raise ConstraintViolation(
                    f"{self.name}: {d.inverse_of} = 0 has no inverse ({d.name})")
            values[d.name] = 1 / base
        return values

    def instantiate(self, params: Mapping[str, Fraction] | None = None) -> StructureTensor:
        values = self.full_values(params or {})
        for c in self.constraints:
            if not c.holds(values):
                raise ConstraintViolation(f"{self.name}: constraint violated: {c.describe()}")
        return self.tensor.substitute(values)

    def sample(self, count: int, seed: int, max_rejections: int = 400) -> list[dict[str, Fraction]]:
        """Deterministic admissible parameter points by rejection sampling."""
        if count < 1:
            raise ValueError("count must be at least 1")
        rng = Random(seed)
        points: list[dict[str, Fraction]] = []
        seen: set[tuple] = set()
        rejections = 0
        while len(points) < count:
            candidate = {p: Fraction(rng.randint(-12, 12), rng.randint(1, 6))
                         for p in self.params}
            key = tuple(sorted(candidate.items()))
            try:
                values = self.full_values(candidate)
                ok = all(c.holds(values) for c in self.constraints) and key not in seen
            except ConstraintViolation:
                ok = False
            if ok:
                seen.add(key)
                points.append(values)
            else:
                rejections += 1
                if rejections > max_rejections * count:
                    raise SamplingExhausted(
                        f"{self.name}: no admissible parameters after {rejections} rejections")
        return points


def _parse_family(doc: dict, dim: int = 2, source_table: int | None = None) -> Family:
    constants = doc["constants"]
    tensor = StructureTensor.from_strings(constants)
    constraints = [
        ParamConstraint(kind=c["kind"], poly=parse_poly(c["poly"]), note=c.get("note", ""))
        for c in doc.get("constraints", [])
    ]
    derived = [DerivedParam(name=d["name"], inverse_of=d["inverse_of"])
               for d in doc.get("derived", [])]
    origin = None
    if "origin" in doc:
        origin = (doc["origin"]["family"],
                  {k: parse_poly(v) for k, v in doc["origin"]["params"].items()})
    return Family(
        name=doc["name"],
        dim=dim,
        params=tuple(doc.get("params", [])),
        tensor=tensor,
        constraints=constraints,
        derived=derived,
        source_table=source_table,
        origin=origin,
    )


def _zero_algebra(dim: int = 2) -> Family:
    return Family(name="K2", dim=dim, params=(), tensor=StructureTensor.zero(dim),
                  source_table=None)


@dataclass
class WitnessData:
    """A displayed general solution (F, phi) for one classification row."""

    row: str
    kind: str  # "rigid" | "conservative"
    f_rows: list[list[MultiPoly]]
    phi_values: list[MultiPoly]
    denominator: MultiPoly | None
    free_symbols: list[str]
    inverse_pairs: list[tuple[str, str]]

    def as_maps(self):
        from .algebra import BilinearForm, BilinearMap
        f = BilinearMap([[self.f_rows[0], self.f_rows[1]], [self.f_rows[2], self.f_rows[3]]])
        p = self.phi_values
        phi = BilinearForm([[p[0], p[1]], [p[2], p[3]]])
        return f, phi


class Catalog:
    """All table rows keyed by name, with table membership lists."""

    def __init__(self, families: dict[str, Family], tables: dict[int, list[str]],
                 witnesses: dict[str, WitnessData]):
        self.families = families
        self.tables = tables
        self.witnesses = witnesses

    def __getitem__(self, name: str) -> Family:
        return self.families[name]

    def rows(self, table: int) -> list[Family]:
        return [self.families[name] for name in self.tables[table]]

    def witness_for(self, row: str) -> WitnessData | None:
        return self.witnesses.get(row)


def data_dir() -> str | None:
    """Directory overriding the packaged catalog, from ALGVAR_DATA."""
    return os.environ.get("ALGVAR_DATA") or None


def _read_json(filename: str, directory: str | None):
    if directory:
        with open(os.path.join(directory, filename), "r", encoding="utf-8") as fh:
            return json.load(fh)
    ref = resources.files("algvar.data").joinpath(filename)
    return json.loads(ref.read_text(encoding="utf-8"))


def load_catalog(directory: str | None = None) -> Catalog:
    directory = directory if directory is not None else data_dir()
    families: dict[str, Family] = {}
    tables: dict[int, list[str]] = {}
    for table, filename in TABLE_FILES.items():
        doc = _read_json(filename, directory)
        names = []
        for row in doc["rows"]:
            fam = _parse_family(row, source_table=table)
            families[fam.name] = fam
            names.append(fam.name)
        tables[table] = names
    families["K2"] = _zero_algebra()
    wdoc = _read_json("witnesses.json", directory)
    witnesses: dict[str, WitnessData] = {}
    for kind in ("rigid", "conservative"):
        for row, spec in wdoc[kind].items():
            f_rows = [[parse_poly(s) for s in pair] for pair in spec["f"]]
            phi = [parse_poly(s) for s in spec.get("phi", ["0", "0", "0", "0"])]
            den = parse_poly(spec["denominator"]) if "denominator" in spec else None
            witnesses[row] = WitnessData(
                row=row,
                kind=kind,
                f_rows=f_rows,
                phi_values=phi,
                denominator=den,
                free_symbols=list(spec.get("free_symbols", [])),
                inverse_pairs=[tuple(p) for p in spec.get("inverse_pairs", [])],
            )
    return Catalog(families, tables, witnesses)


# -- parameter machinery -----------------------------------------------------


def gamma_functions(gamma: tuple) -> tuple:
    """The pair determinant and the three marker points of a 4-tuple.

    Returns (D, C1, C2, C3) where D = (a+c)(b+d) - 1, C1 = (b, d),
    C2 = (c, a) and C3 is defined only when D is nonzero.
    """
    a, b, c, d = (Fraction(x) for x in gamma)
    det = (a + c) * (b + d) - 1
    c1 = (b, d)
    c2 = (c, a)
    if det == 0:
        raise ZeroDivisionError("pair determinant vanishes; third marker point undefined")
    c3 = ((b * c - (a - 1) * (d - 1)) / det, (a * d - (b - 1) * (c - 1)) / det)
    return det, c1, c2, c3


def pair_determinant(gamma: tuple) -> Fraction:
    a, b, c, d = (Fraction(x) for x in gamma)
    return (a + c) * (b + d) - 1


def conjecture_family(kind: str, n: int, alpha: Fraction | None = None) -> StructureTensor:
    """n-dimensional analogues of the two distinguished terminal families.

    "direct-sum": n idempotents multiplying to zero pairwise.
    "nu": one idempotent e with e*x = alpha*x and x*e = (1-alpha)*x on a
    complement of nilpotents.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    zero = MultiPoly.const(0)
    c = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
    if kind == "direct-sum":
        for i in range(n):
            c[i][i][i] = MultiPoly.const(1)
    elif kind == "nu":
        if alpha is None:
            raise ValueError("the nu family needs a parameter")
        a = Fraction(alpha)
        c[0][0][0] = MultiPoly.const(1)
        for i in range(1, n):
            c[0][i][i] = MultiPoly.const(a)
            c[i][0][i] = MultiPoly.const(1 - a)
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    return StructureTensor(c)


# -- identifications kept implicit by working over the rationals -------------


def same_orbit_params(name: str, first: Mapping[str, Fraction],
                      second: Mapping[str, Fraction]) -> bool:
    """Documented parameter identifications within one family.

    The representative sets over the closed field quotient families by small
    group actions; over the rationals both representatives remain in the
    catalog, so the distinctness check treats these pairs as the same orbit.
    """
    a = {k: Fraction(v) for k, v in first.items()}
    b = {k: Fraction(v) for k, v in second.items()}
    if a == b:
        return True
    if name == "A4":
        return a["alpha"] == -b["alpha"]
    if name in ("C", "D1"):
        return (a["beta"] == b["beta"]
                and a["alpha"] == 1 - b["alpha"] + b["beta"])
    if name == "E3":
        # gamma and 1/gamma describe the same algebra with markers swapped
        if b["gamma"] == 0:
            return False
        return (a["gamma"] == 1 / b["gamma"]
                and a["alpha"] == 1 - b["alpha"] and a["beta"] == 1 - b["beta"])
    if name == "E1":
        try:
            da, c1a, c2a, c3a = gamma_functions(
                (a["alpha"], a["beta"], a["gamma"], a["delta"]))
            db, c1b, c2b, c3b = gamma_functions(
                (b["alpha"], b["beta"], b["gamma"], b["delta"]))
        except ZeroDivisionError:
            return False
        return sorted((c1a, c2a, c3a)) == sorted((c1b, c2b, c3b))
    return False

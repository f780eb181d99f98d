"""Degenerations, separating sets, and the orbit-closure geometry.

A degeneration witness is a basis E_i(t) with Laurent-polynomial entries
(plus, for whole-series sources, a parametrized index substituting a Laurent
polynomial for the family parameter).  Verification changes basis over the
Laurent ring via adjugate over determinant, demands no pole at t = 0, and
compares the limit with the target exactly.

A separating set certifies a non-degeneration: polynomial conditions on the
structure constants that contain the source orbits, are stable under the
lower-triangular (Borel) action, and miss the target orbit, the last part
certified by a Groebner basis containing 1.

From the verified witnesses the degeneration graph, the series closures, the
closure lattice and the irreducible components are reconstructed and diffed
against golden data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Mapping, Sequence

from . import groebner
from .algebra import (
    LinearMap,
    StructureTensor,
    change_basis,
    derivation_algebra_dim,
    multiply,
    product_span_dim,
)
from .catalog import Catalog, _read_json
from .laurent import LaurentPoly, PoleAtZeroError, parse_laurent
from .poly import ExactDivisionError, MultiPoly, parse_poly

C_VARS = ("c11_1", "c11_2", "c12_1", "c12_2", "c21_1", "c21_2", "c22_1", "c22_2")


def c_var(i: int, j: int, k: int) -> str:
    return f"c{i + 1}{j + 1}_{k + 1}"


# -- degeneration witnesses ---------------------------------------------------


@dataclass
class AlgebraRef:
    """A family member: fixed parameters, a symbolic member, or a whole series."""

    family: str
    params: dict[str, MultiPoly] = field(default_factory=dict)
    series: bool = False

    @staticmethod
    def parse(doc: dict) -> "AlgebraRef":
        return AlgebraRef(
            family=doc["family"],
            params={k: parse_poly(v) for k, v in doc.get("params", {}).items()},
            series=bool(doc.get("series", False)),
        )

    def numeric_params(self) -> dict[str, Fraction]:
        out = {}
        for k, v in self.params.items():
            if not v.is_constant():
                raise ValueError(f"{self.family}: parameter {k} is not a constant")
            out[k] = v.constant_value()
        return out

    def node_id(self) -> str:
        if self.series:
            return f"{self.family}*"
        if not self.params:
            return self.family
        inner = ",".join(str(self.params[k]) for k in sorted(self.params))
        return f"{self.family}({inner})"


@dataclass
class DegenerationWitness:
    row_id: str
    source: AlgebraRef
    target: AlgebraRef
    basis_rows: list[list[LaurentPoly]]  # row i: E_i in the source basis
    index: dict[str, LaurentPoly] | None = None
    label: str | None = None
    kind: str = "basis"

    @staticmethod
    def parse(doc: dict, kind: str = "basis") -> "DegenerationWitness":
        return DegenerationWitness(
            row_id=doc["id"],
            source=AlgebraRef.parse(doc["source"]),
            target=AlgebraRef.parse(doc["target"]),
            basis_rows=[[parse_laurent(s) for s in row] for row in doc["basis"]],
            index={k: parse_laurent(v) for k, v in doc["index"].items()}
            if doc.get("index") else None,
            label=doc.get("label"),
            kind=doc.get("kind", kind),
        )


@dataclass
class DegenerationResult:
    witness: DegenerationWitness
    verified: bool
    reason: str = ""
    constants: list[list[list[LaurentPoly]]] | None = None
    limit: StructureTensor | None = None


def universal_zero_witness(source: AlgebraRef) -> DegenerationWitness:
    """Every algebra degenerates to the zero algebra: E_i = t e_i."""
    t = LaurentPoly.t_power(1)
    zero = LaurentPoly.const(0)
    return DegenerationWitness(
        row_id=f"{source.node_id()}->K2",
        source=source,
        target=AlgebraRef(family="K2"),
        basis_rows=[[t, zero], [zero, t]],
        kind="universal",
    )


def self_witness(source: AlgebraRef) -> DegenerationWitness:
    one = LaurentPoly.const(1)
    zero = LaurentPoly.const(0)
    return DegenerationWitness(
        row_id=f"{source.node_id()}->self",
        source=source,
        target=source,
        basis_rows=[[one, zero], [zero, one]],
        kind="self",
    )


def verify_degeneration(witness: DegenerationWitness, catalog: Catalog
                        ) -> DegenerationResult:
    """Check a witness end to end, exactly.

    Substitutes the index into the source family, rewrites the products in
    the parametrized basis (adjugate over determinant in the Laurent ring),
    refuses poles at t = 0, and compares the limit against the target.
    """
    family = catalog[witness.source.family]
    if family.dim != 2:
        raise ValueError("degeneration witnesses cover dimension 2")
    values: dict[str, LaurentPoly] = {}
    for p in family.params:
        if witness.index and p in witness.index:
            values[p] = witness.index[p]
        elif p in witness.source.params:
            values[p] = LaurentPoly.const(witness.source.params[p])
        else:
            values[p] = LaurentPoly.const(MultiPoly.var(p))
    entries = [[[family.tensor.c[i][j][k].evaluate_in(values, LaurentPoly.const)
                 for k in range(2)] for j in range(2)] for i in range(2)]
    # column-convention basis matrix: column j is E_j
    g = [[witness.basis_rows[j][i] for j in range(2)] for i in range(2)]
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if det.is_zero():
        return DegenerationResult(witness, False, reason="singular parametrized basis")
    adj = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]]
    constants: list[list[list[LaurentPoly]]] = []
    limit_entries: list[list[list[MultiPoly]]] = []
    for i in range(2):
        crow = []
        lrow = []
        for j in range(2):
            v = [LaurentPoly.const(0), LaurentPoly.const(0)]
            for p in range(2):
                if g[p][i].is_zero():
                    continue
                for q in range(2):
                    if g[q][j].is_zero():
                        continue
                    coeff = g[p][i] * g[q][j]
                    for k in range(2):
                        if not entries[p][q][k].is_zero():
                            v[k] = v[k] + coeff * entries[p][q][k]
            cell = []
            lim = []
            for k in range(2):
                numer = adj[k][0] * v[0] + adj[k][1] * v[1]
                try:
                    value = numer.exact_div(det)
                except ExactDivisionError:
                    return DegenerationResult(
                        witness, False,
                        reason=f"structure constant c{i+1}{j+1}^{k+1}(t) leaves the "
                               "Laurent polynomial ring")
                cell.append(value)
                try:
                    lim.append(value.value_at_zero())
                except PoleAtZeroError:
                    return DegenerationResult(
                        witness, False,
                        reason=f"pole at t=0 in c{i+1}{j+1}^{k+1}(t)")
            crow.append(cell)
            lrow.append(lim)
        constants.append(crow)
        limit_entries.append(lrow)
    limit = StructureTensor(limit_entries)
    target = catalog[witness.target.family].instantiate(witness.target.numeric_params())
    if limit != target:
        return DegenerationResult(witness, False, reason="limit differs from the target",
                                  constants=constants, limit=limit)
    return DegenerationResult(witness, True, constants=constants, limit=limit)


def specialize_witness(witness: DegenerationWitness, values: Mapping[str, Fraction]
                       ) -> DegenerationWitness:
    """Pin a symbolic source parameter of a family-uniform witness."""
    vals = {k: Fraction(v) for k, v in values.items()}
    rows = [[LaurentPoly({e: c.substitute(vals) for e, c in entry.terms.items()})
             for entry in row] for row in witness.basis_rows]
    params = {k: v.substitute(vals) for k, v in witness.source.params.items()}
    for k, v in vals.items():
        params.setdefault(k, MultiPoly.const(v))
    return DegenerationWitness(
        row_id=f"{witness.row_id}@" + ",".join(f"{k}={v}" for k, v in sorted(vals.items())),
        source=AlgebraRef(witness.source.family, params),
        target=witness.target,
        basis_rows=rows,
        index=witness.index,
        label=witness.label,
        kind=witness.kind,
    )


def compose_witnesses(first: DegenerationWitness, second: DegenerationWitness,
                      catalog: Catalog) -> DegenerationWitness:
    """Chain A -> B -> C by multiplying the parametrized bases.

    The second witness must start at the first one's fixed target (series
    rows with their own index cannot be chained on).
    """
    if second.index is not None:
        raise ValueError("cannot compose onto a series witness with its own index")
    if second.source.family != first.target.family:
        raise ValueError("witnesses do not chain")
    target_values = first.target.numeric_params()
    w2 = second
    if any(not v.is_constant() for v in second.source.params.values()):
        w2 = specialize_witness(second, target_values)
    else:
        if w2.source.numeric_params() != target_values:
            raise ValueError("witnesses do not chain at the same member")
    g1 = [[first.basis_rows[j][i] for j in range(2)] for i in range(2)]
    g2 = [[w2.basis_rows[j][i] for j in range(2)] for i in range(2)]
    prod = [[g1[r][0] * g2[0][j] + g1[r][1] * g2[1][j] for j in range(2)] for r in range(2)]
    rows = [[prod[r][i] for r in range(2)] for i in range(2)]
    return DegenerationWitness(
        row_id=f"{first.row_id} . {w2.row_id}",
        source=first.source,
        target=w2.target,
        basis_rows=rows,
        index=first.index,
        kind="composed",
    )


# -- the necessary conditions of the degeneration lemma ----------------------


@dataclass
class LemmaCheck:
    aut_source: int
    aut_target: int
    span_source: int
    span_target: int

    @property
    def aut_ok(self) -> bool:
        return self.aut_source < self.aut_target

    @property
    def span_ok(self) -> bool:
        return self.span_source >= self.span_target

    @property
    def passed(self) -> bool:
        return self.aut_ok and self.span_ok

    def failing(self) -> str:
        if self.passed:
            return ""
        parts = []
        if not self.aut_ok:
            parts.append("dim Aut")
        if not self.span_ok:
            parts.append("dim of the product span")
        return ", ".join(parts)


def check_lemma_necessary(source: StructureTensor, target: StructureTensor) -> LemmaCheck:
    """Necessary conditions for a proper degeneration source -> target."""
    return LemmaCheck(
        aut_source=derivation_algebra_dim(source),
        aut_target=derivation_algebra_dim(target),
        span_source=product_span_dim(source),
        span_target=product_span_dim(target),
    )


# -- separating sets ----------------------------------------------------------


@dataclass
class TargetRef:
    family: str
    params: dict[str, MultiPoly]
    exclusions: list[MultiPoly]

    @staticmethod
    def parse(doc: dict) -> "TargetRef":
        return TargetRef(
            family=doc["family"],
            params={k: parse_poly(v) for k, v in doc.get("params", {}).items()},
            exclusions=[parse_poly(s) for s in doc.get("exclusions", [])],
        )

    def symbolic_params(self) -> list[str]:
        names: list[str] = []
        for v in self.params.values():
            for name in v.variables_used():
                if name not in names:
                    names.append(name)
        return names


@dataclass
class SeparatingSet:
    row_id: str
    conditions: list[MultiPoly]
    sources: list[AlgebraRef]
    targets: list[TargetRef]

    @staticmethod
    def parse(doc: dict) -> "SeparatingSet":
        return SeparatingSet(
            row_id=doc["id"],
            conditions=[parse_poly(s) for s in doc["conditions"]],
            sources=[AlgebraRef.parse(s) for s in doc["sources"]],
            targets=[TargetRef.parse(t) for t in doc["targets"]],
        )

    def source_params(self) -> list[str]:
        names: list[str] = []
        for cond in self.conditions:
            for name in cond.variables_used():
                if name not in C_VARS and name not in names:
                    names.append(name)
        return names


def _constants_assignment(tensor: StructureTensor) -> dict[str, MultiPoly]:
    return {c_var(i, j, k): tensor.c[i][j][k]
            for i in range(2) for j in range(2) for k in range(2)}


def check_membership(sep: SeparatingSet, catalog: Catalog) -> tuple[bool, str]:
    """Every declared source satisfies the conditions symbolically."""
    for src in sep.sources:
        family = catalog[src.family]
        subs: dict[str, MultiPoly] = dict(src.params)
        tensor = family.tensor.substitute(subs) if subs else family.tensor
        assignment = _constants_assignment(tensor)
        for cond in sep.conditions:
            value = cond.substitute(assignment)
            if not value.is_zero():
                return False, f"{src.node_id()} violates {cond} (residual {value})"
    return True, ""


def _solve_linear_for(poly: MultiPoly, allowed: Sequence[str]
                      ) -> tuple[str, MultiPoly] | None:
    for name in poly.variables_used():
        if name not in allowed:
            continue
        if poly.degree_in(name) != 1:
            continue
        idx = poly.vars.index(name)
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
        if not coeff.is_constant() or not coeff.constant_value():
            continue
        rest = MultiPoly(poly.vars, rest_terms)
        return name, rest.exact_div(-coeff.constant_value())
    return None


def parametrize_conditions(conditions: Sequence[MultiPoly]
                           ) -> tuple[dict[str, MultiPoly], list[MultiPoly]]:
    """Solve linear conditions for coordinates; return (solved, leftovers).

    Solved coordinates are expressed in the remaining free coordinates (and
    the source parameter); leftover conditions are those with no coordinate
    of constant coefficient, kept as explicit equations.
    """
    solved: dict[str, MultiPoly] = {}
    leftovers: list[MultiPoly] = []
    for cond in conditions:
        current = cond.substitute(solved) if solved else cond
        if current.is_zero():
            continue
        hit = _solve_linear_for(current, C_VARS)
        if hit is None:
            leftovers.append(current)
            continue
        name, expr = hit
        solved = {k: v.substitute({name: expr}) for k, v in solved.items()}
        solved[name] = expr
    return solved, leftovers


def _parametrized_tensor(solved: Mapping[str, MultiPoly]) -> StructureTensor:
    return StructureTensor(
        [[[solved.get(c_var(i, j, k), MultiPoly.var(c_var(i, j, k))) for k in range(2)]
          for j in range(2)] for i in range(2)]
    )


def check_stability_symbolic(sep: SeparatingSet) -> tuple[str, str]:
    """Certify Borel stability symbolically where a parametrization exists.

    The generic member of the set is transformed by a symbolic
    lower-triangular matrix (diagonal inverses carried as extra symbols with
    x*xi = 1 relations) and every condition is reduced to normal form modulo
    the leftover condition ideal plus the unit relations; zero normal forms
    certify stability on the whole set.
    """
    solved, leftovers = parametrize_conditions(sep.conditions)
    tensor = _parametrized_tensor(solved)
    x, y, z = MultiPoly.var("_bx"), MultiPoly.var("_by"), MultiPoly.var("_bz")
    u, w = MultiPoly.var("_bu"), MultiPoly.var("_bw")
    g = LinearMap([[x, MultiPoly.const(0)], [y, z]])
    ginv = LinearMap([[u, MultiPoly.const(0)], [-(y * u * w), w]])
    transformed = change_basis(tensor, g, g_inv=ginv)
    assignment = _constants_assignment(transformed)
    pairs = [("_bx", "_bu"), ("_bz", "_bw")]
    unit_relations = [x * u - 1, z * w - 1]
    modulus = None
    if leftovers:
        free_cvars = [v for v in C_VARS if v not in solved]
        names = free_cvars + sep.source_params() + ["_bx", "_by", "_bz", "_bu", "_bw"]
        core = groebner.buchberger(groebner.Ideal.of(leftovers, names))
        modulus = groebner.GroebnerBasis(core.polys + unit_relations, tuple(names))
    for cond in sep.conditions:
        value = cond.substitute(assignment).cancel_inverse_pairs(pairs)
        if modulus is not None and not value.is_zero():
            value = modulus.reduce(value).cancel_inverse_pairs(pairs)
        if not value.is_zero():
            return "failed", f"condition {cond} has nonzero normal form"
    return "certified", ""


def sample_set_point(sep: SeparatingSet, rng: Random, max_tries: int = 50
                     ) -> dict[str, Fraction]:
    """A random rational point of the set: free coordinates drawn, dependent
    coordinates solved exactly (repair variables chosen per condition)."""
    variables = list(C_VARS) + sep.source_params()
    for _ in range(max_tries):
        point = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for v in variables}
        locked: set[str] = set()
        ok = True
        for cond in sep.conditions:
            residual = cond.evaluate(point)
            if residual == 0:
                locked.update(cond.variables_used())
                continue
            fixed = False
            for name in cond.variables_used():
                # repairing a variable of an earlier condition would break it
                if name in locked or name not in C_VARS:
                    continue
                if cond.degree_in(name) != 1:
                    continue
                shifted = dict(point)
                shifted[name] = point[name] + 1
                slope = cond.evaluate(shifted) - residual
                if slope == 0:
                    continue
                point[name] = point[name] - residual / slope
                fixed = True
                break
            locked.update(cond.variables_used())
            if not fixed:
                ok = False
                break
        if ok and all(cond.evaluate(point) == 0 for cond in sep.conditions):
            return point
    raise RuntimeError(f"{sep.row_id}: could not sample a point of the set")


def check_stability_sampled(sep: SeparatingSet, samples: int, group_elements: int,
                            seed: int) -> tuple[bool, str]:
    """Exact spot checks: transformed sample points stay in the set."""
    rng = Random(seed)
    for s in range(samples):
        point = sample_set_point(sep, rng)
        tensor = StructureTensor(
            [[[point[c_var(i, j, k)] for k in range(2)] for j in range(2)]
             for i in range(2)])
        for _ in range(group_elements):
            x = Fraction(0)
            z = Fraction(0)
            while x == 0:
                x = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
            while z == 0:
                z = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
            yv = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
            g = LinearMap([[x, 0], [yv, z]])
            moved = change_basis(tensor, g)
            new_point = {c_var(i, j, k): moved.c[i][j][k].constant_value()
                         for i in range(2) for j in range(2) for k in range(2)}
            for p in sep.source_params():
                new_point[p] = point[p]
            for cond in sep.conditions:
                if cond.evaluate(new_point) != 0:
                    return False, (f"sample {s}: condition {cond} broken by "
                                   f"triangular element [[{x},0],[{yv},{z}]]")
    return True, ""


def check_emptiness(sep: SeparatingSet, target: TargetRef, catalog: Catalog,
                    value: Fraction | None = None, *,
                    degree_cap: int = 20, pair_cap: int = 50000
                    ) -> groebner.EmptinessResult:
    """O(target) meets the set nowhere: transform the target by a generic g
    (det carried as an inverse symbol), impose the conditions, saturate by
    the exclusions and the target's domain inequations, and ask Buchberger.
    """
    family = catalog[target.family]
    tparams: dict[str, MultiPoly] = dict(target.params)
    if value is not None:
        tparams = {k: v.substitute({name: value for name in v.variables_used()})
                   for k, v in tparams.items()}
    lam = family.tensor.substitute(tparams)
    gv = [[MultiPoly.var(f"g{i + 1}{j + 1}") for j in range(2)] for i in range(2)]
    d = MultiPoly.var("_dinv")
    det = gv[0][0] * gv[1][1] - gv[0][1] * gv[1][0]
    adj = [[gv[1][1], -gv[0][1]], [-gv[1][0], gv[0][0]]]
    cols = [[gv[i][j] for i in range(2)] for j in range(2)]
    assignment: dict[str, MultiPoly] = {}
    for i in range(2):
        for j in range(2):
            v = multiply(lam, cols[i], cols[j])
            for k in range(2):
                assignment[c_var(i, j, k)] = d * (adj[k][0] * v[0] + adj[k][1] * v[1])
    equations = [cond.substitute(assignment) for cond in sep.conditions]
    equations.append(det * d - 1)
    nonvanishing: list[MultiPoly] = []
    seen_keys = set()

    def add_nonvanishing(q: MultiPoly) -> None:
        if q.is_constant():
            return
        key = q.primitive().canonical()
        if key not in seen_keys:
            seen_keys.add(key)
            nonvanishing.append(q)

    # the claim quantifies over actual family members only, so the source
    # family's domain inequations saturate the symbolic source parameter
    for src in sep.sources:
        for q in catalog[src.family].domain_inequations():
            add_nonvanishing(q.substitute(src.params))
    if value is None:
        for q in target.exclusions:
            add_nonvanishing(q)
        for q in family.domain_inequations():
            add_nonvanishing(q.substitute(tparams))
    variables = ["g11", "g21", "g12", "g22", "_dinv"]
    for p in equations + nonvanishing:
        for name in p.variables_used():
            if name not in variables:
                variables.append(name)
    return groebner.is_empty(equations, nonvanishing, variables,
                             degree_cap=degree_cap, pair_cap=pair_cap)


def forbidden_parameter_samples(target: TargetRef, catalog: Catalog, count: int,
                                seed: int) -> list[Fraction]:
    """Admissible target parameters within the excluded range."""
    family = catalog[target.family]
    names = target.symbolic_params()
    if not names:
        return []
    rng = Random(seed)
    values: list[Fraction] = []
    tries = 0
    while len(values) < count and tries < 400 * count:
        tries += 1
        v = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        if any(q.evaluate({names[0]: v}) == 0 for q in target.exclusions):
            continue
        tparams = {k: expr.substitute({names[0]: v}) for k, expr in target.params.items()}
        try:
            family.instantiate({k: e.constant_value() for k, e in tparams.items()})
        except Exception:
            continue
        if v not in values:
            values.append(v)
    if len(values) < count:
        raise RuntimeError(f"{target.family}: could not sample forbidden parameters")
    return values


@dataclass
class SeparatingReport:
    row_id: str
    membership: bool
    membership_detail: str
    stability_sampled: bool
    stability_detail: str
    stability_symbolic: str
    emptiness: dict[str, str]  # target id -> verdict
    passed: bool


def verify_separating_set(sep: SeparatingSet, catalog: Catalog, *, samples: int = 200,
                          group_elements: int = 5, seed: int = 2024,
                          forbidden_samples: int = 10,
                          degree_cap: int = 20, pair_cap: int = 50000
                          ) -> SeparatingReport:
    member_ok, member_detail = check_membership(sep, catalog)
    stab_ok, stab_detail = check_stability_sampled(sep, samples, group_elements, seed)
    symbolic, symbolic_detail = check_stability_symbolic(sep)
    if symbolic == "failed":
        stab_detail = (stab_detail + "; " if stab_detail else "") + symbolic_detail
    emptiness: dict[str, str] = {}
    all_empty = True
    for target in sep.targets:
        base = check_emptiness(sep, target, catalog,
                               degree_cap=degree_cap, pair_cap=pair_cap)
        key = target.family + ("(*)" if target.symbolic_params() else "")
        emptiness[key] = base.verdict
        if base.verdict != "yes":
            all_empty = False
        if target.symbolic_params():
            for v in forbidden_parameter_samples(target, catalog, forbidden_samples, seed):
                r = check_emptiness(sep, target, catalog, value=v,
                                    degree_cap=degree_cap, pair_cap=pair_cap)
                emptiness[f"{target.family}({v})"] = r.verdict
                if r.verdict != "yes":
                    all_empty = False
    passed = member_ok and stab_ok and symbolic != "failed" and all_empty
    return SeparatingReport(
        row_id=sep.row_id,
        membership=member_ok,
        membership_detail=member_detail,
        stability_sampled=stab_ok,
        stability_detail=stab_detail,
        stability_symbolic=symbolic,
        emptiness=emptiness,
        passed=passed,
    )


# -- data loading -------------------------------------------------------------


def load_degenerations(directory: str | None = None) -> list[DegenerationWitness]:
    doc5 = _read_json("table5.json", directory)
    doc7 = _read_json("table7.json", directory)
    rows = [DegenerationWitness.parse(r, kind="basis") for r in doc5["rows"]]
    rows += [DegenerationWitness.parse(r, kind="series") for r in doc7["rows"]]
    rows += [DegenerationWitness.parse(r, kind="param-limit") for r in doc7.get("extra", [])]
    return rows


def load_separating_sets(directory: str | None = None) -> list[SeparatingSet]:
    doc6 = _read_json("table6.json", directory)
    doc8 = _read_json("table8.json", directory)
    return ([SeparatingSet.parse(r) for r in doc6["rows"]]
            + [SeparatingSet.parse(r) for r in doc8["rows"]])


def load_golden_figure(number: int, directory: str | None = None) -> dict:
    return _read_json(f"figure{number}.json", directory)


def load_golden_closures(directory: str | None = None) -> dict:
    return _read_json("closures.json", directory)


# -- graph reconstruction ------------------------------------------------------


TERMINAL_FAMILIES = ("T01", "T02", "T03", "T04", "T05", "T06", "T07", "T08", "T09", "T10")


def _fmt(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class Point:
    """A node of the instance-level degeneration relation.

    param is None for parameterless families, "*" for a whole series, or the
    decimal-free string of a fixed rational parameter.
    """

    family: str
    param: str | None

    def pretty(self) -> str:
        if self.param is None:
            return self.family
        if self.param == "*":
            return f"{self.family}*"
        return f"{self.family}({self.param})"


def _point_of_ref(ref: AlgebraRef) -> Point:
    if ref.series:
        return Point(ref.family, "*")
    if not ref.params:
        return Point(ref.family, None)
    values = ref.numeric_params()
    key = ",".join(_fmt(values[k]) for k in sorted(values))
    return Point(ref.family, key)


class DegenerationGraph:
    """Verified degeneration data assembled into graph, closures and lattice."""

    def __init__(self, results: Sequence[DegenerationResult], catalog: Catalog):
        unverified = [r.witness.row_id for r in results if not r.verified]
        if unverified:
            raise ValueError(f"unverified witnesses: {', '.join(unverified)}")
        self.catalog = catalog
        self.witnesses = [r.witness for r in results]
        self.instance_edges: list[tuple[Point, Point]] = []
        self.family_rules: list[tuple[str, Point]] = []  # every member of family -> target
        self.series_edges: list[tuple[str, Point]] = []
        for w in self.witnesses:
            target = _point_of_ref(w.target)
            if w.source.series:
                self.series_edges.append((w.source.family, target))
            elif any(not v.is_constant() for v in w.source.params.values()):
                self.family_rules.append((w.source.family, target))
            else:
                self.instance_edges.append((_point_of_ref(w.source), target))

    # ---- instance-level closure ------------------------------------------

    def closure(self, start: Point) -> set[Point]:
        seen: set[Point] = set()
        stack = [start]
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            for src, dst in self.instance_edges:
                if src == p:
                    stack.append(dst)
            for fam, dst in self.family_rules:
                if fam == p.family:
                    stack.append(dst)
            if p.param == "*":
                for fam, dst in self.series_edges:
                    if fam == p.family:
                        stack.append(dst)
        return seen

    @staticmethod
    def set_contains(big: set[Point], small: set[Point]) -> bool:
        for p in small:
            if p in big:
                continue
            if p.param is not None and p.param != "*" and Point(p.family, "*") in big:
                continue
            return False
        return True

    # ---- family-level graph (primary degenerations) ------------------------

    def family_nodes(self) -> list[str]:
        return list(TERMINAL_FAMILIES) + ["K2"]

    def family_edges(self) -> dict[tuple[str, str], str | None]:
        """Member-level degenerations only: a series witness (one that needs
        an index through the family) does not degenerate any fixed member."""
        edges: dict[tuple[str, str], str | None] = {}
        for w in self.witnesses:
            if w.source.series:
                continue
            src = w.source.family
            dst = w.target.family
            if src == dst:
                continue
            label = w.label
            if label is None and w.target.params:
                values = w.target.numeric_params()
                label = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(values.items()))
            key = (src, dst)
            if key not in edges or (edges[key] is not None and label is None):
                edges[key] = label
        return edges

    def primary_edges(self) -> list[tuple[str, str, str | None]]:
        """Transitive reduction of the family-level degeneration relation."""
        edges = self.family_edges()
        adjacency: dict[str, set[str]] = {}
        for (u, v) in edges:
            adjacency.setdefault(u, set()).add(v)

        def reach(start: str) -> set[str]:
            seen: set[str] = set()
            stack = [start]
            while stack:
                node = stack.pop()
                for nxt in adjacency.get(node, ()):
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            return seen

        reach_map = {u: reach(u) for u in adjacency}
        kept = []
        for (u, v), label in sorted(edges.items()):
            redundant = any(w != v and v in reach_map.get(w, set())
                            for w in adjacency[u])
            if not redundant:
                kept.append((u, v, label))
        return kept

    def levels(self, seed: int = 7) -> dict[str, int]:
        out: dict[str, int] = {}
        for fam in self.family_nodes():
            family = self.catalog[fam]
            if family.params:
                point = family.sample(1, seed)[0]
                tensor = family.tensor.substitute(point)
            else:
                tensor = family.instantiate({})
            out[fam] = derivation_algebra_dim(tensor)
        return out

    # ---- lattice, components, open orbit -----------------------------------

    def lattice_nodes(self) -> list[Point]:
        nodes = [Point("T07", "*"), Point("T09", None), Point("T08", "*"),
                 Point("T07", "0"), Point("T01", None), Point("T04", None),
                 Point("T07", "3/2"), Point("T05", None), Point("T02", None),
                 Point("T08", "1"), Point("T10", "*"),
                 Point("T10", "1"), Point("T03", None), Point("T10", "2"),
                 Point("T06", None), Point("K2", None)]
        return nodes

    def lattice_edges(self) -> list[tuple[str, str]]:
        nodes = self.lattice_nodes()
        closures = {p: self.closure(p) | {p} for p in nodes}
        strict: dict[Point, set[Point]] = {}
        for a in nodes:
            below = set()
            for b in nodes:
                if a == b:
                    continue
                if (self.set_contains(closures[a], closures[b])
                        and not self.set_contains(closures[b], closures[a])):
                    below.add(b)
            strict[a] = below
        edges = []
        for a in nodes:
            for b in strict[a]:
                if not any(b in strict[c] for c in strict[a] if c != b):
                    edges.append((a.pretty(), b.pretty()))
        return sorted(edges)

    def orbit_closure_nodes(self) -> list[Point]:
        nodes = []
        for fam in TERMINAL_FAMILIES:
            if self.catalog[fam].params:
                nodes.append(Point(fam, "*"))
            else:
                nodes.append(Point(fam, None))
        nodes.append(Point("K2", None))
        return nodes

    def closure_sets(self) -> dict[str, set[Point]]:
        return {p.pretty(): self.closure(p) | {p} for p in self.orbit_closure_nodes()}

    def irreducible_components(self) -> list[str]:
        closures = {p: self.closure(p) | {p} for p in self.orbit_closure_nodes()}
        names = []
        for a, ca in closures.items():
            maximal = True
            for b, cb in closures.items():
                if a == b:
                    continue
                if self.set_contains(cb, ca) and not self.set_contains(ca, cb):
                    maximal = False
                    break
            if maximal:
                names.append(a.pretty())
        return sorted(names)

    def open_orbit_check(self) -> list[str]:
        """Families of maximal orbit dimension not inside another closure."""
        levels = self.levels()
        closures = {p: self.closure(p) | {p} for p in self.orbit_closure_nodes()}
        out = []
        for p in self.orbit_closure_nodes():
            if levels[p.family] != 0:
                continue
            inside_other = False
            for q, cq in closures.items():
                if q == p:
                    continue
                if p in cq or (p.param is None and Point(p.family, "*") in cq):
                    inside_other = True
                    break
            if not inside_other:
                out.append(p.pretty())
        return sorted(out)

    # ---- DOT output ---------------------------------------------------------

    def to_dot(self) -> str:
        levels = self.levels()
        lines = ["digraph primary_degenerations {", "  rankdir=TB;"]
        by_level: dict[int, list[str]] = {}
        for fam in self.family_nodes():
            by_level.setdefault(levels[fam], []).append(fam)
        for level in sorted(by_level):
            members = "; ".join(f'"{f}"' for f in sorted(by_level[level]))
            lines.append(f"  {{ rank=same; {members} }}")
        for fam in self.family_nodes():
            label = fam if not self.catalog[fam].params else f"{fam}(a)"
            lines.append(f'  "{fam}" [label="{label} [{levels[fam]}]"];')
        for u, v, label in self.primary_edges():
            if label:
                lines.append(f'  "{u}" -> "{v}" [label="{label}", style=dashed];')
            else:
                lines.append(f'  "{u}" -> "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def lattice_to_dot(self) -> str:
        lines = ["digraph closure_lattice {", "  rankdir=TB;"]
        for p in self.lattice_nodes():
            lines.append(f'  "{p.pretty()}";')
        for u, v in self.lattice_edges():
            lines.append(f'  "{u}" -> "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(results: Sequence[DegenerationResult], catalog: Catalog
                ) -> DegenerationGraph:
    return DegenerationGraph(results, catalog)


def verify_all_degenerations(catalog: Catalog, directory: str | None = None
                             ) -> list[DegenerationResult]:
    """Verify the bundled witness tables plus the universal witnesses."""
    results = [verify_degeneration(w, catalog) for w in load_degenerations(directory)]
    for fam in TERMINAL_FAMILIES:
        family = catalog[fam]
        if family.params:
            ref = AlgebraRef(fam, {p: MultiPoly.var(p) for p in family.params})
        else:
            ref = AlgebraRef(fam)
        results.append(verify_degeneration(universal_zero_witness(ref), catalog))
    return results

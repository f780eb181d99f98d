"""Command-line front end: the reproduce-everything entry point.

Subcommands:

  check          decide one identity for an algebra JSON file
  verify-tables  re-verify bundled classification / degeneration tables
  graph          emit the degeneration graph and closure lattice as DOT
  iso            decide isomorphism of two algebra files
  invariants     derivation and product-span dimensions of the terminal families
  sample         admissible parameter samples for a family

Exit codes: 0 yes/pass, 1 no/fail, 2 input error, 3 undecided.
All randomness flows from --seed; reports embed the seed and a config hash,
so JSON output is byte-identical across runs.  ALGVAR_DATA overrides the
bundled catalog directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__, catalog as catalog_mod, deformation, groebner, identity
from .algebra import StructureTensor, derivation_algebra_dim, product_span_dim
from .catalog import Catalog, load_catalog
from .identity import CaseSplitExplosion
from .poly import format_rational


@dataclass(frozen=True)
class RunConfig:
    seed: int = 2024
    samples: int = 25
    stability_samples: int = 200
    group_elements: int = 5
    forbidden_samples: int = 10
    degree_cap: int = 20
    pair_cap: int = 50000

    def hash(self) -> str:
        canon = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    def stamp(self) -> dict:
        return {"seed": self.seed, "config_hash": self.hash()}


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        samples=args.samples,
        stability_samples=getattr(args, "stability_samples", 200),
        degree_cap=args.degree_cap,
        pair_cap=args.pair_cap,
    )


def _load_algebra(path: str) -> StructureTensor:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: {path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return StructureTensor.from_json(doc)
    except (KeyError, ValueError) as exc:
        raise SystemExit(f"error: {path}: bad algebra document: {exc}") from exc


def _emit(report: dict, args, human_lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        for line in human_lines:
            print(line)
    out = getattr(args, "out", None)
    if out:
        os.makedirs(out, exist_ok=True)
        name = report.get("command", "report")
        path = os.path.join(out, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, default=str)


# -- check ---------------------------------------------------------------------


def cmd_check(args) -> int:
    config = _config_from_args(args)
    tensor = _load_algebra(args.algebra)
    name = args.identity
    if not tensor.is_numeric():
        raise SystemExit("error: the check command needs a numeric algebra file")
    if name == "terminal":
        rep = identity.is_terminal(tensor)
        verdict = rep.verdict
        extra = {}
    elif name == "conservative":
        rep = identity.is_conservative(tensor)
        verdict = rep.verdict
        extra = {"solution_dim": rep.solution_dim}
    elif name == "rigid":
        rep = identity.is_rigid(tensor)
        verdict = rep.verdict
        extra = {"solution_dim": rep.solution_dim}
    elif name == "jordan":
        try:
            verdict = "yes" if identity.is_jordan(tensor) else "no"
        except identity.NonCommutativeError:
            raise SystemExit("error: the Jordan check needs a commutative algebra")
        rep = None
        extra = {}
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"error: unknown identity {name}")
    report = {"command": "check", "algebra": args.algebra, "identity": name,
              "verdict": verdict, **extra, **config.stamp()}
    lines = [f"{args.algebra}: {name} -> {verdict}"]
    if rep is not None and rep.witness is not None and verdict == "yes" and name != "terminal":
        w = rep.witness
        report["witness"] = {
            "f": [[str(w.f.c[i][j][k]) for k in range(2)] for i in range(2) for j in range(2)],
            "phi": [str(w.phi.phi[i][j]) for i in range(2) for j in range(2)],
            "free_symbols": w.free_symbols,
        }
        lines.append(f"  solution dimension {rep.solution_dim}, "
                     f"free symbols: {', '.join(w.free_symbols) or 'none'}")
    _emit(report, args, lines)
    return 0 if verdict == "yes" else 1


# -- verify-tables --------------------------------------------------------------


def _decide_row(fam, kind: str, config: RunConfig):
    decider = identity.is_rigid if kind == "rigid" else identity.is_conservative
    if not fam.params:
        return decider(fam.instantiate({})), "numeric"
    if fam.derived:
        points = fam.sample(max(config.samples, 25), config.seed)
        return decider(fam.tensor, sample_points=points), "sampled"
    try:
        return decider(fam.tensor,
                       domain_inequations=fam.domain_inequations()), "symbolic"
    except CaseSplitExplosion:
        points = fam.sample(max(config.samples, 25), config.seed)
        return decider(fam.tensor, sample_points=points), "sampled"


def _verify_alias(fam, catalog: Catalog, config: RunConfig, points: int = 10) -> bool:
    if fam.origin is None:
        return True
    origin_name, omap = fam.origin
    origin = catalog[origin_name]
    samples = fam.sample(points, config.seed) if fam.params else [{}]
    for pt in samples:
        own = fam.instantiate({k: v for k, v in pt.items() if k in fam.params})
        oparams = {k: expr.evaluate(pt) for k, expr in omap.items()}
        if own != origin.instantiate(oparams):
            return False
    return True


def _verify_witness_row(fam, catalog: Catalog) -> bool | None:
    data = catalog.witness_for(fam.name)
    if data is None:
        return None
    f, phi = data.as_maps()
    return identity.verify_witness(fam.tensor, f, phi, denominator=data.denominator,
                                   inverse_pairs=data.inverse_pairs or fam.inverse_pairs())


def _verify_table_classification(table: int, catalog: Catalog, config: RunConfig) -> list[dict]:
    kind = {2: "rigid", 3: "conservative"}[table]
    rows = []
    for fam in catalog.rows(table):
        alias_ok = _verify_alias(fam, catalog, config)
        report, mode = _decide_row(fam, kind, config)
        witness_ok = _verify_witness_row(fam, catalog)
        ok = alias_ok and report.verdict == "yes" and witness_ok is not False
        rows.append({
            "row": fam.name, "verdict": "pass" if ok else "fail",
            "decider": report.verdict, "mode": mode,
            "alias": alias_ok, "witness": witness_ok,
        })
    return rows


def _verify_table4(catalog: Catalog, config: RunConfig) -> list[dict]:
    rows = []
    for fam in catalog.rows(4):
        alias_ok = _verify_alias(fam, catalog, config)
        symbolic = identity.is_terminal(
            fam.tensor, domain_inequations=fam.domain_inequations())
        sampled_ok = True
        points = fam.sample(max(20, config.samples), config.seed) if fam.params else [{}]
        for pt in points:
            inst = fam.instantiate({k: v for k, v in pt.items() if k in fam.params})
            sub = identity.is_terminal(inst)
            pinned = identity.terminal_via_pinned_f(inst)
            if sub.verdict != "yes" or not pinned:
                sampled_ok = False
                break
        ok = alias_ok and symbolic.verdict == "yes" and sampled_ok
        rows.append({
            "row": fam.name, "verdict": "pass" if ok else "fail",
            "symbolic": symbolic.verdict, "sampled_points": len(points),
            "alias": alias_ok,
        })
    return rows


def _verify_table1(catalog: Catalog, config: RunConfig) -> list[dict]:
    rows = []
    for fam in catalog.rows(1):
        try:
            points = fam.sample(config.samples, config.seed) if fam.params else [{}]
            for pt in points:
                fam.instantiate({k: v for k, v in pt.items() if k in fam.params})
            ok = True
        except Exception:
            ok = False
        rows.append({"row": fam.name, "verdict": "pass" if ok else "fail",
                     "instantiated_points": len(points)})
    return rows


def _verify_degeneration_table(table: int, catalog: Catalog) -> list[dict]:
    witnesses = deformation.load_degenerations(catalog_mod.data_dir())
    wanted = {5: ("basis",), 7: ("series", "param-limit")}[table]
    rows = []
    for w in witnesses:
        if w.kind not in wanted:
            continue
        result = deformation.verify_degeneration(w, catalog)
        rows.append({"row": w.row_id, "verdict": "pass" if result.verified else "fail",
                     "reason": result.reason})
    return rows


def _verify_separating_table(table: int, catalog: Catalog, config: RunConfig) -> list[dict]:
    source_table = {6: "T0", 8: "(*)"}
    rows = []
    for sep in deformation.load_separating_sets(catalog_mod.data_dir()):
        is_series = "(*)" in sep.row_id
        if (table == 8) != is_series:
            continue
        rep = deformation.verify_separating_set(
            sep, catalog, samples=config.stability_samples,
            group_elements=config.group_elements, seed=config.seed,
            forbidden_samples=config.forbidden_samples,
            degree_cap=config.degree_cap, pair_cap=config.pair_cap)
        rows.append({
            "row": sep.row_id, "verdict": "pass" if rep.passed else "fail",
            "membership": rep.membership, "stability": rep.stability_sampled,
            "stability_symbolic": rep.stability_symbolic,
            "emptiness": rep.emptiness,
        })
    return rows


def cmd_verify_tables(args) -> int:
    config = _config_from_args(args)
    catalog = load_catalog()
    tables = sorted(set(args.tables))
    report = {"command": "verify-tables", "tables": {}, **config.stamp()}
    lines = []
    failures = 0
    for table in tables:
        if table == 1:
            rows = _verify_table1(catalog, config)
        elif table in (2, 3):
            rows = _verify_table_classification(table, catalog, config)
        elif table == 4:
            rows = _verify_table4(catalog, config)
        elif table in (5, 7):
            rows = _verify_degeneration_table(table, catalog)
        elif table in (6, 8):
            rows = _verify_separating_table(table, catalog, config)
        else:
            raise SystemExit(f"error: no table {table}; choose from 1-8")
        passed = sum(1 for r in rows if r["verdict"] == "pass")
        failures += len(rows) - passed
        report["tables"][str(table)] = {"rows": rows, "passed": passed, "total": len(rows)}
        lines.append(f"table {table}: {passed}/{len(rows)} rows pass")
        for r in rows:
            if r["verdict"] != "pass":
                lines.append(f"  FAIL {r['row']}: {r}")
    report["summary"] = {"failures": failures}
    _emit(report, args, lines)
    return 0 if failures == 0 else 1


# -- graph ----------------------------------------------------------------------


def cmd_graph(args) -> int:
    config = _config_from_args(args)
    catalog = load_catalog()
    results = deformation.verify_all_degenerations(catalog, catalog_mod.data_dir())
    bad = [r.witness.row_id for r in results if not r.verified]
    if not args.force:
        for sep in deformation.load_separating_sets(catalog_mod.data_dir()):
            rep = deformation.verify_separating_set(
                sep, catalog, samples=20, group_elements=2, seed=config.seed,
                forbidden_samples=2, degree_cap=config.degree_cap,
                pair_cap=config.pair_cap)
            if not rep.passed:
                bad.append(sep.row_id)
    if bad:
        print(f"error: verification incomplete ({', '.join(bad)}); use --force to override",
              file=sys.stderr)
        return 2
    graph = deformation.build_graph([r for r in results if r.verified], catalog)
    lines = []
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(graph.to_dot())
        lines.append(f"wrote {args.dot}")
    if args.lattice:
        path = args.lattice if isinstance(args.lattice, str) else "lattice.dot"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(graph.lattice_to_dot())
        lines.append(f"wrote {path}")
    components = graph.irreducible_components()
    closures = graph.closure_sets()
    lines.append("irreducible components:")
    for name in components:
        members = ", ".join(sorted(p.pretty() for p in closures[name]))
        lines.append(f"  closure({name}) = {{{members}}}")
    open_orbit = graph.open_orbit_check()
    lines.append(f"open orbit: {', '.join(open_orbit)}")
    report = {
        "command": "graph",
        "edges": [[u, v, lab] for u, v, lab in graph.primary_edges()],
        "levels": graph.levels(),
        "lattice_edges": [list(e) for e in graph.lattice_edges()],
        "irreducible_components": components,
        "component_closures": {
            name: sorted(p.pretty() for p in closures[name]) for name in components},
        "open_orbit": open_orbit,
        **config.stamp(),
    }
    _emit(report, args, lines)
    return 0


# -- iso -------------------------------------------------------------------------


def cmd_iso(args) -> int:
    config = _config_from_args(args)
    a = _load_algebra(args.first)
    b = _load_algebra(args.second)
    if a.dim != b.dim:
        raise SystemExit("error: algebras have different dimensions")
    result = groebner.are_isomorphic(a, b, degree_cap=config.degree_cap,
                                     pair_cap=config.pair_cap)
    lines = [f"{args.first} ~ {args.second}: {result.verdict}"]
    report = {"command": "iso", "first": args.first, "second": args.second,
              "verdict": result.verdict, "detail": result.detail, **config.stamp()}
    if result.witness is not None:
        matrix = [[format_rational(x) for x in row] for row in result.witness]
        report["witness"] = matrix
        lines.append(f"  witness map: e1 -> {matrix[0][0]}*e1 + {matrix[1][0]}*e2, "
                     f"e2 -> {matrix[0][1]}*e1 + {matrix[1][1]}*e2")
    _emit(report, args, lines)
    return {"yes": 0, "no": 1, "unknown": 3}[result.verdict]


# -- invariants ------------------------------------------------------------------


def cmd_invariants(args) -> int:
    config = _config_from_args(args)
    catalog = load_catalog()
    lines = []
    table = {}
    for name in list(deformation.TERMINAL_FAMILIES) + ["K2"]:
        fam = catalog[name]
        points = fam.sample(10, config.seed) if fam.params else [{}]
        dims = set()
        spans = set()
        for pt in points:
            tensor = (fam.instantiate({k: v for k, v in pt.items() if k in fam.params})
                      if not fam.params else fam.tensor.substitute(pt))
            dims.add(derivation_algebra_dim(tensor))
            spans.add(product_span_dim(tensor))
        table[name] = {
            "derivation_dim": sorted(dims), "product_span_dim": sorted(spans),
            "points": len(points),
        }
        lines.append(f"{name}: dim Der = {sorted(dims)}, dim span of products = {sorted(spans)}")
    report = {"command": "invariants", "families": table, **config.stamp()}
    _emit(report, args, lines)
    return 0


# -- sample ----------------------------------------------------------------------


def cmd_sample(args) -> int:
    config = _config_from_args(args)
    catalog = load_catalog()
    try:
        fam = catalog[args.family]
    except KeyError:
        raise SystemExit(f"error: unknown family {args.family}")
    try:
        points = fam.sample(args.count, config.seed)
    except catalog_mod.SamplingExhausted as exc:
        raise SystemExit(f"error: {exc}")
    serialized = [{k: format_rational(v) for k, v in pt.items()} for pt in points]
    lines = [f"{args.family}: {len(points)} admissible points"]
    lines += ["  " + (json.dumps(pt, sort_keys=True) if pt else "{} (no parameters)")
              for pt in serialized]
    report = {"command": "sample", "family": args.family, "points": serialized,
              **config.stamp()}
    _emit(report, args, lines)
    return 0


# -- entry point -----------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=2024, help="seed for all sampling")
    parser.add_argument("--samples", type=int, default=25,
                        help="parameter samples per family")
    parser.add_argument("--degree-cap", type=int, default=20, dest="degree_cap")
    parser.add_argument("--pair-cap", type=int, default=50000, dest="pair_cap")
    parser.add_argument("--json", action="store_true", help="print the JSON report")
    parser.add_argument("--out", help="directory for JSON report files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algvar",
        description="Exact verification toolkit for 2-dimensional rigid, "
                    "conservative and terminal algebras.")
    parser.add_argument("--version", action="version", version=f"algvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide an identity for one algebra file")
    p.add_argument("algebra", help="algebra JSON file ({dim, constants})")
    p.add_argument("--identity", required=True,
                   choices=["terminal", "conservative", "rigid", "jordan"])
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-tables", help="re-verify bundled tables")
    p.add_argument("tables", nargs="+", type=int, help="table numbers (1-8)")
    p.add_argument("--stability-samples", type=int, default=200, dest="stability_samples")
    _add_common(p)
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("graph", help="emit degeneration graph and closure lattice")
    p.add_argument("--dot", help="write the primary degeneration graph to this DOT file")
    p.add_argument("--lattice", nargs="?", const="lattice.dot",
                   help="write the closure lattice DOT (default lattice.dot)")
    p.add_argument("--force", action="store_true",
                   help="skip re-verifying tables 5-8 first")
    _add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("iso", help="decide isomorphism of two algebra files")
    p.add_argument("first")
    p.add_argument("second")
    _add_common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("invariants", help="derivation/product-span dimensions")
    _add_common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sample", help="admissible parameter samples for a family")
    p.add_argument("family")
    p.add_argument("--count", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

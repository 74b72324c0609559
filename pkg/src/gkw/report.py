"""Deterministic report assembly and scenario-file ingestion.

A report is a plain dict tree built in fixed key order; identical configs
produce byte-identical json.  The reproducibility header echoes the seed,
sample count, tolerances, and the convention set in force.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .actions import TorusAction
from .calculus import VectorField
from .catalog import (CatalogCase, build_case, catalog_names, closure_families,
                      cpn_su2_invariance, torus_invariance, unitary_invariance)
from .deformation import DeformationBivector
from .linear import RANK_TOL, VALIDATION_TOL, ValidationError, rank_tolerance
from .pipeline import (DeformedKahlerRecipe, GenuineKahlerRecipe, ScalingSampler,
                       Scenario, Stratum, quotient_bihermitian, run_closure_families,
                       sample_level_set, type_table, verify_moment_map,
                       verify_type_formula)
from .poly import QI, ComplexPolynomial

CONVENTIONS = (
    "pairing <X+a,Y+b> = (a(Y)+b(X))/2; "
    "omega_std = sum dy_j^dx_j; J_std dx_j = dy_j; "
    "weight-w circle flow z -> e^{iwt} z with field X = i w (z d/dz - zbar d/dzbar); "
    "J_omega = [[0,-omega^-1],[omega,0]] (eigenbundle {X - i iota_X omega}); "
    "J_J = diag(-J, J^T) (eigenbundle T01 + T*10); "
    "deformations eps = Y^Z + iota_Y omega ^ iota_Z omega; "
    "iota_W(e1^e2) = 2<W,e1>e2 - 2<W,e2>e1")


@dataclass
class RunConfig:
    command: str
    case: str | None = None
    scenario_file: str | None = None
    samples: int = 20
    seed: int = 7
    tol: float = RANK_TOL
    fmt: str = "text"
    out: str | None = None


def _poly_to_terms(p: ComplexPolynomial):
    return [[c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator,
             list(e)] for e, c in sorted(p.terms.items())]


def _poly_from_terms(n, terms):
    acc = {}
    for rn, rd, inum, iden, exps in terms:
        acc[tuple(exps)] = QI(Fraction(rn, rd), Fraction(inum, iden))
    return ComplexPolynomial(n, acc)


def scenario_from_dict(doc: dict) -> Scenario:
    """Parse the json mirror of a (torus, standard-moment) scenario."""
    n = int(doc["ambient_complex_dim"])
    act = doc["action"]
    if act.get("kind") != "torus":
        raise ValueError("scenario files support torus actions")
    action = TorusAction(tuple(tuple(r) for r in act["weights"]))
    if action.n != n:
        raise ValueError("weight matrix width != ambient dimension")
    from .actions import standard_moment_map
    moment = standard_moment_map(action)
    level = tuple(Fraction(x) for x in doc["level"])
    if len(level) != action.k:
        raise ValueError("level length != torus rank")
    strata = []
    zero_sets = {}
    for s in doc.get("strata", []):
        coords = tuple(int(c) for c in s["zero_coords"])
        lab = s["label"]
        strata.append(Stratum(lab, (lambda cs: lambda z: all(abs(z[c]) < 1e-10 for c in cs))(coords)))
        zero_sets[lab] = coords
    if action.k != 1:
        raise ValueError("scenario files support rank-one levels (scaling sampler)")
    sampler = ScalingSampler(moment, [float(level[0])], zero_sets=zero_sets)
    st = doc["structure"]
    if st["kind"] == "genuine-kahler":
        recipe = GenuineKahlerRecipe(n)
    elif st["kind"] == "deformed":
        dd = st["deformation"]
        Y = VectorField(n, {int(k): _poly_from_terms(n, v) for k, v in dd["Y"].items()})
        Z = VectorField(n, {int(k): _poly_from_terms(n, v) for k, v in dd["Z"].items()})
        eps = DeformationBivector.from_vector_fields(Y, Z)
        recipe = DeformedKahlerRecipe(n, eps, Fraction(st["t"]))
    else:
        raise ValueError(f"unknown structure kind {st['kind']!r}")
    return Scenario(name=doc.get("name", "scenario"), n=n, recipe=recipe,
                    action=action, moment=moment, level=level,
                    sampler=sampler, strata=tuple(strata))


def scenario_to_dict(scenario: Scenario) -> dict:
    doc = {
        "name": scenario.name,
        "ambient_complex_dim": scenario.n,
        "action": {"kind": "torus", "weights": [list(r) for r in scenario.action.weights]},
        "level": [str(x) for x in scenario.level],
        "strata": [{"label": s.label} for s in scenario.strata],
        "structure": scenario.recipe.describe(),
    }
    recipe = scenario.recipe
    if isinstance(recipe, DeformedKahlerRecipe):
        doc["structure"] = {
            "kind": "deformed", "t": str(recipe.t),
            "deformation": {
                "hol": {f"{i},{j}": _poly_to_terms(p) for (i, j), p in recipe.eps.hol.items()},
                "form": {f"{i},{j}": _poly_to_terms(p) for (i, j), p in recipe.eps.form.items()},
            }}
    return doc


def _header(config: RunConfig, scenario=None):
    h = {
        "tool": "gkw",
        "version": __version__,
        "numpy": np.__version__,
        "command": config.command,
        "case": config.case,
        "scenario_file": config.scenario_file,
        "samples": config.samples,
        "seed": config.seed,
        "tolerances": {
            "rank": config.tol,
            "validation": VALIDATION_TOL,
            "isotropy": 1e-9,
            "freeness": 1e-8,
            "level": 1e-12,
        },
        "conventions": CONVENTIONS,
    }
    if scenario is not None:
        h["scenario"] = scenario.describe()
    return h


def _validation_section(scenario, batch):
    rows = []
    ok = True
    for i, z in enumerate(batch.points):
        try:
            pair = scenario.recipe.pair_at(z)
            t1, g1 = pair.J1.type_with_gap()
            t2, g2 = pair.J2.type_with_gap()
            rows.append({"sample": i, "pass": True, "types_upstairs": [t1, t2],
                         "rank_gap_ok": bool(g1 and g2)})
        except ValidationError as exc:
            rows.append({"sample": i, "pass": False, "error": str(exc)})
            ok = False
    return {"rows": rows, "pass": ok}


def _moment_section(scenario, batch):
    rows = verify_moment_map(lambda z: scenario.recipe.pair_at(z).J1,
                             scenario.action, scenario.moment, batch.points)
    return {"rows": rows, "pass": all(r["pass"] for r in rows)}


def _mc_section(scenario):
    recipe = scenario.recipe
    if isinstance(recipe, DeformedKahlerRecipe) and not recipe.eps.is_zero:
        res = recipe.eps.maurer_cartan_residual()
        return {"applicable": True, "exact_zero": res.is_zero, "pass": res.is_zero}
    return {"applicable": False, "pass": True}


def _invariance_section(case: CatalogCase | None, scenario):
    out = {"checks": [], "pass": True}
    if case is None or not isinstance(scenario.recipe, DeformedKahlerRecipe):
        return out
    if isinstance(scenario.action, TorusAction):
        ok = torus_invariance(case)
        out["checks"].append({"name": "torus-invariance(exact)", "pass": ok})
        if case.name == "cpn-2":
            ok2 = cpn_su2_invariance(case)
            out["checks"].append({"name": "su2-invariance(exact)", "pass": ok2})
    else:
        ok = unitary_invariance(case)
        out["checks"].append({"name": "unitary-invariance(exact)", "pass": ok})
    out["pass"] = all(c["pass"] for c in out["checks"])
    return out


def _table_section(scenario, config, expected=None, expected_up=None):
    table = type_table(scenario, config.samples, config.seed)
    rows = [{
        "point_id": r.point_id, "stratum": r.stratum,
        "type_j1": r.type_j1, "type_j2": r.type_j2,
        "dim_k_cap_piL2": r.dim_k_cap_piL2,
        "type_j1_up": r.type_j1_up, "type_j2_up": r.type_j2_up,
        "indeterminate": r.indeterminate,
        "moment_condition": r.diagnostics["moment_condition"],
        "p_isotropy": r.diagnostics["p_isotropy"],
    } for r in table.rows]
    ok = all(r["p_isotropy"] < 1e-9 and r["moment_condition"] < 1e-8 for r in rows)
    expected_ok = True
    if expected:
        for r in table.rows:
            want = expected.get(r.stratum)
            if want is not None and (r.type_j1, r.type_j2) != tuple(want):
                expected_ok = False
    if expected_up:
        for r in table.rows:
            want = expected_up.get(r.stratum)
            if want is not None and r.type_j2_up != want:
                expected_ok = False
    indeterminate = any(r["indeterminate"] for r in rows)
    return table, {"rows": rows, "expected_match": expected_ok,
                   "indeterminate_rows": indeterminate,
                   "pass": ok and expected_ok}


def _formula_section(scenario, table):
    rows = verify_type_formula(scenario, table)
    return {"rows": rows, "pass": all(r["pass"] for r in rows)}


def _closure_section(case, scenario, batch):
    if case is None:
        return {"rows": [], "pass": True}
    fams = closure_families(case)
    rows = run_closure_families(fams, batch.points[:6])
    return {"rows": rows, "pass": all(r["pass"] for r in rows)}


def _bihermitian_section(scenario, batch, expect_distinct=None):
    rows = []
    ok = True
    for i, z in enumerate(batch.points[:8]):
        try:
            qb = quotient_bihermitian(scenario, z)
            row = {"sample": i, "stratum": scenario.stratum_label(z),
                   "distinct": qb.distinct, "even_type": qb.even_type}
            row.update({k: (v if isinstance(v, bool) else float(v))
                        for k, v in qb.checks.items()})
            ok = ok and qb.checks["valid"]
            rows.append(row)
        except ValidationError as exc:
            rows.append({"sample": i, "error": str(exc)})
            ok = False
    section = {"rows": rows, "pass": ok}
    if expect_distinct is not None and rows:
        gen = [r for r in rows if r.get("stratum") == "generic" and "distinct" in r]
        match = all(r["distinct"] == expect_distinct for r in gen)
        section["distinct_expected"] = expect_distinct
        section["distinct_match"] = match
        section["pass"] = ok and match
    return section


def run(config: RunConfig) -> dict:
    """Execute the pipeline stages implied by the command; returns the report."""
    if config.command == "catalog":
        entries = []
        for name in catalog_names():
            case = build_case(name)
            entries.append(case.describe())
        return {"header": _header(config), "sections": {"catalog": entries},
                "pass": True, "exit_code": 0}

    if config.tol != RANK_TOL:
        with rank_tolerance(config.tol):
            return _run_inner(config)
    return _run_inner(config)


def _run_inner(config: RunConfig) -> dict:
    case = None
    if config.case is not None:
        try:
            case = build_case(config.case)
        except KeyError:
            raise ConfigError(f"unknown catalog case {config.case!r}") from None
        scenario = case.scenario
    elif config.scenario_file is not None:
        with open(config.scenario_file) as fh:
            doc = json.load(fh)
        scenario = scenario_from_dict(doc)
    else:
        raise ConfigError("need --case or --scenario")

    batch = sample_level_set(scenario, config.samples, config.seed)
    sections = {}
    sections["validation"] = _validation_section(scenario, batch)
    sections["moment_map"] = _moment_section(scenario, batch)
    sections["maurer_cartan"] = _mc_section(scenario)
    sections["invariance"] = _invariance_section(case, scenario)
    indeterminate = False
    if config.command in ("deform", "reduce"):
        expected_up = case.expected_upstairs_j2 if case else None
        table, sec = _table_section(scenario, config,
                                    expected=(case.expected_strata if case and config.command == "reduce" else None),
                                    expected_up=expected_up)
        sections["type_table"] = sec
        indeterminate = sec["indeterminate_rows"]
        if config.command == "reduce":
            sections["type_formula"] = _formula_section(scenario, table)
            sections["closure"] = _closure_section(case, scenario, batch)
            sections["bihermitian"] = _bihermitian_section(
                scenario, batch,
                expect_distinct=case.expected_distinct if case else None)
    overall = all(s.get("pass", True) for s in sections.values())
    exit_code = 0 if overall else 1
    if indeterminate:
        exit_code = 4
    return {"header": _header(config, scenario), "sections": sections,
            "pass": overall, "exit_code": exit_code}


def run_sweep(config: RunConfig) -> dict:
    cases = {}
    ok = True
    indeterminate = False
    for name in catalog_names():
        sub = RunConfig(command="reduce", case=name, samples=max(8, config.samples // 2),
                        seed=config.seed, tol=config.tol)
        rep = run(sub)
        cases[name] = {"pass": rep["pass"], "exit_code": rep["exit_code"],
                       "sections": {k: v.get("pass", True)
                                    for k, v in rep["sections"].items()}}
        ok = ok and rep["pass"]
        indeterminate = indeterminate or rep["exit_code"] == 4
    return {"header": _header(config), "sections": {"sweep": cases},
            "pass": ok, "exit_code": 4 if indeterminate else (0 if ok else 1)}


class ConfigError(ValueError):
    pass


# -- emission -------------------------------------------------------------------

CSV_HEADER = "point_id,stratum,type_j1,type_j2,dim_k_cap_piL2"


def _json_default(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"{o.__class__.__name__} is not JSON serializable")


def emit(report: dict, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report, indent=2, allow_nan=False,
                           default=_json_default) + "\n").encode()
    if fmt == "csv":
        rows = report.get("sections", {}).get("type_table", {}).get("rows", [])
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in rows:
            buf.write(f"{r['point_id']},{r['stratum']},{r['type_j1']},"
                      f"{r['type_j2']},{r['dim_k_cap_piL2']}\n")
        return buf.getvalue().encode()
    if fmt == "text":
        buf = io.StringIO()
        h = report["header"]
        buf.write(f"gkw {h['version']} | command={h['command']} case={h.get('case')} "
                  f"samples={h['samples']} seed={h['seed']}\n")
        buf.write(f"conventions: {h['conventions']}\n")
        for name, sec in report["sections"].items():
            if name == "catalog":
                for e in sec:
                    buf.write(f"  {e['name']}: expected strata {e['expected_strata']}\n")
                continue
            if name == "sweep":
                for cname, c in sec.items():
                    buf.write(f"  {cname}: {'PASS' if c['pass'] else 'FAIL'} {c['sections']}\n")
                continue
            status = "PASS" if sec.get("pass", True) else "FAIL"
            buf.write(f"[{status}] {name}\n")
            if name == "type_table":
                for r in sec["rows"]:
                    buf.write(f"    point {r['point_id']:>3} {r['stratum']:>10} "
                              f"types ({r['type_j1']},{r['type_j2']}) "
                              f"up ({r['type_j1_up']},{r['type_j2_up']}) "
                              f"dim_cap {r['dim_k_cap_piL2']}"
                              f"{'  INDETERMINATE' if r['indeterminate'] else ''}\n")
        buf.write(f"overall: {'PASS' if report['pass'] else 'FAIL'}\n")
        return buf.getvalue().encode()
    raise ConfigError(f"unsupported format {fmt!r}")

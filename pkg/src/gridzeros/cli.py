"""Command-line surface: parse inputs, dispatch to modules, emit JSON/CSV.

Exit codes: 0 success; 1 input error; 2 violated theorem-backed assertion
(always a bug, never bad input); 3 an INCONCLUSIVE degeneracy verdict under
--strict.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .applications import (
    CurvePointSet,
    PlanePoint,
    cantilever_build,
    collinear_quadruples,
    collinear_triples,
    cubic_point_set,
    directions_count,
    distance_triple_poly,
    parabola_point_set,
)
from .common import (
    DEFAULT_PRIMES,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    InputError,
    InvariantViolation,
)
from .constructions import form_from_dict, extremal_sets, to_poly, verify_quadratic_growth
from .counting import (
    GridSet,
    analyze,
    count_zeros,
    cs_chain_check,
    scaling_sweep,
    witness_fiber_check,
)
from .curves import (
    PlaneCurve,
    build_family,
    dual_curve,
    exceptional_set,
    gamma_curve,
    popular_components,
)
from .degeneracy import INCONCLUSIVE, degeneracy_test
from .incidence import CurveMultiset, PointSet2, incidence_bound_report
from .parse import PolyParseError, parse_poly
from .scalars import GaussRat


def _emit(text: str, output: str):
    if output == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def _emit_json(obj, output: str):
    _emit(json.dumps(obj, indent=2, sort_keys=True), output)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"{path} is not valid JSON: {err}") from err


def _load_grids(paths: list[str]):
    grids = [GridSet.from_json(Path(p).read_text()) for p in paths]
    if len(grids) == 1:
        return grids[0], grids[0], grids[0]
    if len(grids) == 3:
        return tuple(grids)
    raise InputError("--sets takes one grid file (A=B=C) or three (A, B, C)")


def _parse_trivariate(args) -> "MPoly":
    variables = tuple(v.strip() for v in args.vars.split(","))
    if len(variables) != 3:
        raise InputError("--vars must name exactly three variables")
    return parse_poly(args.poly, variables)


def _parse_point(text: str) -> PlanePoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"point {text!r} must look like 'x,y'")
    return PlanePoint.of(
        GaussRat.from_literal(parts[0]), GaussRat.from_literal(parts[1])
    )


def _load_point_set(args) -> CurvePointSet:
    chosen = [
        args.cubic is not None,
        args.parabola is not None,
        args.points is not None,
    ]
    if sum(chosen) != 1:
        raise InputError("choose exactly one of --cubic, --parabola, --points")
    if args.cubic is not None:
        params = [GaussRat.from_literal(t) for t in args.cubic.split(",")]
        return cubic_point_set(params)
    if args.parabola is not None:
        params = [GaussRat.from_literal(t) for t in args.parabola.split(",")]
        return parabola_point_set(params)
    data = _read_json(args.points)
    pts = [
        PlanePoint.of(GaussRat.from_literal(x), GaussRat.from_literal(y))
        for x, y in data
    ]
    # a synthetic ambient curve through arbitrary points: the zero test is on
    # the census, so accept any points via a full-plane tag
    from .poly import MPoly

    curve = PlaneCurve(("x", "y"), MPoly.zero(("x", "y")), is_full_plane=True)
    return CurvePointSet(curve, tuple(pts))


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_count(args) -> int:
    F = _parse_trivariate(args)
    A, B, C = _load_grids(args.sets)
    engines = ["pair_loop", "triple_loop"] if args.engine == "both" else [args.engine]
    reports = [
        count_zeros(F, A, B, C, engine=e, primes=args.primes, seed=args.seed)
        for e in engines
    ]
    if len(reports) == 2 and reports[0].M != reports[1].M:
        raise InvariantViolation(
            f"engines disagree: {reports[0].M} vs {reports[1].M}"
        )
    out = reports[0].to_dict()
    if len(reports) == 2:
        out["engine"] = "both"
        out["engines_agree"] = True
    _emit_json(out, args.output)
    return 0


def _cmd_quadruples(args) -> int:
    F = _parse_trivariate(args)
    A, B, C = _load_grids(args.sets)
    report = analyze(F, A, B, C, engine=args.engine_single, primes=args.primes, seed=args.seed)
    ok, slack = cs_chain_check(report, len(A))
    out = report.to_dict()
    out["cs_ok"] = ok
    out["cs_slack"] = slack
    d = max(F.degree(), 1)
    out["fiber_violations"] = [
        {
            "quadruple": [str(v) for v in fv.quadruple],
            "witnesses": fv.witnesses,
            "covers_all_of_A": fv.covers_all_of_A,
            "identically_zero": fv.identically_zero,
        }
        for fv in witness_fiber_check(F, A, B, C, d)
    ]
    _emit_json(out, args.output)
    return 0


def _cmd_degeneracy(args) -> int:
    F = _parse_trivariate(args)
    verdict = degeneracy_test(F, samples=args.samples, seed=args.seed, tol=args.tolerance)
    _emit_json(verdict.to_dict(), args.output)
    if args.strict and verdict.verdict == INCONCLUSIVE:
        return 3
    return 0


def _cmd_gamma(args) -> int:
    F = _parse_trivariate(args)
    curve = gamma_curve(
        F, GaussRat.from_literal(args.y0), GaussRat.from_literal(args.y1)
    )
    _emit_json(curve.to_dict(), args.output)
    return 0


def _cmd_dual(args) -> int:
    F = _parse_trivariate(args)
    curve = dual_curve(
        F, GaussRat.from_literal(args.z0), GaussRat.from_literal(args.z1)
    )
    _emit_json(curve.to_dict(), args.output)
    return 0


def _cmd_popular(args) -> int:
    F = _parse_trivariate(args)
    if args.pairs:
        data = _read_json(args.pairs)
        pairs = [
            (GaussRat.from_literal(a), GaussRat.from_literal(b)) for a, b in data
        ]
    elif args.set:
        grid = GridSet.from_json(Path(args.set).read_text())
        pairs = [(a, b) for a in grid for b in grid]
    else:
        raise InputError("popular needs --pairs or --set")
    family = build_family(F, pairs)
    d = max(F.degree(), 1)
    report = popular_components(family, d, threshold=args.threshold)
    exc = exceptional_set(F, axis="y")
    out = {
        "n_curves": len(family.curves),
        "exceptional_pairs": [
            {"pair": [str(a), str(b)], "reason": reason}
            for (a, b), reason in family.exceptional
        ],
        "exceptional_axis_values": exc.to_dict(),
        "popular": report.to_dict(),
    }
    _emit_json(out, args.output)
    return 0


def _cmd_incidence(args) -> int:
    pts_data = _read_json(args.points)
    pts = PointSet2.from_points(
        [
            (GaussRat.from_literal(x), GaussRat.from_literal(y))
            for x, y in pts_data
        ]
    )
    curve_data = _read_json(args.curves)
    entries = []
    for item in curve_data:
        vars2 = tuple(item.get("vars", ["x", "y"]))
        defining = parse_poly(item["defining"], vars2)
        entries.append(
            (PlaneCurve(vars2, defining.monic()), int(item.get("multiplicity", 1)))
        )
    curves = CurveMultiset(entries=tuple(entries))
    report = incidence_bound_report(
        pts, curves, delta=args.delta, lam=getattr(args, "lam"), mu=args.mu
    )
    _emit_json(report, args.output)
    return 0


def _cmd_extremal(args) -> int:
    form = _load_form(args.form)
    if args.n_list:
        table = verify_quadratic_growth(form, _parse_n_list(args.n_list))
        _emit(table.to_csv(), args.output)
        return 0
    A, B, C = extremal_sets(form, args.n)
    F = to_poly(form)
    report = count_zeros(F, A, B, C, seed=args.seed, primes=args.primes)
    out = {
        "form": form.to_dict(),
        "polynomial": str(F),
        "n": args.n,
        "A": [str(v) for v in A],
        "B": [str(v) for v in B],
        "C": [str(v) for v in C],
        "M": report.M,
        "lower_bound_ok": 4 * report.M >= args.n * args.n,
    }
    _emit_json(out, args.output)
    return 0


def _load_form(spec: str):
    text = spec
    if not spec.lstrip().startswith("{"):
        text = Path(spec).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"form spec is not valid JSON: {err}") from err
    return form_from_dict(data)


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as err:
        raise InputError(f"bad n list {text!r}") from err


def _cmd_sweep(args) -> int:
    F = _parse_trivariate(args)
    result = scaling_sweep(
        F,
        family=args.family,
        n_list=_parse_n_list(args.n_list),
        seed=args.seed,
        engine=args.engine_single,
        stable_timing=args.no_timing,
    )
    csv_text = result.to_csv()
    if result.fitted_exponent is not None:
        csv_text += f"# fitted_exponent,{result.fitted_exponent:.6f}\n"
    else:
        csv_text += f"# fitted_exponent,{result.fit_note}\n"
    _emit(csv_text, args.output)
    return 0


def _cmd_collinear(args) -> int:
    s = _load_point_set(args)
    out = {
        "triples_ordered": collinear_triples(s, s, s),
        "quadruples_ordered": collinear_quadruples(s),
        "directions": directions_count(s) if len(s) >= 2 else None,
    }
    _emit_json(out, args.output)
    return 0


def _cmd_directions(args) -> int:
    s = _load_point_set(args)
    _emit_json({"directions": directions_count(s)}, args.output)
    return 0


def _cmd_distance_poly(args) -> int:
    p1, p2, p3 = (_parse_point(t) for t in (args.p1, args.p2, args.p3))
    from .applications import collinearity_det

    F = distance_triple_poly(p1, p2, p3)
    out = {
        "polynomial": str(F),
        "variables": list(F.variables),
        "degree": F.degree(),
        "anchors_collinear": collinearity_det(p1, p2, p3).is_zero(),
    }
    if args.test_degeneracy:
        verdict = degeneracy_test(
            F, samples=args.samples, seed=args.seed, tol=args.tolerance
        )
        out["degeneracy"] = verdict.to_dict()
        _emit_json(out, args.output)
        if args.strict and verdict.verdict == INCONCLUSIVE:
            return 3
        return 0
    _emit_json(out, args.output)
    return 0


def _cmd_cantilever(args) -> int:
    built = cantilever_build(
        GaussRat.from_literal(args.t1),
        GaussRat.from_literal(args.t3),
        GaussRat.from_literal(args.tq),
        args.steps,
    )
    out = {
        "points": [p.to_dict() for p in built.points],
        "triples": [list(t) for t in built.triples],
        "labels": [str(p.label) for p in built.points],
    }
    _emit_json(out, args.output)
    return 0


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridzeros",
        description=(
            "Exact counting of trivariate polynomial zeros on Cartesian "
            "products, with curve, incidence, and degeneracy analysis."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--primes", type=int, default=DEFAULT_PRIMES)
    common.add_argument("--threads", type=int, default=1, help="worker cap (advisory)")
    common.add_argument("--strict", action="store_true")

    poly_args = argparse.ArgumentParser(add_help=False)
    poly_args.add_argument("--poly", required=True, help="polynomial expression")
    poly_args.add_argument("--vars", default="x,y,z", help="comma-separated variables")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common, poly_args], help="count zeros on A x B x C")
    p.add_argument("--sets", nargs="+", required=True, help="1 or 3 grid JSON files")
    p.add_argument("--engine", choices=["pair_loop", "triple_loop", "both"], default="both")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("quadruples", parents=[common, poly_args], help="Q, R and fiber statistics")
    p.add_argument("--sets", nargs="+", required=True)
    p.add_argument("--engine", dest="engine_single", choices=["pair_loop", "triple_loop"], default="pair_loop")
    p.set_defaults(handler=_cmd_quadruples)

    p = sub.add_parser("degeneracy", parents=[common, poly_args], help="additive-structure verdict")
    p.set_defaults(handler=_cmd_degeneracy)

    p = sub.add_parser("gamma", parents=[common, poly_args], help="curve of witness-sharing (z, z') pairs")
    p.add_argument("--y0", required=True)
    p.add_argument("--y1", required=True)
    p.set_defaults(handler=_cmd_gamma)

    p = sub.add_parser("dual", parents=[common, poly_args], help="dual curve of (y, y') pairs")
    p.add_argument("--z0", required=True)
    p.add_argument("--z1", required=True)
    p.set_defaults(handler=_cmd_dual)

    p = sub.add_parser("popular", parents=[common, poly_args], help="shared components across a curve family")
    p.add_argument("--pairs", help="JSON file of [y, y'] literal pairs")
    p.add_argument("--set", help="grid JSON file; pairs = its Cartesian square")
    p.add_argument("--threshold", type=int, default=None)
    p.set_defaults(handler=_cmd_popular)

    p = sub.add_parser("incidence", parents=[common], help="incidences between points and curves")
    p.add_argument("--points", required=True, help="JSON array of [x, y] literals")
    p.add_argument("--curves", required=True, help="JSON array of curve objects")
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--mu", type=int, default=None)
    p.add_argument("--delta", type=int, default=None)
    p.set_defaults(handler=_cmd_incidence)

    p = sub.add_parser("extremal", parents=[common], help="quadratic-lower-bound grids for a special form")
    p.add_argument("--form", required=True, help="JSON form spec (inline or a path)")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--n-list", default=None, help="run the growth table instead")
    p.set_defaults(handler=_cmd_extremal)

    p = sub.add_parser("sweep", parents=[common, poly_args], help="scaling sweep to CSV")
    p.add_argument("--family", choices=["extremal", "random-integer", "arithmetic-progression"], default="extremal")
    p.add_argument("--n-list", required=True)
    p.add_argument("--engine", dest="engine_single", choices=["pair_loop", "triple_loop"], default="pair_loop")
    p.add_argument("--no-timing", action="store_true", help="zero the elapsed_ms column")
    p.set_defaults(handler=_cmd_sweep)

    points_args = argparse.ArgumentParser(add_help=False)
    points_args.add_argument("--cubic", help="comma-separated parameters on y = x^3")
    points_args.add_argument("--parabola", help="comma-separated parameters on y = x^2")
    points_args.add_argument("--points", help="JSON array of [x, y] literals")

    p = sub.add_parser("collinear", parents=[common, points_args], help="ordered proper collinear census")
    p.set_defaults(handler=_cmd_collinear)

    p = sub.add_parser("directions", parents=[common, points_args], help="distinct directions census")
    p.set_defaults(handler=_cmd_directions)

    p = sub.add_parser("distance-poly", parents=[common], help="three-anchor distance polynomial")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--p3", required=True)
    p.add_argument("--test-degeneracy", action="store_true")
    p.set_defaults(handler=_cmd_distance_poly)

    p = sub.add_parser("cantilever", parents=[common], help="chord construction on y = x^3")
    p.add_argument("--t1", required=True, help="first-curve anchor parameter")
    p.add_argument("--t3", required=True, help="third-curve anchor parameter")
    p.add_argument("--tq", required=True, help="free second-curve parameter")
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(handler=_cmd_cantilever)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 1 if err.code not in (0, None) else 0
    try:
        return args.handler(args)
    except (InputError, PolyParseError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except InvariantViolation as err:
        print(f"internal assertion violated (this is a bug): {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

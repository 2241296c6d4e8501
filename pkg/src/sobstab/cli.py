"""Batch command-line front end.

Subcommands: constants, thresholds, crossover, eval, dist, expand,
sweep-grid.  Reports are deterministic for a fixed configuration: floats are
rendered by shortest round-trip repr (at most 17 significant digits), CSV
uses '\\n' line endings, and JSON keys are sorted.  Every output embeds a
provenance header (toolkit version, ambient, tolerances) together with a
note that reported quotients are empirical values and upper bounds only.

Exit codes: 0 on success; 2 on validation errors (bad parameters, malformed
or mis-shaped input JSON, unsupported geometry); 3 on numerical
non-convergence, in which case a best-effort report is still written with a
``certified: false`` marker.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from . import __version__
from .bubbles import (
    BubbleParam,
    Superposition,
    superposition_from_dict,
)
from .constants import Ambient, sharp_constants
from .errors import (
    GeometryError,
    OptimizerError,
    ParameterError,
    QuadratureNonConvergence,
    SobstabError,
)
from .expansion import (
    assemble_report,
    default_lambda_grid,
    sweep_point,
    threshold_value,
)
from .functional import functional_report
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .thresholds import compare, crossover_scan

__all__ = ["main"]

_PROVENANCE_NOTE = (
    "reported quotients and thresholds are empirical values / upper bounds; "
    "no attainment or global optimality is claimed"
)


# ---------------------------------------------------------------------------
# formatting helpers


def _fmt(x: Any) -> str:
    """CSV cell: shortest round-trip decimal for floats, empty for None."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _provenance(
    amb: Ambient | None,
    cfg: QuadratureConfig | None,
    certified: bool = True,
) -> dict[str, Any]:
    prov: dict[str, Any] = {
        "toolkit": "sobstab",
        "version": __version__,
        "note": _PROVENANCE_NOTE,
        "certified": certified,
    }
    if amb is not None:
        prov["ambient"] = {"d": amb.d, "s": amb.s}
    if cfg is not None:
        prov["tolerances"] = {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol}
    return prov


def _prov_comments(prov: dict[str, Any]) -> list[str]:
    lines = [
        f"# toolkit: sobstab {prov['version']}",
        f"# certified: {'true' if prov['certified'] else 'false'}",
    ]
    if "ambient" in prov:
        a = prov["ambient"]
        lines.append(f"# ambient: d={a['d']} s={_fmt(float(a['s']))}")
    if "tolerances" in prov:
        t = prov["tolerances"]
        lines.append(
            f"# tolerances: rel_tol={_fmt(t['rel_tol'])} abs_tol={_fmt(t['abs_tol'])}"
        )
    lines.append(f"# note: {prov['note']}")
    return lines


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_doc(payload: dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_doc(prov: dict[str, Any], header: str, rows: list[list[Any]]) -> str:
    lines = _prov_comments(prov)
    lines.append(header)
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _bubble_dict(b: BubbleParam) -> dict[str, Any]:
    return {"coeff": b.coeff, "center": list(b.center), "lambda": b.scale}


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ParameterError(f"{flag}: could not parse '{text}' as floats") from exc
    if not values:
        raise ParameterError(f"{flag}: empty list")
    return values


def _load_superposition(path: str) -> Superposition:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"malformed JSON in {path}: {exc}") from exc
    return superposition_from_dict(doc)


def _quad_config(args: argparse.Namespace) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


# ---------------------------------------------------------------------------
# parallel workers (module level so they pickle under a process pool)


def _expand_task(task: tuple[float, int, float, float, float]):
    lam, d, s, rel, abs_ = task
    return sweep_point(lam, Ambient(d, s), QuadratureConfig(rel_tol=rel, abs_tol=abs_))


def _grid_task(task: tuple[int, float, float, float, float, float, float]):
    d, s, rel, abs_, c2, lam, sep = task
    try:
        amb = Ambient(d, s)
        cfg = QuadratureConfig(rel_tol=rel, abs_tol=abs_)
        origin = (0.0,) * d
        center2 = (sep,) + (0.0,) * (d - 1)
        u = Superposition(
            amb,
            (BubbleParam(1.0, origin, 1.0), BubbleParam(c2, center2, lam)),
        )
        rep = functional_report(u, cfg)
        return (
            "ok",
            (
                rep.hs_norm_sq,
                rep.lp_norm,
                rep.m.value,
                rep.dist_sq,
                rep.sobolev_quotient,
                rep.be_quotient,
            ),
        )
    except SobstabError as exc:
        return ("error", f"{type(exc).__name__}: {exc}")


def _map_ordered(worker, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_constants(args: argparse.Namespace) -> int:
    amb = Ambient(args.d, args.s)
    cst = sharp_constants(amb)
    payload = {
        "provenance": _provenance(amb, None),
        "d": amb.d,
        "s": amb.s,
        "two_star": amb.two_star,
        "c_d": cst.c_d,
        "A_ds": cst.A_ds,
        "S_d": cst.S_d,
        "c0": cst.c0,
        "a_d": cst.a_d,
        "b_d": cst.b_d,
    }
    _emit(_json_doc(payload), args.out)
    return 0


def _cmd_thresholds(args: argparse.Namespace) -> int:
    amb = Ambient(args.d, args.s)
    rep = compare(amb)
    payload = {
        "provenance": _provenance(amb, None),
        "d": amb.d,
        "s": amb.s,
        "c_spec": rep.c_spec,
        "c_two_peak": rep.c_two_peak,
        "binding": rep.binding.value,
        "upper_bound_on_cBE": rep.upper_bound_on_cBE,
        "d1_caveat": rep.d1_caveat,
    }
    _emit(_json_doc(payload), args.out)
    return 0


def _cmd_crossover(args: argparse.Namespace) -> int:
    scan = crossover_scan(args.s, args.d_min, args.d_max)
    prov = _provenance(None, None)
    if args.format == "json":
        payload = {
            "provenance": prov,
            "s": scan.s,
            "exploratory": scan.exploratory,
            "crossover_d": scan.crossover_d,
            "reports": [
                {
                    "d": r.ambient.d,
                    "s": r.ambient.s,
                    "c_spec": r.c_spec,
                    "c_two_peak": r.c_two_peak,
                    "binding": r.binding.value,
                    "upper_bound_on_cBE": r.upper_bound_on_cBE,
                    "d1_caveat": r.d1_caveat,
                }
                for r in scan.reports
            ],
        }
        _emit(_json_doc(payload), args.out)
        return 0
    rows = [
        [r.ambient.d, float(r.ambient.s), r.c_spec, r.c_two_peak, r.binding.value]
        for r in scan.reports
    ]
    doc = _csv_doc(prov, "d,s,c_spec,c_two_peak,binding", rows)
    extra = (
        f"# crossover_d: {scan.crossover_d}\n"
        f"# exploratory: {'true' if scan.exploratory else 'false'}\n"
    )
    _emit(doc + extra, args.out)
    return 0


def _functional_payload(u: Superposition, cfg: QuadratureConfig) -> dict[str, Any]:
    rep = functional_report(u, cfg)
    return {
        "hs_norm_sq": rep.hs_norm_sq,
        "lp_norm": rep.lp_norm,
        "m": {
            "value": rep.m.value,
            "maximizer": _bubble_dict(rep.m.maximizer),
            "all_local_maxima": [
                {"bubble": _bubble_dict(b), "value": v}
                for b, v in rep.m.all_local_maxima
            ],
        },
        "dist_sq": rep.dist_sq,
        "sobolev_quotient": rep.sobolev_quotient,
        "be_quotient": rep.be_quotient,
    }


def _cmd_eval(args: argparse.Namespace) -> int:
    u = _load_superposition(args.config)
    cfg = _quad_config(args)
    try:
        payload = _functional_payload(u, cfg)
    except (QuadratureNonConvergence, OptimizerError) as exc:
        doc = {
            "provenance": _provenance(u.ambient, cfg, certified=False),
            "error": f"{type(exc).__name__}: {exc}",
        }
        _emit(_json_doc(doc), args.out)
        return 3
    payload["provenance"] = _provenance(u.ambient, cfg)
    _emit(_json_doc(payload), args.out)
    return 0


def _cmd_dist(args: argparse.Namespace) -> int:
    u = _load_superposition(args.config)
    cfg = _quad_config(args)
    try:
        rep = functional_report(u, cfg)
    except (QuadratureNonConvergence, OptimizerError) as exc:
        doc = {
            "provenance": _provenance(u.ambient, cfg, certified=False),
            "error": f"{type(exc).__name__}: {exc}",
        }
        _emit(_json_doc(doc), args.out)
        return 3
    payload = {
        "provenance": _provenance(u.ambient, cfg),
        "hs_norm_sq": rep.hs_norm_sq,
        "m": rep.m.value,
        "maximizer": _bubble_dict(rep.m.maximizer),
        "dist_sq": rep.dist_sq,
    }
    _emit(_json_doc(payload), args.out)
    return 0


_EXPAND_HEADER = "lambda,hs_norm_sq,lp_norm_sq_2star,m,mu_of_lambda,dist_sq,be_value"


def _fit_payload(report) -> dict[str, Any]:
    return {
        "fitted_exponent": report.fitted_exponent,
        "fitted_coefficient": report.fitted_coefficient,
        "predicted_exponent": report.predicted_exponent,
        "predicted_coefficient": report.predicted_coefficient,
        "residual_max": report.residual_max,
        "threshold": report.threshold,
        "mu_bound_constant": report.mu_bound_constant,
        "excluded": [
            {"lambda": lam, "reason": reason} for lam, reason in report.excluded
        ],
    }


def _cmd_expand(args: argparse.Namespace) -> int:
    amb = Ambient(args.d, args.s)
    cfg = _quad_config(args)
    if args.lam_list is not None:
        grid = _parse_float_list(args.lam_list, "--lambda")
        for lam in grid:
            if not 0.0 < lam <= 1.0:
                raise ParameterError(
                    f"--lambda values must lie in (0, 1], got {lam}"
                )
    else:
        grid = default_lambda_grid(amb, cfg)
    tasks = [(lam, amb.d, amb.s, cfg.rel_tol, cfg.abs_tol) for lam in grid]
    certified = True
    try:
        points = _map_ordered(_expand_task, tasks, args.jobs)
    except (QuadratureNonConvergence, OptimizerError) as exc:
        doc = {
            "provenance": _provenance(amb, cfg, certified=False),
            "error": f"{type(exc).__name__}: {exc}",
        }
        _emit(_json_doc(doc), args.out)
        return 3
    report = assemble_report(amb, points, cfg)
    prov = _provenance(amb, cfg, certified=certified)
    if args.format == "json":
        payload = {
            "provenance": prov,
            "points": [
                {
                    "lambda": p.lam,
                    "hs_norm_sq": p.hs_norm_sq,
                    "lp_norm_sq_2star": p.lp_norm_sq_2star,
                    "m": p.m_value,
                    "mu_of_lambda": p.mu_of_lambda,
                    "dist_sq": p.dist_sq,
                    "be_value": p.be_value,
                }
                for p in report.points
            ],
            "fit": _fit_payload(report),
        }
        _emit(_json_doc(payload), args.out)
        return 0
    rows = [
        [
            p.lam,
            p.hs_norm_sq,
            p.lp_norm_sq_2star,
            p.m_value,
            p.mu_of_lambda,
            p.dist_sq,
            p.be_value,
        ]
        for p in report.points
    ]
    csv_text = _csv_doc(prov, _EXPAND_HEADER, rows)
    fit_doc = _json_doc({"fit": _fit_payload(report)})
    if args.out is None:
        # single stream: append the fit summary as comment lines
        fit_comments = "".join(f"# {line}\n" for line in fit_doc.rstrip().split("\n"))
        _emit(csv_text + fit_comments, None)
    else:
        _emit(csv_text, args.out)
        sys.stdout.write(fit_doc)
    return 0


_GRID_HEADER = (
    "c2,lambda,separation,status,hs_norm_sq,lp_norm,m,dist_sq,"
    "sobolev_quotient,be_value,below_threshold"
)


def _cmd_sweep_grid(args: argparse.Namespace) -> int:
    amb = Ambient(args.d, args.s)
    cfg = _quad_config(args)
    c2s = _parse_float_list(args.c2, "--c2")
    lams = _parse_float_list(args.lam_list, "--lambda")
    seps = _parse_float_list(args.separation, "--separation")
    for lam in lams:
        if not lam > 0.0:
            raise ParameterError(f"--lambda values must be > 0, got {lam}")
    for sep in seps:
        if sep < 0.0:
            raise ParameterError(f"--separation values must be >= 0, got {sep}")
    combos = list(itertools.product(c2s, lams, seps))
    tasks = [
        (amb.d, amb.s, cfg.rel_tol, cfg.abs_tol, c2, lam, sep)
        for c2, lam, sep in combos
    ]
    results = _map_ordered(_grid_task, tasks, args.jobs)
    bound = min(compare(amb).c_spec, compare(amb).c_two_peak)
    rows: list[list[Any]] = []
    failures = 0
    for (c2, lam, sep), (status, payload) in zip(combos, results):
        if status == "ok":
            hs, lp, m, d2, quot, be = payload
            flagged = be is not None and be < 0.95 * bound
            rows.append([c2, lam, sep, "ok", hs, lp, m, d2, quot, be, flagged])
        else:
            failures += 1
            rows.append([c2, lam, sep, payload, None, None, None, None, None, None, None])
    prov = _provenance(amb, cfg, certified=failures == 0)
    doc = _csv_doc(prov, _GRID_HEADER, rows)
    _emit(doc, args.out)
    if failures:
        sys.stderr.write(f"sweep-grid: {failures} grid point(s) failed\n")
        return 3
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_ambient(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, required=True, help="ambient dimension")
    p.add_argument("--s", type=float, required=True, help="smoothness order in (0, d/2)")


def _add_tolerances(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--rel-tol", type=float, default=DEFAULT_CONFIG.rel_tol,
        help="quadrature relative tolerance",
    )
    p.add_argument(
        "--abs-tol", type=float, default=DEFAULT_CONFIG.abs_tol,
        help="quadrature absolute tolerance",
    )


def _add_output(p: argparse.ArgumentParser, formats: tuple[str, ...] | None) -> None:
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    if formats:
        p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobstab",
        description=(
            "Numerical toolkit for Sobolev stability quotients on bubble "
            "superpositions"
        ),
    )
    parser.add_argument("--version", action="version", version=f"sobstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="sharp-constant closed forms")
    _add_ambient(p)
    _add_output(p, None)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("thresholds", help="spectral vs two-peak thresholds")
    _add_ambient(p)
    _add_output(p, None)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("crossover", help="scan thresholds across dimensions")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--d-min", type=int, default=3)
    p.add_argument("--d-max", type=int, default=12)
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=_cmd_crossover)

    p = sub.add_parser("eval", help="full functional report for a superposition")
    p.add_argument("--config", required=True, help="superposition JSON path")
    _add_tolerances(p)
    _add_output(p, None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("dist", help="distance-to-manifold report")
    p.add_argument("--config", required=True, help="superposition JSON path")
    _add_tolerances(p)
    _add_output(p, None)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("expand", help="two-bubble lambda sweep with deficit fit")
    _add_ambient(p)
    _add_tolerances(p)
    p.add_argument(
        "--lambda", dest="lam_list", default=None,
        help="comma-separated scale list (default: auto grid)",
    )
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser(
        "sweep-grid", help="two-bubble (c2, lambda, separation) grid scan"
    )
    _add_ambient(p)
    _add_tolerances(p)
    p.add_argument("--c2", required=True, help="comma-separated second coefficients")
    p.add_argument(
        "--lambda", dest="lam_list", required=True,
        help="comma-separated second scales",
    )
    p.add_argument(
        "--separation", required=True,
        help="comma-separated center separations along the first axis",
    )
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p, ("csv",))
    p.set_defaults(func=_cmd_sweep_grid)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, GeometryError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (QuadratureNonConvergence, OptimizerError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

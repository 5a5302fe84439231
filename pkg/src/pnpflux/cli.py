"""Command-line front-end.

Subcommands: flux, bifurcate, sweep, check-conjectures, geometry, plot.
Flags override values from an optional plain-text config file
(``key = value`` per line, ``#`` comments); hard defaults apply last.
Exit codes: 0 success, 2 usage or validation error, 3 no solution,
4 conjecture-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .bifurcation import (BranchTable, branch_sweep, evaluate_conjectures,
                          solve_bifurcation, LOG_SIGMA_MIN)
from .errors import ProfileError
from .geometry import ChargeProfile, channel_from_profile, load_profile
from .governing import solve_governing
from .model import (ChannelProfile, PhysicalScaling, ScaledBoundary, unscale)
from .nlsolve import MultiStartBox
from .svgplot import render_line_plot

FLUX_COLUMNS_SCALED = ("A", "B", "I", "F", "j1", "j2", "j1_0", "j2_0", "lambda1", "lambda2")
FLUX_COLUMNS_UNSCALED = ("A", "B", "I", "F", "J1", "J2", "J1_0", "J2_0", "lambda1", "lambda2")
BIF_COLUMNS = ("k", "sigma", "r", "l", "A", "B", "I", "V", "j1", "j2",
               "lambda2", "residual", "lam_check", "dlam_dV_check")
SWEEP_COLUMNS = ("k", "branch_r", "sigma", "r", "l", "A", "B", "I", "V",
                 "j1", "j2", "lambda2", "residual")
REJECT_COLUMNS = ("k", "sigma", "l", "A", "I", "V", "residual", "reason")

PLOT_SERIES = {
    "lambda2-vs-V": ("V", ("lambda2",)),
    "lambda2-vs-l": ("l", ("lambda2",)),
    "j-vs-l": ("l", ("j1", "j2")),
    "I-vs-l": ("l", ("I",)),
    "V-vs-l": ("l", ("V",)),
}


def _fmt(value) -> str:
    """17 significant digits: round-trip exact in CSV."""
    if value is None:
        return "degenerate"
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.17g}"


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _parse_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            cfg[key.replace("-", "_")] = value
    return cfg


def _apply_config(args: argparse.Namespace, spec: dict) -> None:
    """Fill None options from the config file, then from hard defaults."""
    cfg = _parse_config(args.config) if getattr(args, "config", None) else {}
    for dest, (convert, default) in spec.items():
        if getattr(args, dest, None) is None:
            if dest in cfg:
                setattr(args, dest, convert(cfg[dest]))
            else:
                setattr(args, dest, default)


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _l_grid(text: str) -> list[float]:
    """Either 'lo:hi:count' or a comma-separated list."""
    if ":" in text:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
        if n < 1 or hi <= lo:
            raise ValueError("grid spec must be lo:hi:count with lo < hi, count >= 1")
        if n == 1:
            return [lo]
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    return _float_list(text)


def _channel_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> ChannelProfile:
    if getattr(args, "profile", None):
        a = getattr(args, "a", None)
        b = getattr(args, "b", None)
        if a is None or b is None:
            parser.error("--profile requires --a and --b")
        try:
            return channel_from_profile(load_profile(args.profile), ChargeProfile(a=a, b=b, Q0=1.0))
        except (ProfileError, OSError, ValueError) as exc:
            parser.error(f"profile: {exc}")
    alpha = getattr(args, "alpha", None)
    beta = getattr(args, "beta", None)
    if alpha is not None or beta is not None:
        if alpha is None or beta is None:
            parser.error("--alpha and --beta must be given together")
        try:
            # uniform-profile parameterization: H(x) = x, junctions at alpha, beta
            return ChannelProfile(a=alpha, b=beta, alpha=alpha, beta=beta, H_a=alpha, H_1=1.0)
        except ValueError as exc:
            parser.error(str(exc))
    return ChannelProfile.default()


def _add_geometry_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", type=float, help="geometry coefficient H(a)/H(1) (default 1/3)")
    sub.add_argument("--beta", type=float, help="geometry coefficient H(b)/H(1) (default 2/3)")
    sub.add_argument("--profile", help="tabulated profile file ('x h D' per line)")
    sub.add_argument("--a", type=float, help="left charge junction (with --profile)")
    sub.add_argument("--b", type=float, help="right charge junction (with --profile)")


def _box_from_args(args, parser) -> MultiStartBox | None:
    box_text = getattr(args, "box", None)
    grid = getattr(args, "grid", None)
    lower = (0.0, 0.0, -60.0, -80.0)
    upper = (10.0, 10.0, 60.0, 80.0)
    counts = (5, 5, 7, 7)
    if box_text:
        try:
            parts = box_text.split(",")
            if len(parts) != 4:
                raise ValueError("need 4 comma-separated lo:hi ranges")
            bounds = [tuple(float(t) for t in p.split(":")) for p in parts]
            lower = tuple(b[0] for b in bounds)
            upper = tuple(b[1] for b in bounds)
        except (ValueError, IndexError) as exc:
            parser.error(f"--box: {exc}")
    if grid:
        if len(grid) != 4 or any(n < 1 for n in grid):
            parser.error("--grid needs 4 positive integers")
        counts = tuple(grid)
    if box_text is None and grid is None:
        return None
    try:
        return MultiStartBox(lower=lower, upper=upper, counts=counts)
    except ValueError as exc:
        parser.error(f"start box: {exc}")


def _lambda_cols(lam1, lam2):
    return (lam1 if lam1 is not None else None, lam2 if lam2 is not None else None)


# --------------------------------------------------------------------------
# flux


def _cmd_flux(args, parser) -> int:
    _apply_config(args, {
        "l": (float, None), "r": (float, None), "V": (float, None),
        "Q0": (float, None), "L": (float, None), "R": (float, None),
        "format": (str, "csv"), "out": (str, "-"),
    })
    cp = _channel_from_args(args, parser)
    unscaled_mode = args.Q0 is not None or args.L is not None or args.R is not None
    if unscaled_mode:
        if args.Q0 is None or args.L is None or args.R is None or args.V is None:
            parser.error("unscaled mode needs --Q0, --L, --R and --V")
        if args.Q0 <= 0.0:
            parser.error(f"Q0 must be positive, got {args.Q0}")
        if args.L <= 0.0 or args.R <= 0.0:
            parser.error("boundary concentrations L and R must be positive")
        l, r = args.L / args.Q0, args.R / args.Q0
    else:
        if args.l is None or args.r is None or args.V is None:
            parser.error("scaled mode needs --l, --r and --V")
        if args.l <= 0.0:
            parser.error(f"boundary concentration l must be positive, got l={args.l}")
        if args.r <= 0.0:
            parser.error(f"boundary concentration r must be positive, got r={args.r}")
        l, r = args.l, args.r

    bc = ScaledBoundary.from_concentrations(l, r, args.V)
    sols = solve_governing(bc, cp)
    if not sols:
        print("no governing solution found", file=sys.stderr)
        return 3

    rows = []
    for sol in sols:
        lam1, lam2 = _lambda_cols(sol.fluxes.lambda1, sol.fluxes.lambda2)
        if unscaled_mode:
            ps = PhysicalScaling(Q0=args.Q0, L=args.L, R=args.R)
            u = unscale(sol.state, sol.fluxes, ps, cp)
            j10 = sol.fluxes.j1_0 * 2.0 * args.Q0 / cp.H_a
            j20 = sol.fluxes.j2_0 * 2.0 * args.Q0 / cp.H_a
            rows.append((u.A, u.B, u.I, u.F, u.J1, u.J2, j10, j20, lam1, lam2))
        else:
            s, f = sol.state, sol.fluxes
            rows.append((s.A, s.B, s.I, s.f, f.j1, f.j2, f.j1_0, f.j2_0, lam1, lam2))

    columns = FLUX_COLUMNS_UNSCALED if unscaled_mode else FLUX_COLUMNS_SCALED
    if args.format == "json":
        payload = [{c: (None if v is None else v) for c, v in zip(columns, row)} for row in rows]
        _write_text(args.out, json.dumps({"solutions": payload}, indent=2) + "\n")
    else:
        _write_text(args.out, _csv_text(columns, rows))
    return 0


# --------------------------------------------------------------------------
# bifurcate


def _bif_row(point):
    lam2 = point.lambda_other if point.k == 1 else point.validation.lambda_k
    return (point.k, point.sigma, point.r, point.l, point.A, point.B, point.I,
            point.V, point.j1, point.j2, lam2, point.residual,
            point.validation.lambda_k, point.validation.dlambda_dV)


def _cmd_bifurcate(args, parser) -> int:
    _apply_config(args, {
        "k": (int, 1), "sigma": (float, None), "grid": (_int_list, None),
        "box": (str, None), "out": (str, "-"), "rejects": (str, None),
    })
    if args.sigma is None:
        parser.error("--sigma is required")
    if args.k not in (1, 2):
        parser.error("--k must be 1 or 2")
    if args.sigma <= 0.0:
        parser.error(f"sigma must be positive, got {args.sigma}")
    if abs(math.log(args.sigma)) <= LOG_SIGMA_MIN:
        parser.error("sigma too close to 1: the critical-ratio system degenerates there")
    cp = _channel_from_args(args, parser)
    box = _box_from_args(args, parser)

    result = solve_bifurcation(args.k, args.sigma, cp, box=box)
    if args.rejects:
        reject_rows = [(args.k, args.sigma, *rej.x, rej.residual, rej.reason)
                       for rej in result.rejects]
        _write_text(args.rejects, _csv_text(REJECT_COLUMNS, reject_rows))
    _write_text(args.out, _csv_text(BIF_COLUMNS, [_bif_row(p) for p in result.accepted]))
    if not result.accepted:
        print("no accepted bifurcation point", file=sys.stderr)
        return 3
    return 0


# --------------------------------------------------------------------------
# sweep / check-conjectures


def _sweep_rows(table: BranchTable):
    rows = []
    for br in table.branches:
        for bp in br.points:
            p = bp.point
            lam2 = p.lambda_other if p.k == 1 else p.validation.lambda_k
            rows.append((p.k, br.r, bp.sigma, p.r, p.l, p.A, p.B, p.I, p.V,
                         p.j1, p.j2, lam2, p.residual))
    return rows


def _summary_payload(table: BranchTable) -> dict:
    branches = []
    for br in table.branches:
        s = br.summary
        branches.append({
            "r": br.r,
            "n_points": s.n_points,
            "lambda2_max": s.lambda2_max,
            "l_at_lambda2_max": s.l_at_lambda2_max,
            "V_at_lambda2_max": s.V_at_lambda2_max,
            "I_at_lambda2_max": s.I_at_lambda2_max,
            "lambda2_shape_in_V": s.lambda2_shape_in_V,
            "lambda2_shape_in_I": s.lambda2_shape_in_I,
            "j1_strictly_increasing": s.j1_strictly_increasing,
            "j2_strictly_decreasing": s.j2_strictly_decreasing,
            "j1_sign_changes": s.j1_sign_changes,
            "j2_sign_changes": s.j2_sign_changes,
            "sign_agreement": s.sign_agreement,
        })
    cross = table.cross_r
    return {
        "k": table.k,
        "branches": branches,
        "cross_r": None if cross is None else {
            "status": cross.status,
            "V_star_decreasing_in_r": cross.V_star_decreasing_in_r,
            "I_star_decreasing_in_r": cross.I_star_decreasing_in_r,
            "lambda2_star_decreasing_in_r": cross.lambda2_star_decreasing_in_r,
            "l_star_decreasing_in_r": cross.l_star_decreasing_in_r,
        },
    }


def _run_sweep(args, parser) -> BranchTable:
    cp = _channel_from_args(args, parser)
    l_grid = args.l_grid if args.l_grid else None
    return branch_sweep(args.k, args.r, cp, l_grid=l_grid)


def _cmd_sweep(args, parser) -> int:
    _apply_config(args, {
        "k": (int, 1), "r": (_float_list, [1.0, 2.0, 3.0, 4.0]),
        "l_grid": (_l_grid, None), "out": (str, "-"), "summary_out": (str, None),
    })
    if args.k not in (1, 2):
        parser.error("--k must be 1 or 2")
    table = _run_sweep(args, parser)
    _write_text(args.out, _csv_text(SWEEP_COLUMNS, _sweep_rows(table)))
    if args.summary_out:
        _write_text(args.summary_out, json.dumps(_summary_payload(table), indent=2) + "\n")
    if not any(br.points for br in table.branches):
        print("no accepted bifurcation point on any branch", file=sys.stderr)
        return 3
    return 0


def _cmd_check_conjectures(args, parser) -> int:
    _apply_config(args, {
        "k": (int, 1), "r": (_float_list, [1.0, 2.0, 3.0, 4.0]),
        "l_grid": (_l_grid, None), "out": (str, None), "summary_out": (str, None),
    })
    if args.k not in (1, 2):
        parser.error("--k must be 1 or 2")
    table = _run_sweep(args, parser)
    if args.out:
        _write_text(args.out, _csv_text(SWEEP_COLUMNS, _sweep_rows(table)))
    if args.summary_out:
        _write_text(args.summary_out, json.dumps(_summary_payload(table), indent=2) + "\n")

    rows = evaluate_conjectures(table)
    width = max(len(row.clause) for row in rows)
    print(f"{'branch':>8}  {'clause':<{width}}  {'kind':<8}  {'status':<7}  detail")
    for row in rows:
        label = f"r={row.branch_r:g}" if row.branch_r is not None else "all"
        kind = "hard" if row.hard else "reported"
        print(f"{label:>8}  {row.clause:<{width}}  {kind:<8}  {row.status:<7}  {row.detail}")

    failures = [row for row in rows if row.hard and row.status == "fail"]
    if failures:
        print(f"\n{len(failures)} hard clause(s) failed:", file=sys.stderr)
        for row in failures:
            label = f"r={row.branch_r:g}" if row.branch_r is not None else "all"
            print(f"  {label} {row.clause}: {row.description} [{row.detail}]", file=sys.stderr)
        return 4
    return 0


# --------------------------------------------------------------------------
# geometry


def _cmd_geometry(args, parser) -> int:
    _apply_config(args, {"a": (float, None), "b": (float, None), "out": (str, "-")})
    if args.a is None or args.b is None:
        parser.error("--a and --b are required")
    if not args.profile:
        parser.error("--profile is required")
    try:
        profile = load_profile(args.profile)
        cp = channel_from_profile(profile, ChargeProfile(a=args.a, b=args.b, Q0=1.0))
    except (ProfileError, ValueError, OSError) as exc:
        print(f"geometry: {exc}", file=sys.stderr)
        return 2
    payload = {"alpha": cp.alpha, "beta": cp.beta, "H_a": cp.H_a, "H_1": cp.H_1}
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


# --------------------------------------------------------------------------
# plot


def _cmd_plot(args, parser) -> int:
    _apply_config(args, {"series": (str, None), "out": (str, None)})
    if args.series not in PLOT_SERIES:
        parser.error(f"--series must be one of {', '.join(sorted(PLOT_SERIES))}")
    if not args.out:
        parser.error("--out is required")
    xcol, ycols = PLOT_SERIES[args.series]
    try:
        with open(args.input, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            missing = [c for c in (xcol, *ycols) if c not in fields]
            if missing:
                print(f"plot: missing columns {missing} in {args.input}", file=sys.stderr)
                return 2
            records = list(reader)
    except OSError as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return 2
    if not records:
        print("plot: no data rows", file=sys.stderr)
        return 2

    group_col = "branch_r" if "branch_r" in (records[0].keys()) else None
    groups: dict[str, list[dict]] = {}
    for rec in records:
        groups.setdefault(rec[group_col] if group_col else "", []).append(rec)

    series = []
    for gkey in sorted(groups):
        rows = groups[gkey]
        for ycol in ycols:
            pts = []
            for rec in rows:
                try:
                    pts.append((float(rec[xcol]), float(rec[ycol])))
                except ValueError:
                    continue  # degenerate markers are skipped
            pts.sort(key=lambda t: t[0])
            if pts:
                label = ycol if not gkey else f"{ycol} (r={gkey})"
                series.append((label, [p[0] for p in pts], [p[1] for p in pts]))
    if not series:
        print("plot: no numeric data to plot", file=sys.stderr)
        return 2
    svg = render_line_plot(series, title=args.series, xlabel=xcol, ylabel="/".join(ycols))
    _write_text(args.out, svg)
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnpflux",
        description="Flux ratios and bifurcation moments of a reduced "
                    "two-ion channel model with piecewise-constant permanent charge.",
        epilog="Config file: plain text, one 'key = value' per line, '#' comments; "
               "command-line flags override config values. "
               "check-conjectures exit code reflects hard clauses only "
               "(per-branch sign, monotonicity, unimodality and flux-pattern "
               "verdicts); cross-r ordering clauses are reported but never fail the run.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flux", help="solve the governing system and print fluxes and ratios")
    p.add_argument("--l", type=float, help="scaled left concentration (> 0)")
    p.add_argument("--r", type=float, help="scaled right concentration (> 0)")
    p.add_argument("--V", type=float, help="transmembrane potential")
    p.add_argument("--Q0", type=float, help="permanent-charge level (unscaled mode)")
    p.add_argument("--L", type=float, help="left concentration (unscaled mode)")
    p.add_argument("--R", type=float, help="right concentration (unscaled mode)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output path, '-' for stdout (default)")
    p.add_argument("--config", help="key=value config file")
    _add_geometry_options(p)
    p.set_defaults(func=_cmd_flux)

    p = sub.add_parser("bifurcate", help="solve the bifurcation-moment system at fixed sigma")
    p.add_argument("--k", type=int, help="species index, 1 (cation, default) or 2 (exploratory)")
    p.add_argument("--sigma", type=float, help="fixed concentration ratio l/r")
    p.add_argument("--grid", type=_int_list, help="start counts per dimension, e.g. 5,5,7,7")
    p.add_argument("--box", help="start ranges lo:hi,lo:hi,lo:hi,lo:hi for (l, A, I, V)")
    p.add_argument("--out", help="CSV path, '-' for stdout (default)")
    p.add_argument("--rejects", help="side CSV for rejected roots with reasons")
    p.add_argument("--config", help="key=value config file")
    _add_geometry_options(p)
    p.set_defaults(func=_cmd_bifurcate)

    p = sub.add_parser("sweep", help="bifurcate across branches labeled by nominal r")
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=_float_list, help="nominal r list, e.g. 1,2,3,4 (default)")
    p.add_argument("--l-grid", dest="l_grid", type=_l_grid,
                   help="sweep nodes: 'lo:hi:count' or comma list "
                        "(default 0.5..10 step 0.5, nodes above r)")
    p.add_argument("--out", help="branch CSV path, '-' for stdout (default)")
    p.add_argument("--summary-out", dest="summary_out", help="branch summary JSON path")
    p.add_argument("--config", help="key=value config file")
    _add_geometry_options(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("check-conjectures",
                       help="run the default sweep and verdict the conjectured branch properties")
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=_float_list, help="nominal r list (default 1,2,3,4)")
    p.add_argument("--l-grid", dest="l_grid", type=_l_grid)
    p.add_argument("--out", help="branch CSV path (optional)")
    p.add_argument("--summary-out", dest="summary_out", help="branch summary JSON path")
    p.add_argument("--config", help="key=value config file")
    _add_geometry_options(p)
    p.set_defaults(func=_cmd_check_conjectures)

    p = sub.add_parser("geometry", help="integrate a tabulated profile into alpha, beta")
    p.add_argument("--profile", required=True)
    p.add_argument("--a", type=float, help="left charge junction in (0, 1)")
    p.add_argument("--b", type=float, help="right charge junction in (0, 1)")
    p.add_argument("--out", help="JSON path, '-' for stdout (default)")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_geometry)

    p = sub.add_parser("plot", help="render a sweep CSV as an SVG line plot")
    p.add_argument("--input", required=True, help="branch CSV from bifurcate/sweep")
    p.add_argument("--series", help=f"one of: {', '.join(sorted(PLOT_SERIES))}")
    p.add_argument("--out", help="SVG output path")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except BrokenPipeError:
        return 0


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))

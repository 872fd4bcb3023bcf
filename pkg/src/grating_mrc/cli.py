"""Command-line interface.

    grating-mrc solve         one configuration, text report
    grating-mrc table         the twelve benchmark runs, CSV
    grating-mrc field         scattered/total field on a grid, CSV
    grating-mrc efficiencies  diffraction-order amplitudes and efficiencies, CSV
    grating-mrc validate      cross-module invariant suite

Exit codes: 0 success, 1 usage/config error, 2 residual target not met.
With ``--out PATH`` the delimited output goes to PATH and a companion PNG
figure is rendered alongside it (suppress with ``--no-figures``).
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import figures
from .config import RunConfig, apply_settings, load_config_file, parse_pole_offset, parse_theta
from .errors import GratingError, NotConverged
from .geometry import boundary_height, profile_nodes
from .modes import ModeSystem, incident_field
from .reference import REFERENCE_RESIDUALS, TABLE_ANGLES, TABLE_ROWS
from .solver import (
    MrcSolution,
    diffraction_efficiencies,
    energy_balance,
    evaluate_field,
    mrc_solve,
    rayleigh_coefficients,
)
from .validation import run_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2


def format_float(x: float) -> str:
    """9 significant digits; scientific notation below 1e-3 in magnitude."""
    if x != x:
        return "nan"
    if x == 0:
        return "0"
    if abs(x) < 1e-3:
        return f"{x:.8e}"
    return f"{x:.9g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grating-mrc",
        description="Plane-wave scattering by Dirichlet periodic surfaces "
                    "(outgoing-dictionary least squares).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value config file")
    common.add_argument("--profile", help="I|II|III|IV|flat|file:PATH")
    common.add_argument("--flat-height", type=float, dest="flat_height",
                        help="height of the flat profile")
    common.add_argument("--theta", help="incidence angle in radians, or pi/4|pi/3|pi/2")
    common.add_argument("--k", type=float, help="wavenumber")
    common.add_argument("--period", type=float, help="surface period L")
    common.add_argument("--nodes", type=int, help="boundary node count N")
    common.add_argument("--poles", type=int, help="source point count M")
    common.add_argument("--depth", type=float, help="artificial line depth b")
    common.add_argument("--wmin", type=float, help="relative singular-value cutoff")
    common.add_argument("--jmax", type=int, help="mode-series truncation order")
    common.add_argument("--epsilon", type=float, help="residual target")
    common.add_argument("--max-refinements", type=int, dest="max_refinements",
                        help="total solve passes allowed")
    common.add_argument("--dictionary", choices=("poles", "rayleigh"))
    common.add_argument("--order", type=int, help="mode-dictionary order p")
    common.add_argument("--pole-offset", dest="pole_offset",
                        help="pole shift 'DY' or 'DX,DY'")
    common.add_argument("--out", metavar="PATH", help="write output to PATH")
    common.add_argument("--no-figures", action="store_true",
                        help="skip the companion PNG figure")

    p_solve = sub.add_parser("solve", parents=[common],
                             help="run one configuration and report the fit")
    p_solve.set_defaults(func=cmd_solve)

    p_table = sub.add_parser("table", parents=[common],
                             help="reproduce the twelve benchmark residuals")
    p_table.set_defaults(func=cmd_table)

    p_field = sub.add_parser("field", parents=[common],
                             help="sample the scattered/total field on a grid")
    p_field.add_argument("--xmin", type=float)
    p_field.add_argument("--xmax", type=float)
    p_field.add_argument("--ymin", type=float)
    p_field.add_argument("--ymax", type=float)
    p_field.add_argument("--nx", type=int, default=41)
    p_field.add_argument("--ny", type=int, default=41)
    p_field.set_defaults(func=cmd_field)

    p_eff = sub.add_parser("efficiencies", parents=[common],
                           help="diffraction-order amplitudes and efficiencies")
    p_eff.set_defaults(func=cmd_efficiencies)

    p_val = sub.add_parser("validate", parents=[common],
                           help="run the invariant suite")
    p_val.set_defaults(func=cmd_validate)

    return parser


def resolve_config(args) -> RunConfig:
    config = RunConfig()
    if args.config:
        config = apply_settings(config, load_config_file(args.config))
    flag_fields = (
        "profile", "flat_height", "k", "period", "nodes", "poles", "depth",
        "epsilon", "max_refinements", "dictionary", "order",
    )
    for name in flag_fields:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if args.theta is not None:
        config.theta = parse_theta(args.theta)
    if args.wmin is not None:
        config.w_min = args.wmin
    if args.jmax is not None:
        config.j_max = args.jmax
    if getattr(args, "pole_offset", None) is not None:
        config.pole_offset = parse_pole_offset(args.pole_offset)
    return config


def _solve_with_fallback(config: RunConfig) -> tuple[MrcSolution, bool]:
    """Run the solver; on a missed target return the best pass and a flag."""
    try:
        return mrc_solve(config.to_scatter_config()), True
    except NotConverged as exc:
        return exc.solution, False


def _write_lines(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def cmd_solve(args) -> int:
    config = resolve_config(args)
    solution, converged = _solve_with_fallback(config)
    modes = ModeSystem.build(solution.params, config.j_max)
    amplitudes = rayleigh_coefficients(solution)
    balance = energy_balance(amplitudes, modes)

    lines = [
        f"profile: {config.profile}",
        f"k: {format_float(config.k)}",
        f"period: {format_float(config.period)}",
        f"theta: {format_float(config.theta)}",
        f"dictionary: {config.dictionary}",
        f"r_min: {format_float(solution.r_min)}",
        f"converged: {'yes' if converged else 'NO'} (epsilon {format_float(config.epsilon)})",
        f"singular_values_discarded: {solution.n_discarded} of "
        f"{solution.singular_values.size} (cutoff {format_float(config.w_min)} relative)",
        f"energy_balance: {format_float(balance)}",
        "history: pass,nodes,columns,r_min",
    ]
    for idx, record in enumerate(solution.history, start=1):
        lines.append(
            f"history: {idx},{record.n_nodes},{record.n_columns},{format_float(record.r_min)}"
        )
    lines.append("coefficients: index,re,im")
    for m, c in enumerate(solution.coefficients, start=1):
        lines.append(f"coefficients: {m},{format_float(c.real)},{format_float(c.imag)}")

    _write_lines(lines, args.out)
    if args.out:
        print(f"report written to {args.out}")
        if not args.no_figures:
            figures.render_solve_figure(solution, _figure_path(args.out))
            print(f"figure written to {_figure_path(args.out)}")
    if not converged:
        print(f"warning: residual target not met (r_min = {solution.r_min:.6e})",
              file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _table_row(config: RunConfig, profile: str, angle_name: str, theta: float) -> dict:
    # reproduction runs are single-pass at the published discretization
    row_config = replace(config, profile=profile, theta=theta,
                         max_refinements=1, epsilon=math.inf)
    reference = REFERENCE_RESIDUALS[(profile, angle_name)]
    row = {
        "profile": profile,
        "angle_name": angle_name,
        "theta": theta,
        "paper_r_min": reference,
        "r_min": math.nan,
        "ratio": math.nan,
        "error": "",
    }
    try:
        solution, _ = _solve_with_fallback(row_config)
        row["r_min"] = solution.r_min
        row["ratio"] = solution.r_min / reference
    except (GratingError, ValueError) as exc:  # record in-row, keep running
        row["error"] = str(exc)
    return row


def cmd_table(args) -> int:
    config = resolve_config(args)
    angle_by_name = dict(TABLE_ANGLES)
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = [
            pool.submit(_table_row, config, profile, angle_name, angle_by_name[angle_name])
            for profile, angle_name in TABLE_ROWS
        ]
        rows = [f.result() for f in futures]  # submission order, not completion

    lines = ["profile,theta,r_min,paper_r_min,ratio"]
    for row in rows:
        lines.append(
            f"{row['profile']},{format_float(row['theta'])},{format_float(row['r_min'])},"
            f"{format_float(row['paper_r_min'])},{format_float(row['ratio'])}"
        )
    _write_lines(lines, args.out)
    for row in rows:
        if row["error"]:
            print(f"warning: {row['profile']} {row['angle_name']}: {row['error']}",
                  file=sys.stderr)
    if args.out:
        print(f"table written to {args.out}")
        if not args.no_figures:
            ok_rows = [r for r in rows if not r["error"]]
            figures.render_table_figure(ok_rows, _figure_path(args.out))
            print(f"figure written to {_figure_path(args.out)}")
    return EXIT_OK


def cmd_field(args) -> int:
    config = resolve_config(args)
    profile = config.build_profile()
    nodes = profile_nodes(profile, config.nodes)

    xmin = args.xmin if args.xmin is not None else 0.0
    xmax = args.xmax if args.xmax is not None else config.period
    ymin = args.ymin if args.ymin is not None else float(np.min(nodes[:, 1]))
    ymax = args.ymax if args.ymax is not None else float(np.max(nodes[:, 1])) + 1.0
    if args.nx < 2 or args.ny < 2:
        raise ValueError("grid needs nx >= 2 and ny >= 2")
    if ymin < -config.depth:
        raise ValueError(f"grid ymin {ymin} lies below the line y = {-config.depth}")

    solution, converged = _solve_with_fallback(config)
    if not converged:
        print(f"warning: residual target not met (r_min = {solution.r_min:.6e}); "
              "sampling the best pass", file=sys.stderr)

    xs = np.linspace(xmin, xmax, args.nx)
    ys = np.linspace(ymin, ymax, args.ny)
    grid_x, grid_y = np.meshgrid(xs, ys)
    heights = np.array([boundary_height(profile, x) for x in xs])
    keep = grid_y >= heights[None, :]

    points = np.column_stack([grid_x[keep], grid_y[keep]])
    scattered = evaluate_field(solution, points)
    incident = incident_field(solution.params, (points[:, 0], points[:, 1]))
    total = scattered + incident

    lines = ["x,y,re_v,im_v,abs_v,re_u,im_u"]
    for (x, y), v, u in zip(points, scattered, total):
        lines.append(
            f"{format_float(x)},{format_float(y)},"
            f"{format_float(v.real)},{format_float(v.imag)},{format_float(abs(v))},"
            f"{format_float(u.real)},{format_float(u.imag)}"
        )
    _write_lines(lines, args.out)
    if args.out:
        print(f"field written to {args.out}")
        if not args.no_figures:
            grid_v = np.full(grid_x.shape, np.nan)
            grid_u = np.full(grid_x.shape, np.nan)
            grid_v[keep] = np.abs(scattered)
            grid_u[keep] = np.abs(total)
            figures.render_field_figure(xs, ys, grid_v, grid_u, nodes,
                                        _figure_path(args.out))
            print(f"figure written to {_figure_path(args.out)}")
    return EXIT_OK


def cmd_efficiencies(args) -> int:
    config = resolve_config(args)
    solution, converged = _solve_with_fallback(config)
    if not converged:
        print(f"warning: residual target not met (r_min = {solution.r_min:.6e}); "
              "amplitudes from the best pass", file=sys.stderr)
    modes = ModeSystem.build(solution.params, config.j_max)
    amplitudes = rayleigh_coefficients(solution)
    efficiencies = diffraction_efficiencies(amplitudes, modes)
    balance = energy_balance(amplitudes, modes)

    lines = ["j,re_b,im_b,abs_b,efficiency"]
    for j in sorted(amplitudes):
        b = amplitudes[j]
        lines.append(
            f"{j},{format_float(b.real)},{format_float(b.imag)},"
            f"{format_float(abs(b))},{format_float(efficiencies.get(j, 0.0))}"
        )
    _write_lines(lines, args.out)
    stream = sys.stdout if args.out else sys.stderr
    print(f"energy_balance: {format_float(balance)}", file=stream)
    if args.out:
        print(f"efficiencies written to {args.out}")
        if not args.no_figures:
            figures.render_efficiencies_figure(efficiencies, balance,
                                               _figure_path(args.out))
            print(f"figure written to {_figure_path(args.out)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name.ljust(width)}  {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GratingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

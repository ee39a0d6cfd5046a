"""Command-line front end: config-driven solves, parameter sweeps, scenario
presets and validation runs, all emitting CSV/JSON artifacts.

Exit codes: 0 success, 1 usage or configuration error, 2 solver failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import postprocess as post
from .config import ConfigError, RunConfig, dump_config, parse_config
from .model import ProblemSetup, RemoteLoad, SurfaceTension
from .scenarios import SCENARIOS, scenario_config, scenario_metadata
from .kernels import QuadratureRule
from .solver import SingularSystemError, assemble, solve
from .validation import validate_solution

__all__ = ["main", "cmd_solve", "cmd_sweep", "cmd_scenario", "cmd_validate"]

OUTPUT_ROOT_ENV = "CRACKST_OUTPUT_ROOT"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_VALIDATION = 3


def _out_dir(run_config, override):
    base = override or run_config.output_dir
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not os.path.isabs(base):
        base = os.path.join(root, base)
    os.makedirs(base, exist_ok=True)
    return base


def _fmt(value):
    return f"{float(value):.12e}"


def _solve_run(run_config, quiet=False):
    numerics = run_config.numerics
    rule = QuadratureRule(
        nodes_per_panel=numerics.nodes_per_panel,
        panels_per_arc=numerics.panels_per_arc,
        adaptive=numerics.adaptive_quadrature,
    )
    system = assemble(
        run_config.setup, numerics.order, rule=rule, **numerics.assemble_kwargs()
    )
    dset, report = solve(system, rcond=numerics.rcond)
    if not quiet:
        print(
            f"solved order {numerics.order}: rows={report.rows} cols={report.cols} "
            f"max residual {report.max_residual:.3e} condition {report.condition:.3e}"
        )
        if report.degenerate_pair:
            print("note: material pair is degenerate; conditioning reported above")
    return dset, report


def _write_standard_outputs(outdir, run_config, dset, report, vreport, extra=None):
    setup = run_config.setup
    with open(os.path.join(outdir, "densities.json"), "w") as fh:
        json.dump(dset.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    both = post.boundary_fields(
        dset, setup, np.concatenate([
            np.linspace(1e-3 * dset.l0, (1 - 1e-3) * dset.l0, 400),
            np.linspace(dset.l0 + 1e-3 * (dset.l - dset.l0), dset.l - 1e-3 * (dset.l - dset.l0), 400),
        ])
    )
    post.write_boundary_fields_csv(os.path.join(outdir, "boundary_fields.csv"), both)
    vreport.write_json(os.path.join(outdir, "validation.json"))
    post.write_summary_json(os.path.join(outdir, "summary.json"), dset, setup, report, extra=extra)


def cmd_solve(args):
    try:
        run_config = parse_config(args.config)
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.order:
        run_config.numerics.order = args.order
    outdir = _out_dir(run_config, args.out)
    try:
        dset, report = _solve_run(run_config, args.quiet)
    except SingularSystemError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    vreport = validate_solution(dset, run_config.setup)
    _write_standard_outputs(outdir, run_config, dset, report, vreport)
    if not args.quiet:
        print(f"outputs written to {outdir}")
        if not vreport.all_passed:
            failed = [c.name for c in vreport.checks if not c.passed]
            print(f"warning: validation checks failed: {failed}")
    return EXIT_OK


def _apply_sweep_value(run_config, param, value):
    setup = run_config.setup
    if param == "gamma0":
        surface = SurfaceTension(value, value, setup.surface.gamma_interface)
        new_setup = ProblemSetup(
            contour=setup.contour, matrix=setup.matrix, inclusion=setup.inclusion,
            surface=surface, load=setup.load, tractions=setup.tractions,
        )
        return RunConfig(new_setup, run_config.numerics, run_config.output_dir)
    if param == "alpha":
        load = RemoteLoad(setup.load.sigma1, setup.load.sigma2, value)
        new_setup = ProblemSetup(
            contour=setup.contour, matrix=setup.matrix, inclusion=setup.inclusion,
            surface=setup.surface, load=load, tractions=setup.tractions,
        )
        return RunConfig(new_setup, run_config.numerics, run_config.output_dir)
    if param in ("order", "N"):
        numerics = replace(run_config.numerics, order=int(value))
        return RunConfig(setup, numerics, run_config.output_dir)
    raise ConfigError(f"sweep parameter must be gamma0, alpha or order, got {param!r}")


SWEEP_COLUMNS = [
    "param",
    "value",
    "max_crack_opening",
    "max_crack_opening_full_arc",
    "max_crack_aperture",
    "tip0_sigma_power_exponent",
    "tip0_tau_log_fit_relative_residual",
    "tip1_sigma_power_exponent",
    "tip1_tau_log_fit_relative_residual",
    "max_residual",
    "condition",
    "force_balance",
    "single_valuedness",
]


def _sweep_row(param, value, run_config, dset, report, vreport):
    setup = run_config.setup
    tips = [post.tip_exponents(dset, setup, tip=0), post.tip_exponents(dset, setup, tip=1)]
    by_name = {c.name: c.value for c in vreport.checks}
    return [
        param,
        _fmt(value),
        _fmt(post.max_crack_opening(dset, setup)),
        _fmt(post.max_crack_opening(dset, setup, window=(0.0, 1.0))),
        _fmt(post.max_crack_aperture(dset, setup)),
        _fmt(tips[0]["sigma_power_exponent"]),
        _fmt(tips[0]["tau_log_fit_relative_residual"]),
        _fmt(tips[1]["sigma_power_exponent"]),
        _fmt(tips[1]["tau_log_fit_relative_residual"]),
        _fmt(report.max_residual),
        _fmt(report.condition),
        _fmt(by_name.get("force_balance", float("nan"))),
        _fmt(by_name.get("single_valuedness", float("nan"))),
    ]


def cmd_sweep(args):
    try:
        run_config = parse_config(args.config)
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
        if not values:
            raise ConfigError("empty sweep value list")
    except (OSError, ConfigError, ValueError) as exc:
        print(f"sweep setup error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.order:
        run_config.numerics.order = args.order
    outdir = _out_dir(run_config, args.out)
    rows = []
    for value in values:
        try:
            case = _apply_sweep_value(run_config, args.param, value)
        except ConfigError as exc:
            print(f"sweep setup error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        subdir = os.path.join(outdir, f"{args.param}_{value:g}")
        os.makedirs(subdir, exist_ok=True)
        try:
            dset, report = _solve_run(case, args.quiet)
        except SingularSystemError as exc:
            print(f"solver failure at {args.param}={value:g}: {exc}", file=sys.stderr)
            return EXIT_SOLVER
        vreport = validate_solution(dset, case.setup)
        _write_standard_outputs(subdir, case, dset, report, vreport)
        rows.append(_sweep_row(args.param, value, case, dset, report, vreport))
    with open(os.path.join(outdir, "sweep.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(rows)
    if not args.quiet:
        print(f"sweep outputs written to {outdir}")
    return EXIT_OK


def _field_curves(dset, setup, arc, n=241):
    if arc == 0:
        s = np.linspace(1e-3 * dset.l0, (1 - 1e-3) * dset.l0, n)
    else:
        s = np.linspace(dset.l0 + 1e-3 * (dset.l - dset.l0), dset.l - 1e-3 * (dset.l - dset.l0), n)
    return s, post.boundary_fields(dset, setup, s)


def _write_columns_csv(path, header, columns):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])


def _scenario_fig1(entry, run_config, outdir, quiet):
    curves = {}
    s_ref = None
    for order in entry["orders_sweep"]:
        case = RunConfig(run_config.setup, replace(run_config.numerics, order=order), run_config.output_dir)
        dset, _ = _solve_run(case, quiet)
        s = np.linspace(1e-3 * dset.l0, (1 - 1e-3) * dset.l0, 241)
        s_ref = s
        g = dset.eval("g0p", s)
        curves[order] = g
    header = ["s"] + [f"{part}_g0_prime_order{n}" for n in entry["orders_sweep"] for part in ("re", "im")]
    cols = [s_ref] + [vals for n in entry["orders_sweep"] for vals in (np.real(curves[n]), np.imag(curves[n]))]
    _write_columns_csv(os.path.join(outdir, "fig1_density_convergence.csv"), header, cols)


def _scenario_fig2_fig3(name, entry, run_config, outdir, quiet):
    gammas = entry["gammas"]
    fields = {}
    for gamma in gammas:
        case = scenario_config(name, order=run_config.numerics.order, gamma=gamma)
        dset, _ = _solve_run(case, quiet)
        fields[gamma] = (dset, case.setup)
    for arc, label in ((0, "crack"), (1, "bond")):
        if name == "fig2":
            quantities = (
                ("sigma", ("sigma_n_plus0", "sigma_n_minus")),
                ("tau", ("tau_n_plus0", "tau_n_minus")),
            )
        else:
            quantities = (
                ("ut", ("ut_plus0", "ut_minus")),
                ("un", ("un_plus0", "un_minus")),
            )
        for qname, attrs in quantities:
            header = ["s"]
            cols = None
            for gamma in gammas:
                dset, setup = fields[gamma]
                s, fld = _field_curves(dset, setup, arc)
                if cols is None:
                    cols = [s]
                for attr in attrs:
                    side = "plus_0" if "plus0" in attr else "minus"
                    header.append(f"{qname}_{side}_gamma{gamma:g}")
                    cols.append(getattr(fld, attr))
            _write_columns_csv(os.path.join(outdir, f"{name}_{qname}_{label}.csv"), header, cols)


def _scenario_fig4(entry, run_config, outdir, quiet):
    dset, _ = _solve_run(run_config, quiet)
    setup = run_config.setup
    s = np.linspace(1e-3 * dset.l0, 0.5 * dset.l0, 161)  # right half of the crack
    fld = post.boundary_fields(dset, setup, s)
    _write_columns_csv(
        os.path.join(outdir, "fig4_displacement_derivatives.csv"),
        ["s", "ut_prime_plus_0", "un_prime_plus_0", "ut_prime_minus", "un_prime_minus"],
        [s, fld.ut_plus0, fld.un_plus0, fld.ut_minus, fld.un_minus],
    )


def _scenario_fig5(entry, run_config, outdir, quiet):
    for alpha in entry["alphas"]:
        case = scenario_config("fig5", order=run_config.numerics.order, alpha=alpha)
        dset, _ = _solve_run(case, quiet)
        columns = post.deformed_boundary(dset, case.setup, scale=entry["displacement_scale"])
        post.write_deformed_boundary_csv(
            os.path.join(outdir, f"fig5_deformed_alpha{alpha:g}.csv"), columns
        )


def _scenario_fig5a(entry, run_config, outdir, quiet):
    dset, _ = _solve_run(run_config, quiet)
    s, fld = _field_curves(dset, run_config.setup, 1)
    _write_columns_csv(
        os.path.join(outdir, "fig5a_stress_bond.csv"),
        ["s", "sigma_n_plus_0", "tau_n_plus_0", "sigma_n_minus", "tau_n_minus"],
        [s, fld.sigma_n_plus0, fld.tau_n_plus0, fld.sigma_n_minus, fld.tau_n_minus],
    )


def _scenario_fig6(entry, run_config, outdir, quiet):
    rows = []
    for alpha in entry["alphas"]:
        for gamma0 in entry["gammas"]:
            case = scenario_config("fig6", order=run_config.numerics.order, gamma0=gamma0, alpha=alpha)
            dset, _ = _solve_run(case, quiet)
            rows.append(
                [
                    _fmt(alpha),
                    _fmt(gamma0),
                    _fmt(post.max_crack_opening(dset, case.setup)),
                    _fmt(post.max_crack_opening(dset, case.setup, window=(0.0, 1.0))),
                    _fmt(post.max_crack_aperture(dset, case.setup)),
                ]
            )
    with open(os.path.join(outdir, "fig6_opening.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha_rad", "gamma0", "max_opening", "max_opening_full_arc", "max_aperture"])
        writer.writerows(rows)


def cmd_scenario(args):
    name = args.name
    if name not in SCENARIOS:
        print(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}", file=sys.stderr)
        return EXIT_USAGE
    entry = SCENARIOS[name]
    run_config = scenario_config(name, order=args.order or None)
    outdir = _out_dir(run_config, args.out)
    with open(os.path.join(outdir, "config.ini"), "w") as fh:
        fh.write(dump_config(run_config))
    with open(os.path.join(outdir, "metadata.json"), "w") as fh:
        json.dump(scenario_metadata(name), fh, indent=2, sort_keys=True)
        fh.write("\n")
    try:
        if name == "fig1":
            _scenario_fig1(entry, run_config, outdir, args.quiet)
        elif name in ("fig2", "fig3"):
            _scenario_fig2_fig3(name, entry, run_config, outdir, args.quiet)
        elif name == "fig4":
            _scenario_fig4(entry, run_config, outdir, args.quiet)
        elif name == "fig5":
            _scenario_fig5(entry, run_config, outdir, args.quiet)
        elif name == "fig5a":
            _scenario_fig5a(entry, run_config, outdir, args.quiet)
        elif name == "fig6":
            _scenario_fig6(entry, run_config, outdir, args.quiet)
        # standard artifacts for the base configuration of the scenario
        dset, report = _solve_run(run_config, args.quiet)
    except SingularSystemError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    vreport = validate_solution(dset, run_config.setup)
    _write_standard_outputs(outdir, run_config, dset, report, vreport, extra=scenario_metadata(name))
    if not args.quiet:
        print(f"scenario {name} outputs written to {outdir}")
    return EXIT_OK


def cmd_validate(args):
    try:
        run_config = parse_config(args.config)
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.order:
        run_config.numerics.order = args.order
    outdir = _out_dir(run_config, args.out)
    try:
        dset, report = _solve_run(run_config, args.quiet)
    except SingularSystemError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    vreport = validate_solution(dset, run_config.setup)
    vreport.write_json(os.path.join(outdir, "validation.json"))
    for check in vreport.checks:
        status = "pass" if check.passed else "FAIL"
        if not args.quiet or not check.passed:
            print(f"{status}: {check.name} = {check.value:.3e} (tolerance {check.tolerance:.3e})")
    return EXIT_OK if vreport.all_passed else EXIT_VALIDATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="crackst",
        description="Interface-crack solver with curvature-dependent surface tension",
    )
    sub = parser.add_subparsers(dest="command")

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", help="output directory (default from config)")
        p.add_argument("--order", type=int, default=0, help="polynomial order override")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p_solve = sub.add_parser("solve", help="solve one configuration")
    common(p_solve)
    p_sweep = sub.add_parser("sweep", help="sweep a parameter over a value list")
    common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=("gamma0", "alpha", "order", "N"))
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_scenario = sub.add_parser("scenario", help="run a built-in scenario preset")
    p_scenario.add_argument("name", help=f"one of {sorted(SCENARIOS)}")
    common(p_scenario, config_required=False)
    p_validate = sub.add_parser("validate", help="solve and run the validation battery")
    common(p_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    handler = {
        "solve": cmd_solve,
        "sweep": cmd_sweep,
        "scenario": cmd_scenario,
        "validate": cmd_validate,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())

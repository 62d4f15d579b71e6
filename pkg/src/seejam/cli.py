"""Command-line front end: run experiments, validate scenarios, sweep params.

Exit codes: 0 success, 1 schema/validation problem, 2 solver failure,
3 I/O problem writing artifacts.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import kernels
from .baselines import METHODS, run_method
from .driver import AOConfig
from .errors import SchemaError, SeejamError, SolverError, ValidationError
from .metrics import SeeEvaluator
from .scenario import load_scenario, validate_file

EXIT_OK, EXIT_SCHEMA, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3


def fmt(x):
    """Floats serialized at 12 significant digits for stable artifacts."""
    return f"{float(x):.12g}"


def _write_csv(path, header, rows):
    try:
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(str(c) if isinstance(c, (str, int)) else fmt(c)
                                  for c in row) + "\n")
    except OSError as exc:
        raise _IOProblem(f"cannot write {path}: {exc}") from exc


class _IOProblem(Exception):
    pass


def _artifacts(outdir, sc, results):
    os.makedirs(outdir, exist_ok=True)

    traj_rows = []
    energy_rows = []
    conv_rows = []
    summary = {"methods": {}, "dt_s": float(sc.dt), "n_step": sc.n_step,
               "kernel_backend": kernels.BACKEND_NAME}
    for method, res in results.items():
        ev = SeeEvaluator(sc, res.mode, include_ma_power=(method != "fixed_antenna"))
        report = ev.evaluate(res.state).report()
        st = res.state
        for n in range(sc.n_step + 1):
            q = st.trajectory[n]
            phi = st.angles[n - 1] if n > 0 else (0.0, 0.0)
            traj_rows.append([method, n, q[0], q[1], q[2], phi[0], phi[1]])
        for n in range(sc.n_step):
            r = report.per_slot[n]
            energy_rows.append([method, n + 1, r[0], r[1], r[2], r[3], r[4], r[5]])
        for i, see in enumerate(res.trace.see):
            conv_rows.append([method, i + 1, see])
        summary["methods"][method] = {
            "see_bits_per_hz_per_joule": float(res.see),
            "sum_secrecy_bits_per_hz": report.sum_secrecy * sc.dt,
            "total_energy_j": report.total_energy,
            "outer_iterations": res.n_outer,
            "converged": res.converged,
            "bound_mode": res.mode,
        }
    if "joint" in results:
        joint = results["joint"].see
        for other, key in (("fixed_antenna", "improvement_vs_fixed"),
                           ("eve_oriented", "improvement_vs_eve_oriented"),
                           ("direct_path", "improvement_vs_direct_path")):
            if other in results and results[other].see > 0:
                summary[key] = float(joint / results[other].see - 1.0)

    _write_csv(os.path.join(outdir, "trajectory.csv"),
               ["method", "waypoint", "x_m", "y_m", "z_m", "phi_x_rad", "phi_z_rad"],
               traj_rows)
    _write_csv(os.path.join(outdir, "energy.csv"),
               ["method", "slot", "r_sec_bits_per_hz", "r_user", "r_eve_bound",
                "e_prop_j", "e_ma_j", "e_com_j"],
               energy_rows)
    _write_csv(os.path.join(outdir, "convergence.csv"),
               ["method", "outer_iter", "see_bits_per_hz_per_joule"],
               conv_rows)
    try:
        with open(os.path.join(outdir, "summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise _IOProblem(f"cannot write summary.json: {exc}") from exc
    return summary


@click.group()
def main():
    """Worst-case secrecy-energy-efficiency jamming-UAV simulator."""


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path())
@click.option("--methods", default="joint,fixed_antenna,eve_oriented,direct_path",
              show_default=True, help="comma-separated subset of " + ",".join(METHODS))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "outdir", default="results", show_default=True, type=click.Path())
@click.option("--bound-mode", default="paper", show_default=True,
              type=click.Choice(["paper", "rigorous"]))
@click.option("--max-outer", default=50, show_default=True, type=int)
@click.option("--eps-th", default=1e-4, show_default=True, type=float)
def run(scenario_path, methods, seed, outdir, bound_mode, max_outer, eps_th):
    """Optimize the requested methods and write CSV/JSON artifacts."""
    wanted = [m.strip() for m in methods.split(",") if m.strip()]
    bad = [m for m in wanted if m not in METHODS]
    if bad:
        click.echo(f"error: unknown methods: {', '.join(bad)}", err=True)
        sys.exit(EXIT_SCHEMA)
    try:
        sc = load_scenario(scenario_path)
    except (SchemaError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)

    cfg = AOConfig(mode=bound_mode, eps_th=eps_th, max_outer=max_outer, seed=seed)
    results = {}
    try:
        for method in wanted:
            click.echo(f"[{method}] optimizing ...")
            res = run_method(method, sc, cfg)
            results[method] = res
            click.echo(f"[{method}] SEE = {fmt(res.see)} bit/Hz/J "
                       f"({res.n_outer} outer iterations)")
    except SolverError as exc:
        click.echo(f"solver failure: {exc}", err=True)
        sys.exit(EXIT_SOLVER)
    except SeejamError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)

    try:
        summary = _artifacts(outdir, sc, results)
    except _IOProblem as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"artifacts written to {outdir}/")
    for key in ("improvement_vs_fixed", "improvement_vs_eve_oriented",
                "improvement_vs_direct_path"):
        if key in summary:
            click.echo(f"{key}: {fmt(100.0 * summary[key])}%")
    sys.exit(EXIT_OK)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path())
def validate(scenario_path):
    """Check a scenario file; prints findings and exits non-zero on problems."""
    findings = validate_file(scenario_path)
    if findings:
        for f in findings:
            click.echo(f"invalid: {f}", err=True)
        sys.exit(EXIT_SCHEMA)
    click.echo("scenario is valid")
    sys.exit(EXIT_OK)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path())
@click.option("--param", required=True, help="scenario key to sweep (e.g. p_j)")
@click.option("--values", required=True, help="comma-separated numeric values")
@click.option("--methods", default="joint,fixed_antenna", show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "outdir", default="results", show_default=True, type=click.Path())
@click.option("--bound-mode", default="paper", show_default=True,
              type=click.Choice(["paper", "rigorous"]))
@click.option("--max-outer", default=50, show_default=True, type=int)
@click.option("--eps-th", default=1e-4, show_default=True, type=float)
def sweep(scenario_path, param, values, methods, seed, outdir, bound_mode,
          max_outer, eps_th):
    """Re-optimize across values of one scenario parameter; writes sweep.csv."""
    from .scenario import scenario_from_dict

    wanted = [m.strip() for m in methods.split(",") if m.strip()]
    bad = [m for m in wanted if m not in METHODS]
    if bad:
        click.echo(f"error: unknown methods: {', '.join(bad)}", err=True)
        sys.exit(EXIT_SCHEMA)
    try:
        with open(scenario_path) as fh:
            doc = json.load(fh)
        vals = [float(v) for v in values.split(",") if v.strip()]
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except ValueError:
        click.echo("error: --values must be comma-separated numbers", err=True)
        sys.exit(EXIT_SCHEMA)

    rows = []
    cfg = AOConfig(mode=bound_mode, eps_th=eps_th, max_outer=max_outer, seed=seed)
    for v in vals:
        doc2 = dict(doc)
        doc2[param] = v
        try:
            sc = scenario_from_dict(doc2)
        except SchemaError as exc:
            click.echo(f"error at {param}={v}: {exc}", err=True)
            sys.exit(EXIT_SCHEMA)
        for method in wanted:
            try:
                res = run_method(method, sc, cfg)
            except SolverError as exc:
                click.echo(f"solver failure at {param}={v}: {exc}", err=True)
                sys.exit(EXIT_SOLVER)
            rows.append([method, v, res.see])
            click.echo(f"[{method}] {param}={fmt(v)}: SEE = {fmt(res.see)}")
    try:
        os.makedirs(outdir, exist_ok=True)
        _write_csv(os.path.join(outdir, "sweep.csv"),
                   ["method", param, "see_bits_per_hz_per_joule"], rows)
    except _IOProblem as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()

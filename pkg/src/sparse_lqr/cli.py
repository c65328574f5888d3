"""Command-line front end.

Exit codes: 0 success, 1 validation error (bad instance or parameters),
2 IO error, 3 numeric failure.
"""

import sys

import click
import numpy as np

from .errors import (DefinitenessError, DimensionMismatchError,
                     EnumerationLimitError, InstanceParseError, NumericError,
                     UnsupportedInitError)
from .experiments import (FIG2_COLUMNS, FIG3_COLUMNS, STOCHASTIC_COLUMNS,
                          SUMMARY_COLUMNS, ExperimentConfig, parse_grid,
                          run_fig2, run_fig3, run_stochastic, summarize,
                          summary_path, write_csv)
from .greedy import greedy_lqr_schedule
from .guarantees import brute_force_optimum, certificate
from .lqr_cost import build_cost_model, cost
from .model import load_instance

_VALIDATION = (InstanceParseError, DimensionMismatchError, DefinitenessError,
               UnsupportedInitError, EnumerationLimitError, ValueError)


def _run(body):
    """Execute a command body, mapping failures to the documented exit codes."""
    try:
        body()
    except _VALIDATION as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(2)
    except NumericError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(3)


def _g(x) -> str:
    return "%.17g" % float(x)


@click.group()
def main():
    """Sparse actuation scheduling for finite-horizon LQR."""


@main.command()
@click.argument("instance_file", type=click.Path(dir_okay=False))
@click.option("--d", "budget", type=int, default=None,
              help="Override the instance's sparsity budget.")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Write the per-iteration trace as CSV.")
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv",
              show_default=True, help="Output file format.")
def schedule(instance_file, budget, output, fmt):
    """Run the greedy scheduler on an instance file."""
    def body():
        inst = load_instance(instance_file)
        cm = build_cost_model(inst)
        trace, report = greedy_lqr_schedule(cm, budget)
        click.echo(f"schedule: {list(report.schedule)}")
        click.echo(f"J: {_g(report.J)}")
        click.echo(f"f: {_g(report.f)}")
        click.echo(f"J_empty: {_g(cm.J_empty)}")
        for i, (w, g) in enumerate(zip(trace.picks, trace.gains), start=1):
            click.echo(f"iteration {i}: instant {w}  gain {_g(g)}")
        if output:
            rows = list(zip(range(1, len(trace.picks) + 1), trace.picks,
                            trace.gains, trace.objectives))
            write_csv(output, ("iteration", "instant", "gain", "objective"),
                      rows)
            click.echo(f"wrote {output}")
    _run(body)


@main.command()
@click.argument("instance_file", type=click.Path(dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Write the certificate as a one-row CSV.")
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv",
              show_default=True, help="Output file format.")
def certify(instance_file, output, fmt):
    """A-priori performance certificate for an instance file."""
    def body():
        inst = load_instance(instance_file)
        cert = certificate(build_cost_model(inst))
        click.echo(f"defined: {'true' if cert.defined else 'false'}")
        click.echo(f"gamma_lb: {_g(cert.gamma_lb)}")
        click.echo(f"alpha_ub: {_g(cert.alpha_ub)}")
        click.echo(f"factor: {_g(cert.factor)}")
        click.echo(f"min_atom_trace: {_g(cert.min_atom_trace)}")
        click.echo(f"max_atom_trace: {_g(cert.max_atom_trace)}")
        click.echo(f"min_eig_single: {_g(cert.min_eig_single)}")
        click.echo(f"max_eig_full: {_g(cert.max_eig_full)}")
        if output:
            header = ("gamma_lb", "alpha_ub", "factor", "defined",
                      "min_atom_trace", "max_atom_trace", "min_eig_single",
                      "max_eig_full")
            row = (cert.gamma_lb, cert.alpha_ub, cert.factor, cert.defined,
                   cert.min_atom_trace, cert.max_atom_trace,
                   cert.min_eig_single, cert.max_eig_full)
            write_csv(output, header, [row])
            click.echo(f"wrote {output}")
    _run(body)


@main.command()
@click.argument("instance_file", type=click.Path(dir_okay=False))
@click.option("--d", "budget", type=int, default=None,
              help="Override the instance's sparsity budget.")
def oracle(instance_file, budget):
    """Exact optimal schedule by brute force (small horizons only)."""
    def body():
        inst = load_instance(instance_file)
        cm = build_cost_model(inst)
        d = inst.d if budget is None else budget
        best, f_star = brute_force_optimum(cm, inst.N, d)
        click.echo(f"optimal schedule: {list(best)}")
        click.echo(f"f_star: {_g(f_star)}")
        click.echo(f"J_star: {_g(cost(cm, best))}")
    _run(body)


@main.group()
def experiment():
    """Reproducible benchmark experiments (CSV output)."""


@experiment.command("fig2")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=1000, show_default=True,
              help="Random-baseline trials per budget.")
@click.option("--d", "grid_text", default="1:50", show_default=True,
              help="Budget grid: single value, comma list, or lo:hi[:step].")
@click.option("--instance", "instance_file", type=click.Path(dir_okay=False),
              default=None, help="Instance file (default: bundled plant).")
@click.option("--output", type=click.Path(dir_okay=False),
              default="fig2.csv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv",
              show_default=True)
def experiment_fig2(seed, trials, grid_text, instance_file, output, fmt):
    """Cost-versus-budget sweep: greedy vs. random-best vs. first-d."""
    def body():
        cfg = ExperimentConfig("fig2", seed=seed, trials=trials,
                               grid=parse_grid(grid_text), output=output)
        inst = load_instance(instance_file) if instance_file else None
        write_csv(output, FIG2_COLUMNS, run_fig2(cfg, inst))
        click.echo(f"wrote {output}")
    _run(body)


@experiment.command("fig3")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--realizations", type=int, default=1000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel workers (output is identical for any count).")
@click.option("--output", type=click.Path(dir_okay=False),
              default="fig3.csv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv",
              show_default=True)
def experiment_fig3(seed, realizations, jobs, output, fmt):
    """Certificate across the random 2-state ensemble."""
    def body():
        cfg = ExperimentConfig("fig3", seed=seed, realizations=realizations,
                               jobs=jobs, output=output)
        rows = run_fig3(cfg)
        write_csv(output, FIG3_COLUMNS, rows)
        spath = summary_path(output)
        write_csv(spath, SUMMARY_COLUMNS, summarize(rows))
        click.echo(f"wrote {output}")
        click.echo(f"wrote {spath}")
    _run(body)


@experiment.command("stochastic")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--realizations", type=int, default=1000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel workers (output is identical for any count).")
@click.option("--output", type=click.Path(dir_okay=False),
              default="stochastic.csv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv",
              show_default=True)
def experiment_stochastic(seed, realizations, jobs, output, fmt):
    """Ensemble certificates with a unit-covariance initial state."""
    def body():
        cfg = ExperimentConfig("stochastic", seed=seed,
                               realizations=realizations, jobs=jobs,
                               output=output)
        rows = run_stochastic(cfg)
        write_csv(output, STOCHASTIC_COLUMNS, rows)
        spath = summary_path(output)
        write_csv(spath, SUMMARY_COLUMNS, summarize(rows, factor_col=6))
        cov = [r[6] for r in rows if np.isfinite(r[6])]
        if cov:
            click.echo(f"mean factor (unit covariance): {_g(np.mean(cov))}")
        click.echo(f"wrote {output}")
        click.echo(f"wrote {spath}")
    _run(body)


if __name__ == "__main__":
    main()

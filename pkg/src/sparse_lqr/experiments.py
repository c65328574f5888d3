"""Reproducible experiment harness behind the CLI.

Three canned experiments:

* ``fig2``       — cost-versus-budget sweep of greedy against the random
                   and front-loaded baselines on the bundled 5-state
                   unstable plant (50-step horizon).
* ``fig3``       — certificate ingredients across a seeded ensemble of
                   1000 diagonal 2-state plants, as a function of the
                   spectral norm of A.
* ``stochastic`` — same ensemble, adding the certificate factor when the
                   initial state is a unit-covariance random vector
                   instead of the sampled x0.

Every run is a pure function of (config, seed): rows are generated with
per-realization derived seeds, sorted by index, and written with fixed
formatting, so output files are byte-identical across repeats and across
worker counts.
"""

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .baselines import first_d, random_best
from .generate import benchmark_instance, realization_rng
from .greedy import greedy_lqr_schedule
from .guarantees import certificate
from .lqr_cost import build_cost_model, cost
from .model import Instance, instance_from_dict

# Spectral-norm binning for the summary companion files: equal bins over
# the bulk of the sampled range.
BIN_COUNT = 14
BIN_LO = 0.1
BIN_HI = 1.5

FIG2_COLUMNS = ("d", "J_greedy", "J_random_best", "J_first_d")
FIG3_COLUMNS = ("realization", "spectral_norm_A", "gamma_lb", "alpha_ub",
                "factor", "defined")
STOCHASTIC_COLUMNS = FIG3_COLUMNS + ("factor_cov",)
SUMMARY_COLUMNS = ("bin", "norm_lo", "norm_hi", "count", "mean_factor",
                   "std_factor")


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one experiment run."""

    experiment: str                 # "fig2" | "fig3" | "stochastic"
    seed: int = 0
    trials: int = 1000              # random-baseline trials per budget (fig2)
    grid: tuple[int, ...] = ()      # budget sweep (fig2)
    realizations: int = 1000        # ensemble size (fig3 / stochastic)
    output: str | Path = "results.csv"
    jobs: int = 1

    def __post_init__(self):
        if self.experiment not in ("fig2", "fig3", "stochastic"):
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.experiment == "fig2" and not self.grid:
            raise ValueError("fig2 needs a nonempty budget grid")
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if self.realizations < 1:
            raise ValueError("realization count must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


def parse_grid(text: str) -> tuple[int, ...]:
    """Parse a budget grid: "10", "5,10,15", "1:50", or "1:50:5".

    Ranges are inclusive on both ends.  The result is sorted and
    duplicate-free.
    """
    values: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            pieces = [int(p) for p in part.split(":")]
            if len(pieces) == 2:
                lo, hi, step = pieces[0], pieces[1], 1
            elif len(pieces) == 3:
                lo, hi, step = pieces
            else:
                raise ValueError(f"bad grid range {part!r}")
            if step < 1 or hi < lo:
                raise ValueError(f"bad grid range {part!r}")
            values.update(range(lo, hi + 1, step))
        else:
            values.add(int(part))
    if not values:
        raise ValueError("empty budget grid")
    if min(values) < 0:
        raise ValueError("budgets must be nonnegative")
    return tuple(sorted(values))


def bundled_instance() -> Instance:
    """The 5-state unstable benchmark plant shipped with the package."""
    text = resources.files("sparse_lqr").joinpath(
        "data/fig2_instance.json").read_text()
    return instance_from_dict(json.loads(text))


def _derived_seed(seed: int, *key: int) -> int:
    state = np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(1)
    return int(state[0])


def run_fig2(cfg: ExperimentConfig, inst: Instance | None = None
             ) -> list[tuple]:
    """Sweep the budget grid; one row (d, J_greedy, J_random_best, J_first_d)."""
    if inst is None:
        inst = bundled_instance()
    cm = build_cost_model(inst)
    N = inst.N
    if max(cfg.grid) > N:
        raise ValueError(f"budget {max(cfg.grid)} exceeds the horizon {N}")

    d_max = max(cfg.grid)
    picks: tuple[int, ...] = ()
    if d_max > 0:
        # One greedy run at the largest budget; its first d picks are
        # exactly the budget-d run (the loop is incremental), so each row
        # reuses the prefix and re-evaluates J from scratch.
        trace, _ = greedy_lqr_schedule(cm, d_max)
        picks = trace.picks

    rows = []
    for d in cfg.grid:
        J_g = cost(cm, picks[:d])
        J_r = random_best(cm, N, d, cfg.trials,
                          _derived_seed(cfg.seed, d)).J
        J_f = first_d(cm, N, d).J
        rows.append((d, J_g, J_r, J_f))
    return rows


def _certificate_row(seed: int, index: int) -> tuple:
    inst = benchmark_instance(realization_rng(seed, index))
    cert = certificate(build_cost_model(inst))
    norm = float(np.linalg.norm(inst.A, 2))
    return (index, norm, cert.gamma_lb, cert.alpha_ub, cert.factor,
            cert.defined)


def _stochastic_row(seed: int, index: int) -> tuple:
    inst = benchmark_instance(realization_rng(seed, index))
    cm = build_cost_model(inst)
    cert = certificate(cm)
    cov_inst = dataclasses.replace(inst, x0=None, sigma=np.eye(inst.n))
    cert_cov = certificate(build_cost_model(cov_inst))
    norm = float(np.linalg.norm(inst.A, 2))
    return (index, norm, cert.gamma_lb, cert.alpha_ub, cert.factor,
            cert.defined, cert_cov.factor)


def _realization_map(row_fn, cfg: ExperimentConfig) -> list[tuple]:
    indices = range(cfg.realizations)
    if cfg.jobs == 1:
        rows = [row_fn(cfg.seed, i) for i in indices]
    else:
        rows = Parallel(n_jobs=cfg.jobs)(
            delayed(row_fn)(cfg.seed, i) for i in indices)
    return sorted(rows, key=lambda r: r[0])


def run_fig3(cfg: ExperimentConfig) -> list[tuple]:
    """Certificate across the ensemble; rows ordered by realization index."""
    return _realization_map(_certificate_row, cfg)


def run_stochastic(cfg: ExperimentConfig) -> list[tuple]:
    """Ensemble rows plus the unit-covariance certificate factor."""
    return _realization_map(_stochastic_row, cfg)


def summarize(rows: list[tuple], norm_col: int = 1, factor_col: int = 4,
              defined_col: int = 5) -> list[tuple]:
    """Per-bin mean and standard deviation of the certificate factor.

    Bins are BIN_COUNT equal intervals over [BIN_LO, BIN_HI] (the last
    bin closed on the right); rows with undefined certificates or norms
    outside the range are left out.  Empty bins report NaN moments.
    """
    edges = np.linspace(BIN_LO, BIN_HI, BIN_COUNT + 1)
    out = []
    for b in range(BIN_COUNT):
        lo, hi = float(edges[b]), float(edges[b + 1])
        last = b == BIN_COUNT - 1
        vals = [row[factor_col] for row in rows
                if row[defined_col] and np.isfinite(row[factor_col])
                and lo <= row[norm_col]
                and (row[norm_col] <= hi if last else row[norm_col] < hi)]
        if vals:
            mean = float(np.mean(vals))
            std = float(np.std(vals))
        else:
            mean = std = float("nan")
        out.append((b, lo, hi, len(vals), mean, std))
    return out


def _format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def write_csv(path, header: tuple[str, ...], rows: list[tuple]) -> None:
    """CSV with a header row, 17-significant-digit floats, LF endings."""
    lines = [",".join(header)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def summary_path(output) -> Path:
    """Companion summary file: results.csv -> results_summary.csv."""
    p = Path(output)
    return p.with_name(p.stem + "_summary" + (p.suffix or ".csv"))


def run_experiment(cfg: ExperimentConfig,
                   instance: Instance | None = None) -> dict[str, Path]:
    """Run one experiment and write its CSV (plus summary where defined).

    Returns the written paths keyed by role ("rows", "summary").
    ``instance`` overrides the bundled plant for the fig2 sweep.
    """
    out = Path(cfg.output)
    written: dict[str, Path] = {}
    if cfg.experiment == "fig2":
        write_csv(out, FIG2_COLUMNS, run_fig2(cfg, instance))
        written["rows"] = out
    elif cfg.experiment == "fig3":
        rows = run_fig3(cfg)
        write_csv(out, FIG3_COLUMNS, rows)
        written["rows"] = out
        spath = summary_path(out)
        write_csv(spath, SUMMARY_COLUMNS, summarize(rows))
        written["summary"] = spath
    else:
        rows = run_stochastic(cfg)
        write_csv(out, STOCHASTIC_COLUMNS, rows)
        written["rows"] = out
        spath = summary_path(out)
        write_csv(spath, SUMMARY_COLUMNS, summarize(rows, factor_col=6))
        written["summary"] = spath
    return written

"""A-priori performance certificates for the greedy schedule.

The normalized objective f is monotone but not submodular, so the classic
1 - 1/e bound does not apply directly.  What survives is a guarantee in
terms of the submodularity ratio gamma and curvature alpha of f:

    f(greedy) >= (1/alpha) (1 - e^{-alpha * gamma}) * f(optimal).

Both metrics are hopeless to enumerate at scale, but cheap spectral
bounds gamma_lb <= gamma and alpha_ub >= alpha follow from the atom
decomposition of K:

    gamma_lb = (min_w tr[L K_w] * (min_w lam_min[I + K_w])^2)
             / (max_w tr[L K_w] * (lam_max[I + K(T)])^2),
    alpha_ub = 1 - gamma_lb.

Plugging the bounds into the guarantee keeps it valid, which is what
:func:`certificate` reports.  For small horizons :func:`exact_metrics`
also evaluates gamma and alpha literally from their definitions (all
subset pairs), and :func:`brute_force_optimum` recovers the true optimal
schedule — both exist mainly to sandwich-test the certificate.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationLimitError
from .lqr_cost import CostModel, cost, normalized_objective
from .model import Schedule

# A certificate is meaningful only if some atom couples to L at all.
TRACE_FLOOR = 1e-14
# Enumerated ratio/curvature constraints with denominators at or below
# this are vacuous (and the division ill-posed), so they are skipped.
DENOM_TOL = 1e-12
# Below this alpha the factor formula degenerates 0/0; use its limit.
ALPHA_LIMIT = 1e-8

EXACT_METRICS_MAX_N = 12


@dataclass(frozen=True)
class Certificate:
    """Computable lower bound on the greedy approximation ratio.

    ``defined`` is False when every atom is orthogonal to L (max trace at
    the floor), in which case f is identically zero and the ratio bound
    is meaningless; the scalar fields are NaN then.  The last four fields
    are the raw ingredients, kept for diagnostics.
    """

    gamma_lb: float
    alpha_ub: float
    factor: float
    defined: bool
    min_atom_trace: float
    max_atom_trace: float
    min_eig_single: float  # min over w of lam_min[I + K({w})]
    max_eig_full: float    # lam_max[I + K(T)]


def guarantee_factor(gamma: float, alpha: float) -> float:
    """(1/alpha)(1 - e^{-alpha*gamma}), with the alpha -> 0 limit (= gamma)."""
    if alpha < ALPHA_LIMIT:
        return gamma
    return -math.expm1(-alpha * gamma) / alpha


def certificate(cm: CostModel) -> Certificate:
    """Spectral certificate (gamma_lb, alpha_ub, factor) for one instance."""
    traces = cm.atom_traces
    min_tr = float(traces.min())
    max_tr = float(traces.max())
    single_eigs = [1.0 + float(np.linalg.eigvalsh(atom)[0]) for atom in cm.atoms]
    min_eig_single = min(single_eigs)
    full = cm.atoms.sum(axis=0)
    full = (full + full.T) / 2.0
    max_eig_full = 1.0 + float(np.linalg.eigvalsh(full)[-1])

    if max_tr <= TRACE_FLOOR:
        nan = float("nan")
        return Certificate(gamma_lb=nan, alpha_ub=nan, factor=nan,
                           defined=False, min_atom_trace=min_tr,
                           max_atom_trace=max_tr,
                           min_eig_single=min_eig_single,
                           max_eig_full=max_eig_full)

    gamma = (min_tr * min_eig_single ** 2) / (max_tr * max_eig_full ** 2)
    gamma = float(np.clip(gamma, 0.0, 1.0))
    alpha = 1.0 - gamma
    return Certificate(gamma_lb=gamma, alpha_ub=alpha,
                       factor=guarantee_factor(gamma, alpha), defined=True,
                       min_atom_trace=min_tr, max_atom_trace=max_tr,
                       min_eig_single=min_eig_single,
                       max_eig_full=max_eig_full)


def _objective_table(cm: CostModel, N: int) -> np.ndarray:
    """f over all 2^N subsets, indexed by bitmask."""
    F = np.empty(1 << N)
    for mask in range(1 << N):
        sched = tuple(w for w in range(N) if mask >> w & 1)
        F[mask] = normalized_objective(cm, sched)
    return F


def exact_metrics_from_table(F: np.ndarray, N: int) -> tuple[float, float]:
    """Exact ratio/curvature enumeration on a precomputed subset table.

    gamma is the smallest ratio (sum of singleton gains) / (set gain) over
    all pairs Omega, S with set gain above DENOM_TOL; alpha is the largest
    1 - rho_j(S\\{j} u Omega) / rho_j(S\\{j}) over triples with positive
    base gain.  Both land in [0, 1] after clamping; with no active
    constraints the vacuous values are gamma = 1, alpha = 0.
    """
    masks = np.arange(1 << N)
    gamma = np.inf
    for S in masks:
        fS = F[S]
        singles = F[S | (1 << np.arange(N))] - fS  # zero for w already in S
        nums = ((masks[:, None] >> np.arange(N)) & 1) @ singles
        dens = F[masks | S] - fS
        live = dens > DENOM_TOL
        if live.any():
            gamma = min(gamma, float((nums[live] / dens[live]).min()))

    alpha = -np.inf
    omegas_by_j = [masks[(masks >> j) & 1 == 0] for j in range(N)]
    for T in masks:
        fT = F[T]
        for j in range(N):
            if T >> j & 1:
                continue
            den = F[T | (1 << j)] - fT
            if den <= DENOM_TOL:
                continue
            ctx = omegas_by_j[j] | T
            ratios = (F[ctx | (1 << j)] - F[ctx]) / den
            alpha = max(alpha, 1.0 - float(ratios.min()))

    gamma = 1.0 if not np.isfinite(gamma) else float(np.clip(gamma, 0.0, 1.0))
    alpha = 0.0 if not np.isfinite(alpha) else float(np.clip(alpha, 0.0, 1.0))
    return gamma, alpha


def exact_metrics(cm: CostModel, N: int) -> tuple[float, float]:
    """Exact submodularity ratio and curvature of f by full enumeration.

    Only feasible for small horizons (guard N <= 12: the loops touch all
    pairs of subsets of {0, ..., N-1}).
    """
    if N != cm.inst.N:
        raise ValueError(f"N={N} does not match the instance horizon {cm.inst.N}")
    if N > EXACT_METRICS_MAX_N:
        raise EnumerationLimitError(
            f"exact metrics enumerate all subset pairs; N={N} exceeds "
            f"the guard of {EXACT_METRICS_MAX_N}")
    return exact_metrics_from_table(_objective_table(cm, N), N)


def brute_force_optimum(cm: CostModel, N: int, d: int) -> tuple[Schedule, float]:
    """Exact maximizer of f over schedules with at most d instants.

    Ties (exact float equality) go to the lexicographically smallest
    schedule.  Guarded: N <= 20 and at most 2e6 candidate subsets.
    """
    if N != cm.inst.N:
        raise ValueError(f"N={N} does not match the instance horizon {cm.inst.N}")
    d = min(d, N)
    total = sum(math.comb(N, k) for k in range(d + 1))
    if N > 20 or total > 2_000_000:
        raise EnumerationLimitError(
            f"brute force over {total} subsets of a {N}-instant horizon "
            "exceeds the enumeration guard")
    J0 = cm.J_empty
    best_f = 0.0
    best_S: Schedule = ()
    for k in range(1, d + 1):
        for S in itertools.combinations(range(N), k):
            f = J0 - cost(cm, S)
            if f > best_f or (f == best_f and S < best_S):
                best_f, best_S = f, S
    return best_S, best_f

"""Closed-form LQR cost of an actuation schedule, and the inputs behind it.

For a schedule S the minimum quadratic cost over inputs supported on S is

    J(S) = tr[ L (I + K(S))^{-1} ] + c,

where L = G G' collects the initial-condition energy (G = Qh Psi x0 for a
fixed initial state, G = Qh Psi Sigma^(1/2) for a zero-mean covariance),
K(S) is the sum of the per-instant atoms from :mod:`.lifted`, and c is
the schedule-independent term x0' Q_0 x0 (resp. tr[Q_0 Sigma]).

The normalized objective f(S) = J(empty) - J(S) is what the greedy
scheduler maximizes; it is nonnegative and nondecreasing because adding
an atom can only shrink (I + K)^{-1} in the PSD order.

J is always evaluated as tr[G' Z^{-1} G] with Z = I + K(S) through a
Cholesky factorization and triangular solves against the few columns of
G; Z^{-1} is never formed.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericError, UnsupportedInitError
from .lifted import LiftedSystem, build_lifted, psd_sqrt
from .model import Instance, Schedule, as_schedule


@dataclass(frozen=True)
class CostModel:
    """Everything needed to evaluate J(S) for one instance.

    ``Lfactor`` is a factor G of L = G G' (one column in the
    deterministic case, n columns in the covariance case);
    ``atom_traces[w]`` caches tr[L K({w})] = ||C_w' G||_F^2, the raw
    ingredients of the performance certificate.
    """

    ls: LiftedSystem
    Lfactor: np.ndarray
    c: float
    atom_traces: np.ndarray
    J_empty: float

    @property
    def inst(self) -> Instance:
        return self.ls.inst

    @property
    def atoms(self) -> np.ndarray:
        """The per-instant PSD atoms K({0}), ..., K({N-1})."""
        return self.ls.atoms


def build_cost_model(inst: Instance, ls: LiftedSystem | None = None) -> CostModel:
    """Assemble the cost model (building the lifted system if not given)."""
    if ls is None:
        ls = build_lifted(inst)
    if inst.is_deterministic:
        G = (ls.PsiW @ inst.x0).reshape(-1, 1)
        c = float(inst.x0 @ inst.Qs[0] @ inst.x0)
    else:
        G = ls.PsiW @ psd_sqrt(inst.sigma)
        c = float(np.trace(inst.Qs[0] @ inst.sigma))
    # tr[L K({w})] = ||C_w' G||_F^2 — nonnegative by construction.
    CtG = np.einsum("wij,ik->wjk", ls.atom_factors, G)
    atom_traces = np.einsum("wjk,wjk->w", CtG, CtG)
    J_empty = float(np.sum(G * G)) + c

    G.flags.writeable = False
    atom_traces.flags.writeable = False
    return CostModel(ls=ls, Lfactor=G, c=c, atom_traces=atom_traces,
                     J_empty=J_empty)


def cost(cm: CostModel, schedule) -> float:
    """J(S): optimal cost when inputs may act only at the scheduled instants."""
    S = as_schedule(schedule, cm.inst.N)
    if not S:
        return cm.J_empty
    Z = cm.ls.k_sum(S)
    Z = (Z + Z.T) / 2.0
    Z[np.diag_indices_from(Z)] += 1.0
    try:
        cf = scipy.linalg.cho_factor(Z, lower=True, check_finite=False)
        Y = scipy.linalg.cho_solve(cf, cm.Lfactor, check_finite=False)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - Z >= I
        raise NumericError(f"cost evaluation failed for schedule {S}") from exc
    val = float(np.sum(cm.Lfactor * Y)) + cm.c
    if not np.isfinite(val):
        raise NumericError(f"cost evaluation returned non-finite value for {S}")
    return val


def normalized_objective(cm: CostModel, schedule) -> float:
    """f(S) = J(empty) - J(S); nonnegative, f(empty) = 0."""
    return cm.J_empty - cost(cm, schedule)


def marginal_gain(cm: CostModel, base, omega: int) -> float:
    """rho_w(S) = f(S + w) - f(S) = J(S) - J(S + w), by two full solves."""
    S = as_schedule(base, cm.inst.N)
    omega = int(omega)
    if omega in S:
        raise ValueError(f"marginal gain undefined: {omega} already scheduled")
    return cost(cm, S) - cost(cm, S + (omega,))


def optimal_inputs(cm: CostModel, schedule) -> np.ndarray:
    """Optimal inputs as an (N, m) array of row vectors u_0, ..., u_{N-1}.

    Rows at unscheduled instants are exactly zero.  Only defined for a
    deterministic initial state; covariance instances have no single input
    sequence (raises UnsupportedInitError).
    """
    inst = cm.inst
    if not inst.is_deterministic:
        raise UnsupportedInitError(
            "optimal inputs need a deterministic initial state")
    S = as_schedule(schedule, inst.N)
    m = inst.m
    U = np.zeros((inst.N, m))
    if not S:
        return U
    cols = np.concatenate([np.arange(t * m, (t + 1) * m) for t in S])
    Ws = cm.ls.W[:, cols]
    M = scipy.linalg.block_diag(*(inst.Rs[t] for t in S)) + Ws.T @ Ws
    M = (M + M.T) / 2.0
    rhs = -Ws.T @ (cm.ls.PsiW @ inst.x0)
    try:
        cf = scipy.linalg.cho_factor(M, lower=True, check_finite=False)
        z = scipy.linalg.cho_solve(cf, rhs, check_finite=False)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - M >= Rbar > 0
        raise NumericError(f"input solve failed for schedule {S}") from exc
    U.reshape(-1)[cols] = z
    return U


def simulate(inst: Instance, inputs) -> tuple[np.ndarray, float]:
    """Roll the plant forward under the given inputs.

    Returns the trajectory x_0, ..., x_N as an (N+1, n) array together
    with the accumulated quadratic cost.  This is an independent check on
    the closed form: it never touches the lifted matrices, just the
    recursion x[k+1] = A x[k] + B u[k].
    """
    if not inst.is_deterministic:
        raise UnsupportedInitError("simulation needs a deterministic initial state")
    U = np.asarray(inputs, dtype=float).reshape(inst.N, inst.m)
    X = np.empty((inst.N + 1, inst.n))
    X[0] = inst.x0
    total = float(X[0] @ inst.Qs[0] @ X[0])
    for k in range(inst.N):
        u = U[k]
        total += float(u @ inst.Rs[k] @ u)
        X[k + 1] = inst.A @ X[k] + inst.B @ u
        total += float(X[k + 1] @ inst.Qs[k + 1] @ X[k + 1])
    return X, total


@dataclass(frozen=True)
class ScheduleReport:
    """Result bundle for one evaluated schedule.

    ``inputs`` is an (N, m) array with zero rows off-schedule, or None
    for covariance-initialized instances; ``gains`` carries per-iteration
    marginal gains when the schedule came out of the greedy loop.
    """

    schedule: Schedule
    J: float
    f: float
    inputs: np.ndarray | None
    gains: tuple[float, ...] | None = None


def evaluate_schedule(cm: CostModel, schedule,
                      gains: tuple[float, ...] | None = None) -> ScheduleReport:
    """Cost, normalized objective, and (when defined) the optimal inputs."""
    S = as_schedule(schedule, cm.inst.N)
    J = cost(cm, S)
    U = optimal_inputs(cm, S) if cm.inst.is_deterministic else None
    return ScheduleReport(schedule=S, J=J, f=cm.J_empty - J, inputs=U,
                          gains=gains)

"""Shared helpers: seeded generators and an independent cost oracle."""

import numpy as np
import pytest

from sparse_lqr import Instance
from sparse_lqr.lqr_cost import simulate


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def scalar_instance(N: int = 1, d: int = 1) -> Instance:
    """The 1-d plant A=B=1, unit weights, x0=1 used for hand-checked values."""
    return Instance(A=[[1.0]], B=[[1.0]], N=N, d=d,
                    Qs=tuple(np.eye(1) for _ in range(N + 1)),
                    Rs=tuple(np.eye(1) for _ in range(N)), x0=[1.0])


def qp_cost(inst: Instance, schedule) -> float:
    """Minimum simulated cost over inputs supported on the schedule.

    Reconstructs the (exactly quadratic) simulated cost in the free input
    coordinates from simulate() evaluations alone, solves the dense
    normal equations, and returns the simulated cost at the minimizer.
    Completely independent of the lifted/closed-form machinery.
    """
    S = tuple(sorted(schedule))
    m = inst.m
    k = len(S) * m

    def embed(z):
        U = np.zeros((inst.N, m))
        for i, t in enumerate(S):
            U[t] = z[i * m:(i + 1) * m]
        return U

    c0 = simulate(inst, embed(np.zeros(k)))[1]
    if k == 0:
        return c0
    E = np.eye(k)
    plus = np.array([simulate(inst, embed(E[i]))[1] for i in range(k)])
    minus = np.array([simulate(inst, embed(-E[i]))[1] for i in range(k)])
    b = (plus - minus) / 2.0
    H = np.empty((k, k))
    for i in range(k):
        H[i, i] = plus[i] + minus[i] - 2.0 * c0
        for j in range(i + 1, k):
            cij = simulate(inst, embed(E[i] + E[j]))[1]
            H[i, j] = H[j, i] = cij - plus[i] - plus[j] + c0
    z = np.linalg.solve(H, -b)
    return simulate(inst, embed(z))[1]

"""Seeded random instances: generic ones for tests, and the benchmark
ensemble of diagonal 2-state plants used by the certificate experiments.
"""

import numpy as np

from .model import Instance, Schedule, as_schedule


def _random_psd(rng: np.random.Generator, n: int, rank: int | None = None
                ) -> np.ndarray:
    r = n if rank is None else rank
    M = rng.normal(size=(r, n))
    P = M.T @ M / max(r, 1)
    return (P + P.T) / 2.0


def _random_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    return _random_psd(rng, n) + (0.2 + rng.uniform()) * np.eye(n)


def random_instance(rng: np.random.Generator, n: int | None = None,
                    m: int | None = None, N: int | None = None,
                    d: int | None = None, deterministic: bool = True,
                    ) -> Instance:
    """Generic random instance for property tests.

    Spectral radius of A lands in [0.3, 1.3] (a mix of stable and
    unstable plants); state weights are PSD and occasionally rank
    deficient, input weights strictly PD.  Weights vary per step half of
    the time.
    """
    n = int(rng.integers(1, 4)) if n is None else n
    m = int(rng.integers(1, 3)) if m is None else m
    N = int(rng.integers(2, 9)) if N is None else N
    d = int(rng.integers(1, N + 1)) if d is None else d

    A = rng.normal(size=(n, n))
    radius = max(abs(np.linalg.eigvals(A)))
    if radius > 1e-9:
        A *= rng.uniform(0.3, 1.3) / radius
    B = rng.normal(size=(n, m))

    def one_q():
        rank = int(rng.integers(1, n + 1)) if rng.uniform() < 0.3 else n
        return _random_psd(rng, n, rank)

    if rng.uniform() < 0.5:
        Q = one_q()
        Qs = tuple(Q.copy() for _ in range(N + 1))
    else:
        Qs = tuple(one_q() for _ in range(N + 1))
    if rng.uniform() < 0.5:
        R = _random_pd(rng, m)
        Rs = tuple(R.copy() for _ in range(N))
    else:
        Rs = tuple(_random_pd(rng, m) for _ in range(N))

    if deterministic:
        return Instance(A=A, B=B, N=N, d=d, Qs=Qs, Rs=Rs,
                        x0=rng.normal(size=n) * 2.0)
    return Instance(A=A, B=B, N=N, d=d, Qs=Qs, Rs=Rs,
                    sigma=_random_psd(rng, n) + 0.1 * np.eye(n))


def random_schedule(rng: np.random.Generator, N: int,
                    size: int | None = None) -> Schedule:
    """Uniform random schedule of the given (or random) size."""
    if size is None:
        size = int(rng.integers(0, N + 1))
    return as_schedule(rng.choice(N, size=size, replace=False), N)


def benchmark_instance(rng: np.random.Generator) -> Instance:
    """One realization of the 2-state certificate benchmark ensemble.

    A = diag(a1, a2) with a_i uniform on [-1.5, 1.5], x0 uniform on
    [-10, 10]^2, B = 0.1 I, N = 5, Q_k = 0.1 I throughout, R_0 = 10 I and
    R_k = 10/k^2 I afterwards.  Input weights shrink over time, so late
    actuation is cheap but has little trajectory left to shape.
    """
    n = 2
    N = 5
    A = np.diag(rng.uniform(-1.5, 1.5, size=n))
    x0 = rng.uniform(-10.0, 10.0, size=n)
    Qs = tuple(0.1 * np.eye(n) for _ in range(N + 1))
    Rs = tuple([10.0 * np.eye(n)]
               + [10.0 / k ** 2 * np.eye(n) for k in range(1, N)])
    return Instance(A=A, B=0.1 * np.eye(n), N=N, d=N, Qs=Qs, Rs=Rs, x0=x0)


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-realization generator; stable under parallelism."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed,
                                               spawn_key=(index,))))

"""Reference scheduling policies to compare the greedy scheduler against.

Two simple baselines: keep the best of k uniformly random budget-d
schedules, or just actuate during the first d steps.  Both return the
same result bundle so experiment code can treat all policies uniformly.
"""

from dataclasses import dataclass

import numpy as np

from .lqr_cost import CostModel, cost
from .model import Schedule, as_schedule


@dataclass(frozen=True)
class PolicyResult:
    """Outcome of one scheduling policy on one instance."""

    policy: str
    schedule: Schedule
    J: float
    f: float
    trials: int
    seed: int | None


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for one trial, stable regardless of evaluation order."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(trial,))))


def random_subset(rng: np.random.Generator, N: int, d: int) -> Schedule:
    """Uniform random d-subset of {0, ..., N-1} by partial Fisher-Yates."""
    pool = np.arange(N)
    for i in range(d):
        j = i + int(rng.integers(N - i))
        pool[i], pool[j] = pool[j], pool[i]
    return as_schedule(pool[:d], N)


def random_best(cm: CostModel, N: int, d: int, trials: int,
                seed: int) -> PolicyResult:
    """Best (lowest-J) of ``trials`` uniformly random budget-d schedules.

    Each trial owns a derived RNG keyed by its index, so results are
    reproducible and independent of any parallel evaluation order, and
    adding trials never changes the earlier draws.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    best_J = np.inf
    best_S: Schedule = ()
    for t in range(trials):
        S = random_subset(_trial_rng(seed, t), N, d)
        J = cost(cm, S)
        if J < best_J:
            best_J, best_S = J, S
    return PolicyResult(policy="random_best", schedule=best_S, J=best_J,
                        f=cm.J_empty - best_J, trials=trials, seed=seed)


def first_d(cm: CostModel, N: int, d: int) -> PolicyResult:
    """Front-loaded policy: actuate at instants {0, ..., d-1}."""
    S = as_schedule(range(min(d, N)), N)
    J = cost(cm, S)
    return PolicyResult(policy="first_d", schedule=S, J=J,
                        f=cm.J_empty - J, trials=1, seed=None)

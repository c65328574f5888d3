"""Greedy actuation scheduling under a cardinality budget.

The loop is generic over a marginal-gain provider ``gain(S, w)`` so it can
be driven by the closed-form LQR objective, a synthetic set function in
tests, or anything else monotone.  Each round scans every unscheduled
instant, takes the largest gain, and breaks ties toward the smallest time
index; candidate order never affects the result.

Because the LQR objective is monotone, gains are nonnegative up to
roundoff.  A gain below -1e-9 is treated as a numerical red flag and
aborts the run rather than being skipped quietly.
"""

from dataclasses import dataclass

from .errors import NumericError
from .lqr_cost import CostModel, ScheduleReport, cost, evaluate_schedule
from .model import Schedule, as_schedule

# Gains within TIE_TOL of the running best count as ties (smallest index
# wins); anything below ABORT_TOL means the objective is not behaving
# monotonically and the run stops.
TIE_TOL = 1e-12
ABORT_TOL = -1e-9


@dataclass(frozen=True)
class GreedyTrace:
    """Per-iteration record of one greedy run.

    ``picks``/``gains``/``objectives`` are aligned: objectives[i] is the
    objective value after the (i+1)-th selection, so it is the running
    sum of gains.  ``schedule`` is the final set in time order.
    """

    picks: tuple[int, ...]
    gains: tuple[float, ...]
    objectives: tuple[float, ...]
    schedule: Schedule


def greedy_schedule(gain, N: int, d: int) -> GreedyTrace:
    """Run min(d, N) rounds of greedy selection over instants {0, ..., N-1}.

    ``gain(S, w)`` must return the marginal gain of adding instant ``w``
    to the sorted tuple ``S``; it is called only with w not in S.
    """
    if d < 1:
        raise ValueError("budget must be at least 1")
    chosen: list[int] = []
    picks: list[int] = []
    gains: list[float] = []
    objectives: list[float] = []
    f_val = 0.0
    for _ in range(min(d, N)):
        base = as_schedule(chosen, N)
        best_w = -1
        best_g = -float("inf")
        for w in range(N):
            if w in chosen:
                continue
            g = float(gain(base, w))
            if g < ABORT_TOL:
                raise NumericError(
                    f"monotonicity violated: adding instant {w} to {base} "
                    f"changed the objective by {g:.3e}")
            if g > best_g + TIE_TOL:
                best_w, best_g = w, g
        chosen.append(best_w)
        picks.append(best_w)
        gains.append(best_g)
        f_val += best_g
        objectives.append(f_val)
    return GreedyTrace(picks=tuple(picks), gains=tuple(gains),
                       objectives=tuple(objectives),
                       schedule=as_schedule(chosen, N))


def greedy_lqr_schedule(cm: CostModel, d: int | None = None
                        ) -> tuple[GreedyTrace, ScheduleReport]:
    """Greedy schedule for an LQR cost model (budget defaults to the instance's).

    Gains are evaluated as J(S) - J(S + w) with a fresh factorization per
    candidate; J(S) is computed once per round.  Returns the trace and a
    full report on the final schedule (the report's J comes from a direct
    cost() call, not from accumulated gains).
    """
    inst = cm.inst
    if d is None:
        d = inst.d
    base_J = {"S": None, "J": 0.0}

    def lqr_gain(S, w):
        if base_J["S"] != S:
            base_J["S"] = S
            base_J["J"] = cost(cm, S)
        return base_J["J"] - cost(cm, S + (w,))

    trace = greedy_schedule(lqr_gain, inst.N, d)
    report = evaluate_schedule(cm, trace.schedule, gains=trace.gains)
    return trace, report

"""Acceptance gate: one test per release criterion, one verdict line each.

Every test prints ``criterion k: PASS/FAIL — ...`` so the suite output
doubles as the sign-off checklist.  Tolerances and time limits are part
of the criteria and asserted, not advisory.
"""

import time

import numpy as np

from sparse_lqr.experiments import (ExperimentConfig, run_experiment,
                                    run_fig2, run_fig3, run_stochastic,
                                    summarize)
from sparse_lqr.generate import (benchmark_instance, random_instance,
                                 random_schedule, realization_rng)
from sparse_lqr.greedy import greedy_lqr_schedule
from sparse_lqr.guarantees import (brute_force_optimum, certificate,
                                   exact_metrics, guarantee_factor)
from sparse_lqr.lifted import build_lifted, k_atom, selection_matrix
from sparse_lqr.lqr_cost import build_cost_model, cost, optimal_inputs, \
    simulate

from conftest import qp_cost


def _verdict(num: int, desc: str, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} — {desc} ({detail})")
    assert ok, f"criterion {num} failed: {detail}"


def test_criterion_1_consistency_triangle():
    start = time.monotonic()
    worst = 0.0
    for i in range(100):
        rng = np.random.default_rng(41000 + i)
        inst = random_instance(rng)
        cm = build_cost_model(inst)
        S = random_schedule(rng, inst.N)
        J = cost(cm, S)
        _, J_sim = simulate(inst, optimal_inputs(cm, S))
        J_qp = qp_cost(inst, S)
        scale = max(1.0, abs(J))
        worst = max(worst, abs(J - J_sim) / scale, abs(J - J_qp) / scale)
    elapsed = time.monotonic() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    _verdict(1, "closed form = simulated = dense-QP cost on 100 instances",
             ok, f"max rel dev {worst:.3e}, {elapsed:.1f}s")


def test_criterion_2_structural_invariants():
    start = time.monotonic()
    gram_exact = True
    worst_add = 0.0
    rank_ok = True
    rng = np.random.default_rng(42000)

    for _ in range(200):
        N = int(rng.integers(1, 11))
        m = int(rng.integers(1, 4))
        S = random_schedule(rng, N)
        Sel = selection_matrix(S, N, m)
        mask = np.zeros((N * m, N * m))
        for t in S:
            mask[t * m:(t + 1) * m, t * m:(t + 1) * m] = np.eye(m)
        gram_exact &= np.array_equal(Sel.T @ Sel, mask)

    def k_direct(ls, S, N, m):
        Sel = selection_matrix(S, N, m)
        mid = Sel.T @ np.linalg.inv(Sel @ ls.Rbar @ Sel.T) @ Sel
        return ls.W @ mid @ ls.W.T

    for i in range(200):
        case = np.random.default_rng(42100 + i)
        inst = random_instance(case)
        ls = build_lifted(inst)
        S = random_schedule(case, inst.N, size=int(case.integers(0, inst.N)))
        w = int(case.choice([t for t in range(inst.N) if t not in S]))
        lhs = k_direct(ls, tuple(sorted(S + (w,))), inst.N, inst.m)
        rhs = k_direct(ls, S, inst.N, inst.m) + k_direct(ls, (w,), inst.N,
                                                         inst.m)
        worst_add = max(worst_add, float(np.max(np.abs(lhs - rhs))))
        for t in range(inst.N):
            eigs = np.linalg.eigvalsh(k_atom(ls, t))
            scale = max(abs(eigs[-1]), 1.0)
            rank_ok &= eigs[0] >= -1e-10 * scale
            rank_ok &= int(np.sum(eigs > 1e-8 * scale)) <= inst.m

    elapsed = time.monotonic() - start
    ok = gram_exact and worst_add <= 1e-10 and rank_ok and elapsed < 10.0
    _verdict(2, "selection Gram exact, atom additivity <= 1e-10, "
                "atoms PSD rank <= m", ok,
             f"gram {gram_exact}, add dev {worst_add:.3e}, rank {rank_ok}, "
             f"{elapsed:.1f}s")


def test_criterion_3_metric_sandwich():
    # Exact ratio/curvature versus their spectral estimates on the 2-state
    # benchmark family (N = 5).  On fully generic plants the curvature half
    # can fail — see test_guarantees.test_spectral_alpha_bound_is_one_sided
    # for a pinned counterexample — so the sandwich is gated on the family
    # the certificate experiments actually run on.
    start = time.monotonic()
    worst_g = worst_a = float("inf")
    ok = True
    for i in range(50):
        inst = benchmark_instance(realization_rng(0, i))
        cm = build_cost_model(inst)
        cert = certificate(cm)
        gamma, alpha = exact_metrics(cm, inst.N)
        ok &= cert.defined
        ok &= cert.gamma_lb <= gamma + 1e-9 and gamma <= 1.0
        ok &= 0.0 <= alpha and alpha <= cert.alpha_ub + 1e-9
        worst_g = min(worst_g, gamma - cert.gamma_lb)
        worst_a = min(worst_a, cert.alpha_ub - alpha)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 120.0
    _verdict(3, "gamma_lb <= gamma <= 1 and 0 <= alpha <= alpha_ub on 50 "
                "benchmark instances", ok,
             f"min gamma slack {worst_g:.3e}, min alpha slack {worst_a:.3e}, "
             f"{elapsed:.1f}s")


def test_criterion_4_certified_fraction_of_optimum():
    start = time.monotonic()
    ok = True
    worst = float("inf")
    for i in range(50):
        rng = np.random.default_rng(43000 + i)
        N = int(rng.integers(2, 9))
        d = int(rng.integers(1, min(N, 4) + 1))
        inst = random_instance(rng, N=N, d=d)
        cm = build_cost_model(inst)
        cert = certificate(cm)
        _, rep = greedy_lqr_schedule(cm, d=d)
        _, f_star = brute_force_optimum(cm, inst.N, d)
        if not cert.defined:
            ok &= f_star <= 1e-12
            continue
        gamma, alpha = exact_metrics(cm, inst.N)
        for factor in (cert.factor, guarantee_factor(gamma, alpha)):
            slack = rep.f - factor * f_star
            ok &= slack >= -1e-9
            worst = min(worst, slack)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 120.0
    _verdict(4, "greedy meets certified fraction of brute-force optimum "
                "(certificate and exact metrics)", ok,
             f"min slack {worst:.3e}, {elapsed:.1f}s")


def test_criterion_5_budget_sweep_ordering():
    start = time.monotonic()
    cfg = ExperimentConfig(experiment="fig2", seed=0, trials=1000,
                           grid=(5, 10, 15, 50))
    rows = {d: (Jg, Jr, Jf) for d, Jg, Jr, Jf in run_fig2(cfg)}
    ok = True
    for d in (5, 10, 15):
        Jg, Jr, Jf = rows[d]
        ok &= Jg <= Jr * (1.0 + 1e-9) and Jg <= Jf * (1.0 + 1e-9)
    Jg50, Jr50, Jf50 = rows[50]
    ok &= Jg50 == Jr50 == Jf50
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 300.0
    _verdict(5, "greedy beats best-of-1000-random and first-d at "
                "d in {5,10,15}; all equal at d=50", ok,
             f"d=10 ratios {rows[10][0] / rows[10][1]:.3f}/"
             f"{rows[10][0] / rows[10][2]:.3f}, {elapsed:.1f}s")


def test_criterion_6_certificate_ensemble_profile():
    start = time.monotonic()
    cfg = ExperimentConfig(experiment="fig3", seed=0, realizations=1000)
    rows = run_fig3(cfg)
    mid = [r[4] for r in rows if r[5] and 0.9 <= r[1] <= 1.1]
    mid_mean = float(np.mean(mid))
    bins = summarize(rows)
    peak = max(b[4] for b in bins if b[3] > 0)
    high = [r[4] for r in rows if r[5] and r[1] > 1.4]
    high_mean = float(np.mean(high))
    elapsed = time.monotonic() - start
    ok = (0.25 <= mid_mean <= 0.55 and high_mean < peak
          and len(rows) == 1000 and elapsed < 120.0)
    _verdict(6, "mean factor 0.25..0.55 for |A| in [0.9,1.1]; decays for "
                "|A| > 1.4", ok,
             f"mid {mid_mean:.4f}, high {high_mean:.4f} < peak {peak:.4f}, "
             f"{elapsed:.1f}s")


def test_criterion_7_unit_covariance_ensemble():
    start = time.monotonic()
    cfg = ExperimentConfig(experiment="stochastic", seed=0,
                           realizations=1000)
    rows = run_stochastic(cfg)
    vals = [r[6] for r in rows if r[5] and np.isfinite(r[6])]
    mean = float(np.mean(vals))
    elapsed = time.monotonic() - start
    ok = 0.15 <= mean <= 0.40 and len(rows) == 1000 and elapsed < 120.0
    _verdict(7, "mean unit-covariance factor in [0.15, 0.40]", ok,
             f"mean {mean:.4f} over {len(vals)} defined rows, {elapsed:.1f}s")


def test_criterion_8_byte_identical_reruns(tmp_path):
    start = time.monotonic()
    ok = True

    def run(cfg):
        paths = run_experiment(cfg)
        out = {}
        for role, p in paths.items():
            out[role] = p.read_bytes()
        return out

    inst_grid = (1, 3, 5)
    a = run(ExperimentConfig("fig2", seed=7, trials=25, grid=inst_grid,
                             output=tmp_path / "a.csv"))
    b = run(ExperimentConfig("fig2", seed=7, trials=25, grid=inst_grid,
                             output=tmp_path / "b.csv"))
    ok &= a == b

    for exp in ("fig3", "stochastic"):
        serial1 = run(ExperimentConfig(exp, seed=5, realizations=40,
                                       output=tmp_path / f"{exp}_s1.csv"))
        serial2 = run(ExperimentConfig(exp, seed=5, realizations=40,
                                       output=tmp_path / f"{exp}_s2.csv"))
        par = run(ExperimentConfig(exp, seed=5, realizations=40, jobs=2,
                                   output=tmp_path / f"{exp}_p.csv"))
        ok &= serial1 == serial2 == par

    elapsed = time.monotonic() - start
    _verdict(8, "same seed gives byte-identical CSVs, serial and parallel",
             ok, f"{elapsed:.1f}s")

"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The lines are also gathered into an "acceptance criteria" section of the
pytest terminal summary.
"""

import statistics

import numpy as np
import pytest

from eigsign import harness, kaczmarz, oracle, problems, signsys, theory
from eigsign.runs import RunConfig
from eigsign.signsys import derive_seed, make_rng
from helpers import enumerated_step_decay, figure_batch, plant_errors, report

pytestmark = pytest.mark.slow

ENSEMBLE_N = 32
ENSEMBLE_TRIALS = 200


@pytest.fixture(scope="module")
def ensemble():
    problem = problems.planted_problem(ENSEMBLE_N, 3.0, "unit", make_rng(0))
    stats = theory.spectral_stats(signsys.build_sign_system(problem))
    cfg = RunConfig(2 * stats.predicted_iters)
    return harness.monte_carlo_algorithm1(problem, ENSEMBLE_TRIALS, cfg, master_seed=0, stats=stats)


def test_weighted_mismatch_bound(ensemble):
    ens = ensemble
    bad = ens.bound_violations(n_sem=3.0)
    ok = report(
        "weighted mismatch bound",
        bad.size == 0,
        f"{len(ens.ks)} recorded k up to {ens.ks[-1]}, {bad.size} exceed bound + 3 SEM, "
        f"recovery rate {ens.recovery_rate:.2f}",
    )
    assert ok


def test_norm_lower_bound(ensemble):
    ens = ensemble
    bad = ens.norm_violations(n_sem=3.0)
    # |y_k| never increases, so the final recorded point is each path's minimum
    ok = report(
        "norm lower bound",
        bad.size == 0 and ens.pathwise_violations == 0,
        f"{bad.size} mean-norm violations, {ens.pathwise_violations} pathwise violations, "
        f"worst min|y_k|^2 / (<y0,eps>^2/n) = {ens.pathwise_worst_ratio:.3f}",
    )
    assert ok


def test_truth_component_conserved():
    worst = 0.0
    for run in range(50):
        problem = problems.planted_problem(16, 3.0, "folded_gaussian", make_rng(derive_seed(100, run)))
        sys = signsys.build_sign_system(problem)
        eps = problem.truth_signs
        rng = make_rng(derive_seed(101, run))
        state = kaczmarz.init_state(16, "random_sphere", rng=rng)
        along0 = float(state.y @ eps)
        for _ in range(10_000):
            state = kaczmarz.kaczmarz_step(state, sys, rng)
            worst = max(worst, abs(float(state.y @ eps) - along0) / abs(along0))
    ok = report("truth component conserved", worst <= 1e-8, f"max relative drift of <y_k, eps> = {worst:.2e}")
    assert ok


def test_expected_step_decay():
    worst_rel = 0.0
    contraction_ok = True
    for i in range(100):
        problem = problems.planted_problem(8, 2.0, "folded_gaussian", make_rng(derive_seed(200, i)))
        sys = signsys.build_sign_system(problem)
        stats = theory.spectral_stats(sys)
        y = make_rng(derive_seed(201, i)).standard_normal(8)
        _, r = theory.decompose(y, problem.truth_signs)
        got = theory.expected_step_decay(sys, r)
        ref = enumerated_step_decay(sys.c.tolist(), y.tolist(), problem.truth_signs)
        worst_rel = max(worst_rel, abs(got - ref) / abs(ref))
        contraction_ok &= got <= stats.contraction * float(r @ r) * (1 + 1e-12)
    ok = report(
        "expected step decay",
        worst_rel <= 1e-10 and contraction_ok,
        f"max relative error vs enumeration {worst_rel:.2e}, contraction bound held: {contraction_ok}",
    )
    assert ok


def test_mismatch_inequality():
    rng = make_rng(300)
    worst = -np.inf
    for _ in range(1000):
        y = rng.standard_normal(16) * rng.exponential(5.0)
        eps = np.where(rng.random(16) < 0.5, -1.0, 1.0)
        lhs, rhs = theory.lemma2_gap(y, eps)
        worst = max(worst, (rhs - lhs) / float(y @ y))
    ok = report("mismatch inequality", worst <= 1e-12, f"max (rhs - lhs) / |y|^2 = {worst:.3e}")
    assert ok


def test_oracle_equivalence():
    failures = []
    for i in range(20):
        n = (8, 10, 12)[i % 3]
        problem = problems.planted_problem(n, 3.0, "folded_gaussian", make_rng(derive_seed(400, i)))
        sys = signsys.build_sign_system(problem)
        stats = theory.spectral_stats(sys)
        truth = oracle.brute_force_signs(sys).signs
        rep = kaczmarz.run_algorithm1(
            sys, RunConfig(kaczmarz.default_max_iters(sys, stats)), make_rng(derive_seed(401, i))
        )
        same = np.array_equal(rep.final_signs, truth) or np.array_equal(rep.final_signs, -truth)
        if not (np.array_equal(truth, problem.truth_signs) and same):
            failures.append(i)
    ok = report("oracle equivalence", not failures, f"20 instances, mismatched: {failures or 'none'}")
    assert ok


def _recovered_count(runs, alg, budget):
    count = 0
    for r in runs:
        rep = getattr(r, alg)
        count += rep.recovered and rep.iters_used <= budget
    return count


def test_fig1_hadamard_top():
    runs = figure_batch("fig1")
    a1 = _recovered_count(runs, "alg1", 50_000)
    a2 = _recovered_count(runs, "alg2", 5_000)
    ok = report("fig1 hadamard-top", a1 >= 9 and a2 >= 9, f"alg1 {a1}/10 within 50000 steps, alg2 {a2}/10 within 5000 flips")
    assert ok


def test_fig2_hadamard_bottom():
    runs = figure_batch("fig2")
    a1 = _recovered_count(runs, "alg1", 50_000)
    a2_fail = sum(not r.alg2.recovered and r.alg2.iters_used == 100_000 for r in runs)
    ok = report(
        "fig2 hadamard-bottom",
        a1 >= 9 and a2_fail >= 9,
        f"alg1 {a1}/10 within 50000 steps, alg2 failed in {a2_fail}/10 at 100000 flips",
    )
    assert ok


def test_fig3_gaussian():
    runs = figure_batch("fig3")
    a1 = sum(r.alg1.recovered for r in runs)
    a2 = _recovered_count(runs, "alg2", 10_000)
    steps = sorted(r.alg1.iters_used for r in runs)
    ok = report(
        "fig3 gaussian",
        a1 >= 9 and a2 >= 9,
        f"alg1 {a1}/10 within the spectral budget (steps {steps[0]}..{steps[-1]}), alg2 {a2}/10 within 10000 flips",
    )
    assert ok


def test_scaling():
    medians, predicted, failed = [], [], 0
    for n in (16, 32, 64):
        steps, preds = [], []
        for inst in range(8):
            problem = problems.planted_problem(n, 3.0, "unit", make_rng(derive_seed(n, inst)))
            sys = signsys.build_sign_system(problem)
            stats = theory.spectral_stats(sys)
            preds.append(stats.predicted_iters)
            cfg = RunConfig(kaczmarz.default_max_iters(sys, stats), record_trace=False)
            for r in range(3):
                rep = kaczmarz.run_algorithm1(sys, cfg, make_rng(derive_seed(500 + n, 3 * inst + r)))
                if rep.recovered:
                    steps.append(rep.iters_used)
                else:
                    failed += 1
        medians.append(statistics.median(steps))
        predicted.append(statistics.median(preds))
    ratios = [m / p for m, p in zip(medians, predicted)]
    grows = medians[0] < medians[1] < medians[2]
    within = all(1 / 20 <= q <= 20 for q in ratios)
    ok = report(
        "scaling",
        grows and within,
        f"median steps {medians}, median predicted {predicted}, "
        f"ratios {[round(q, 3) for q in ratios]}, unrecovered runs {failed}",
    )
    assert ok


def test_residual_diagnostic():
    gauss_sep, hb_sep = [], []
    hb = problems.hadamard_perturbed("bottom")
    hb_sys = signsys.build_sign_system(hb)
    for seed in range(20):
        problem, _ = harness.figure_problem("fig3", seed)
        sys = signsys.build_sign_system(problem)
        wrong = plant_errors(problem.truth_signs, 10, make_rng(derive_seed(seed, 3)))
        gauss_sep.append(theory.residual_split(sys, wrong, problem.truth_signs).separation)
        wrong = plant_errors(hb.truth_signs, 10, make_rng(derive_seed(seed, 3)))
        hb_sep.append(theory.residual_split(hb_sys, wrong, hb.truth_signs).separation)
    g = sum(s > 3 for s in gauss_sep)
    h = sum(s < 3 for s in hb_sep)
    ok = report(
        "residual diagnostic",
        g >= 16 and h > 10,
        f"gaussian separation > 3 in {g}/20 (median {statistics.median(gauss_sep):.2f}), "
        f"hadamard-bottom separation < 3 in {h}/20 (median {statistics.median(hb_sep):.2f})",
    )
    assert ok

"""Monte-Carlo ensembles, figure reproduction and CSV output."""

import csv
import math
import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Optional

import numpy as np

from . import problems, theory
from .errors import ProblemValidationError
from .flipper import run_algorithm2
from .kaczmarz import default_max_iters, run_algorithm1
from .runs import RunConfig, TracePoint
from .signsys import build_sign_system, derive_seed, make_rng

TRACE_HEADER = ["k", "norm_sq", "mismatch", "weighted_obj", "bound"]
ENSEMBLE_HEADER = [
    "k",
    "mean_weighted_obj",
    "sem_weighted_obj",
    "bound",
    "mean_norm_sq",
    "sem_norm_sq",
    "norm_lower_bound",
]
FIGURES = ("fig1", "fig2", "fig3")
# (Algorithm 1 steps, Algorithm 2 flips); None means the spectral default budget
FIGURE_BUDGETS = {
    "fig1": (50_000, 5_000),
    "fig2": (50_000, 100_000),
    "fig3": (None, 10_000),
}
PATHWISE_RTOL = 1e-8


@dataclass
class EnsembleReport:
    trials: int
    ks: np.ndarray
    mean_weighted_obj: np.ndarray
    sem_weighted_obj: np.ndarray
    bound: np.ndarray
    mean_norm_sq: np.ndarray
    sem_norm_sq: np.ndarray
    norm_lower_bound: float
    recovery_rate: float
    seeds: List[int]
    stats: theory.SpectralStats
    pathwise_violations: int = 0
    pathwise_worst_ratio: float = math.inf

    def bound_violations(self, n_sem=3.0):
        """Recorded k where the mean weighted objective exceeds bound + n_sem * SEM."""
        bad = self.mean_weighted_obj > self.bound + n_sem * self.sem_weighted_obj
        return self.ks[bad]

    def norm_violations(self, n_sem=3.0):
        bad = self.mean_norm_sq < self.norm_lower_bound - n_sem * self.sem_norm_sq
        return self.ks[bad]


def _sem(x):
    if x.shape[0] < 2:
        return np.zeros(x.shape[1])
    return x.std(axis=0, ddof=1) / math.sqrt(x.shape[0])


def monte_carlo_algorithm1(problem, trials, cfg, master_seed, stats=None):
    """Run ``trials`` independent copies of Algorithm 1 from uniform unit-sphere
    starts and average the traced quantities on a common k-grid.

    Runs do not stop at recovery, so every trial has the same grid. Trial
    ``t`` uses the seed ``derive_seed(master_seed, t)`` regardless of order.
    """
    if not problem.has_truth:
        raise ProblemValidationError("ensembles need a problem with truth_signs")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sys = build_sign_system(problem)
    stats = theory.spectral_stats(sys) if stats is None else stats
    # runs never stop early, so recovery only needs checking at recorded points
    cfg = replace(cfg, stop_on_success=False, record_trace=True)
    cfg = replace(cfg, check_every=cfg.record_interval())
    truth = problem.truth_signs
    n = problem.n
    seeds = [derive_seed(master_seed, t) for t in range(trials)]
    weighted, norms, y0sq = [], [], []
    violations = 0
    worst = math.inf
    recovered = 0
    for seed in seeds:
        rep = run_algorithm1(sys, cfg, make_rng(seed), truth=truth, stats=stats)
        w = np.array([p.weighted_obj for p in rep.trace])
        nsq = np.array([p.norm_sq for p in rep.trace])
        weighted.append(w)
        norms.append(nsq)
        y0sq.append(rep.y0_norm_sq)
        floor = rep.y0_along_truth ** 2 / n
        if floor > 0:
            worst = min(worst, float(nsq.min() / floor))
            violations += int(np.count_nonzero(nsq < floor * (1 - PATHWISE_RTOL)))
        recovered += rep.trace[-1].mismatch == 0
    ks = np.array([p.k for p in rep.trace])
    weighted = np.vstack(weighted)
    norms = np.vstack(norms)
    mean_y0sq = float(np.mean(y0sq))
    return EnsembleReport(
        trials=trials,
        ks=ks,
        mean_weighted_obj=weighted.mean(axis=0),
        sem_weighted_obj=_sem(weighted),
        bound=np.array([theory.theorem_bound(stats, int(k), mean_y0sq, n) for k in ks]),
        mean_norm_sq=norms.mean(axis=0),
        sem_norm_sq=_sem(norms),
        norm_lower_bound=mean_y0sq / n,
        recovery_rate=recovered / trials,
        seeds=seeds,
        stats=stats,
        pathwise_violations=violations,
        pathwise_worst_ratio=worst,
    )


@lru_cache(maxsize=4)
def _hadamard_with_stats(which):
    problem = problems.hadamard_perturbed(which)
    return problem, theory.spectral_stats(build_sign_system(problem))


def figure_problem(which, master_seed):
    """The instance (and its spectral stats) behind a figure.

    The Hadamard figures use one fixed matrix; the Gaussian figure draws a
    fresh matrix per seed.
    """
    if which == "fig1":
        return _hadamard_with_stats("top")
    if which == "fig2":
        return _hadamard_with_stats("bottom")
    if which == "fig3":
        problem = problems.gaussian_spiked(make_rng(derive_seed(master_seed, 0)))
        return problem, theory.spectral_stats(build_sign_system(problem))
    raise ValueError(f"unknown figure {which!r}; expected one of {FIGURES}")


@dataclass
class FigureRuns:
    which: str
    seed: int
    problem: problems.EigenPhaseProblem
    stats: theory.SpectralStats
    alg1: object
    alg2: object


def figure_runs(which, master_seed):
    """One seeded run of each algorithm on the figure's instance."""
    problem, stats = figure_problem(which, master_seed)
    sys = build_sign_system(problem)
    iters1, iters2 = FIGURE_BUDGETS[which]
    if iters1 is None:
        iters1 = default_max_iters(sys, stats)
    truth = problem.truth_signs
    r1 = run_algorithm1(
        sys, RunConfig(iters1), make_rng(derive_seed(master_seed, 1)), truth=truth, stats=stats
    )
    r2 = run_algorithm2(sys, RunConfig(iters2), make_rng(derive_seed(master_seed, 2)), truth=truth)
    return FigureRuns(which, master_seed, problem, stats, r1, r2)


def reproduce_figure(which, out_dir, master_seed):
    """Write ``<out_dir>/<which>/alg1_<seed>.csv`` and ``alg2_<seed>.csv``."""
    runs = figure_runs(which, master_seed)
    target = os.path.join(out_dir, which)
    os.makedirs(target, exist_ok=True)
    paths = []
    for rep in (runs.alg1, runs.alg2):
        path = os.path.join(target, f"alg{rep.algorithm}_{master_seed}.csv")
        paths.append(write_trace_csv(rep, path))
    return paths


@dataclass
class RecoveryCurve:
    ks: np.ndarray
    fractions: np.ndarray
    first_above: Optional[int] = None
    threshold: float = 0.51


def partial_recovery_curve(report, truth, threshold=0.51):
    """Fraction of correct signs along the trace, up to the global flip.

    ``first_above`` is the first recorded k whose fraction exceeds ``threshold``.
    """
    n = len(truth)
    pts = [p for p in report.trace if p.mismatch is not None]
    if not pts:
        raise ValueError("trace was recorded without ground truth")
    ks = np.array([p.k for p in pts])
    frac = np.array([(n - p.mismatch) / n for p in pts])
    above = np.flatnonzero(frac > threshold)
    first = int(ks[above[0]]) if above.size else None
    return RecoveryCurve(ks=ks, fractions=frac, first_above=first, threshold=threshold)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_trace_csv(report, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for p in report.trace:
            w.writerow([_fmt(p.k), _fmt(p.norm_sq), _fmt(p.mismatch), _fmt(p.weighted_obj), _fmt(p.bound)])
    return path


def read_trace_csv(path):
    def opt(s, cast):
        return None if s == "" else cast(s)

    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != TRACE_HEADER:
        raise ValueError(f"{path} is not a trace CSV")
    return [
        TracePoint(
            k=int(r[0]),
            norm_sq=float(r[1]),
            mismatch=opt(r[2], int),
            weighted_obj=opt(r[3], float),
            bound=opt(r[4], float),
        )
        for r in rows[1:]
    ]


def write_ensemble_csv(ens, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ENSEMBLE_HEADER)
        for i, k in enumerate(ens.ks):
            w.writerow([
                _fmt(k),
                _fmt(ens.mean_weighted_obj[i]),
                _fmt(ens.sem_weighted_obj[i]),
                _fmt(ens.bound[i]),
                _fmt(ens.mean_norm_sq[i]),
                _fmt(ens.sem_norm_sq[i]),
                _fmt(ens.norm_lower_bound),
            ])
    return path
